#include "lanelab/image_io.hpp"

#include "lanelab/imgcore.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace lanelab::io {

namespace {

namespace fs = std::filesystem;

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const fs::path& path, const std::string& what) {
    throw InputError(path.string() + ": " + what);
}

FilePtr open(const fs::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) fail(path, std::string("cannot open (") + mode + ")");
    return f;
}

bool has_png_signature(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

// Decodes to interleaved 8-bit RGB.
RgbImage decode_png(const fs::path& path) {
    FilePtr file = open(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    std::vector<png_bytep> rows;
    std::vector<unsigned char> buffer;
    int width = 0;
    int height = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "corrupt PNG");
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    const png_byte color = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
    png_read_update_info(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    if (stride != static_cast<std::size_t>(width) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unsupported PNG layout");
    }
    buffer.resize(stride * static_cast<std::size_t>(height));
    rows.resize(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + stride * static_cast<std::size_t>(y);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RgbImage img(width, height);
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = {buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]};
    }
    return img;
}

void encode_png(const fs::path& path, int width, int height, int channels, const unsigned char* data) {
    FilePtr file = open(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "PNG write failed");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 3);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
    for (int y = 0; y < height; ++y) {
        png_write_row(png, const_cast<png_bytep>(data + stride * static_cast<std::size_t>(y)));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// Binary PNM (P5/P6) with maxval 255.
struct Pnm {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<unsigned char> data;
};

Pnm decode_pnm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    std::string magic;
    in >> magic;
    Pnm pnm;
    if (magic == "P6") {
        pnm.channels = 3;
    } else if (magic == "P5") {
        pnm.channels = 1;
    } else {
        fail(path, "not a PNG or binary PPM/PGM file");
    }
    auto next_int = [&]() {
        in >> std::ws;
        while (in.peek() == '#') {
            std::string comment;
            std::getline(in, comment);
            in >> std::ws;
        }
        int v = -1;
        in >> v;
        if (!in) fail(path, "malformed PNM header");
        return v;
    };
    pnm.width = next_int();
    pnm.height = next_int();
    const int maxval = next_int();
    if (maxval != 255) fail(path, "only 8-bit PNM is supported");
    in.get();
    pnm.data.resize(static_cast<std::size_t>(pnm.width) * static_cast<std::size_t>(pnm.height) *
                    static_cast<std::size_t>(pnm.channels));
    in.read(reinterpret_cast<char*>(pnm.data.data()), static_cast<std::streamsize>(pnm.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(pnm.data.size())) fail(path, "truncated PNM data");
    return pnm;
}

void encode_pnm(const fs::path& path, const char* magic, int width, int height, const unsigned char* data,
                std::size_t bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << magic << '\n' << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(bytes));
    if (!out) fail(path, "write failed");
}

std::vector<unsigned char> interleave(const RgbImage& img) {
    std::vector<unsigned char> bytes;
    bytes.reserve(img.size() * 3);
    for (const Rgb& p : img.pixels()) {
        bytes.push_back(p.r);
        bytes.push_back(p.g);
        bytes.push_back(p.b);
    }
    return bytes;
}

} // namespace

RgbImage read_rgb(const fs::path& path) {
    if (!fs::is_regular_file(path)) fail(path, "no such file");
    if (has_png_signature(path)) return decode_png(path);
    Pnm pnm = decode_pnm(path);
    if (pnm.width < kMinFrameSide || pnm.height < kMinFrameSide) fail(path, "image smaller than 8x8");
    RgbImage img(pnm.width, pnm.height);
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        if (pnm.channels == 3) {
            px[i] = {pnm.data[3 * i], pnm.data[3 * i + 1], pnm.data[3 * i + 2]};
        } else {
            px[i] = {pnm.data[i], pnm.data[i], pnm.data[i]};
        }
    }
    return img;
}

GrayImage read_gray(const fs::path& path) {
    if (!fs::is_regular_file(path)) fail(path, "no such file");
    if (!has_png_signature(path)) {
        Pnm pnm = decode_pnm(path);
        if (pnm.channels == 1) {
            GrayImage img(pnm.width, pnm.height);
            std::ranges::copy(pnm.data, img.pixels().begin());
            return img;
        }
    }
    return imgcore::to_grayscale(read_rgb(path));
}

void write_png(const fs::path& path, const RgbImage& img) {
    const auto bytes = interleave(img);
    encode_png(path, img.width(), img.height(), 3, bytes.data());
}

void write_png(const fs::path& path, const GrayImage& img) {
    encode_png(path, img.width(), img.height(), 1, img.pixels().data());
}

void write_ppm(const fs::path& path, const RgbImage& img) {
    const auto bytes = interleave(img);
    encode_pnm(path, "P6", img.width(), img.height(), bytes.data(), bytes.size());
}

void write_pgm(const fs::path& path, const GrayImage& img) {
    encode_pnm(path, "P5", img.width(), img.height(), img.pixels().data(), img.size());
}

void write_edges_png(const fs::path& path, const EdgeMap& edges) {
    GrayImage img(edges.width(), edges.height());
    std::ranges::transform(edges.pixels(), img.pixels().begin(),
                           [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
    write_png(path, img);
}

} // namespace lanelab::io
