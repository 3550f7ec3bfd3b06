#include "lanelab/image_io.hpp"
#include "lanelab/imgcore.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

using namespace lanelab;
using namespace lanelab::imgcore;

namespace {

GrayImage step_image(int w, int h, int split, std::uint8_t lo, std::uint8_t hi) {
    GrayImage img(w, h, lo);
    for (int y = 0; y < h; ++y) {
        for (int x = split; x < w; ++x) img.at(x, y) = hi;
    }
    return img;
}

Raster<float> random_magnitudes(int w, int h, std::mt19937_64& rng) {
    Raster<float> m(w, h);
    std::uniform_real_distribution<float> value(0.0f, 40.0f);
    for (auto& v : m.pixels()) v = value(rng);
    return m;
}

} // namespace

TEST_CASE("luma examples") {
    CHECK(luma({255, 255, 255}) == 255);
    CHECK(luma({100, 100, 100}) == 100);
    CHECK(luma({255, 0, 0}) == 77);
}

TEST_CASE("luma of gray pixels tracks the gray level within one") {
    for (int v = 0; v <= 255; ++v) {
        const auto g = static_cast<std::uint8_t>(v);
        CHECK(std::abs(luma({g, g, g}) - v) <= 1);
    }
}

TEST_CASE("to_grayscale applies luma per pixel") {
    RgbImage img(8, 8, {10, 20, 30});
    img.at(3, 4) = {255, 0, 0};
    const GrayImage gray = to_grayscale(img);
    CHECK(gray.width() == 8);
    CHECK(gray.at(3, 4) == 77);
    CHECK(gray.at(0, 0) == luma({10, 20, 30}));
}

TEST_CASE("bilateral: constant image is a fixed point") {
    const GrayImage img(32, 32, 128);
    CHECK(bilateral_filter(img, {}) == img);
}

TEST_CASE("bilateral matches the brute-force oracle bit-exactly") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 5; ++i) {
        const GrayImage img = oracle::random_gray(32, 32, rng);
        CHECK(bilateral_filter(img, {2.0, 30.0, 4}) == oracle::bilateral(img, 2.0, 30.0, 4));
        CHECK(bilateral_filter(img, {3.0, 20.0, 6}) == oracle::bilateral(img, 3.0, 20.0, 6));
    }
}

TEST_CASE("bilateral: isolated bright centre survives a tiny range sigma") {
    GrayImage img(3, 3, 0);
    img.at(1, 1) = 200;
    const GrayImage out = bilateral_filter(img, {3.0, 1.0, 1});
    CHECK(std::abs(out.at(1, 1) - 200) <= 1);
}

TEST_CASE("bilateral output stays within the window range") {
    std::mt19937_64 rng(11);
    const GrayImage img = oracle::random_gray(24, 24, rng);
    const int r = 3;
    const GrayImage out = bilateral_filter(img, {2.0, 25.0, r});
    for (int y = 0; y < 24; ++y) {
        for (int x = 0; x < 24; ++x) {
            int lo = 255;
            int hi = 0;
            for (int qy = std::max(0, y - r); qy <= std::min(23, y + r); ++qy) {
                for (int qx = std::max(0, x - r); qx <= std::min(23, x + r); ++qx) {
                    lo = std::min<int>(lo, img.at(qx, qy));
                    hi = std::max<int>(hi, img.at(qx, qy));
                }
            }
            CHECK(out.at(x, y) >= lo);
            CHECK(out.at(x, y) <= hi);
        }
    }
}

TEST_CASE("bilateral with a huge range sigma converges to Gaussian smoothing") {
    std::mt19937_64 rng(13);
    const GrayImage img = oracle::random_gray(20, 20, rng);
    const GrayImage out = bilateral_filter(img, {2.0, 1e6, 4});
    const GrayImage ref = oracle::gaussian_mean(img, 2.0, 4);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out.pixels()[i] - ref.pixels()[i]) <= 1);
}

TEST_CASE("bilateral rejects bad parameters") {
    const GrayImage img(16, 16, 0);
    CHECK_THROWS_AS(bilateral_filter(img, {0.0, 20.0, 2}), InvalidArgument);
    CHECK_THROWS_AS(bilateral_filter(img, {3.0, -1.0, 2}), InvalidArgument);
    CHECK_THROWS_AS(bilateral_filter(img, {3.0, 20.0, 0}), InvalidArgument);
    CHECK_THROWS_AS(bilateral_filter(img, {3.0, 20.0, 9}), InvalidArgument);
}

TEST_CASE("canny: constant image has no edges") {
    CHECK(canny_oitr(GrayImage(16, 16, 90), {}).count() == 0);
}

TEST_CASE("canny: 8x8 step of 40 gives a single edge column") {
    const EdgeMap edges = canny_oitr(step_image(8, 8, 4, 0, 40), {30, 10});
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) CHECK(edges.is_edge(x, y) == (x == 3 && y >= 1 && y <= 6));
    }
}

TEST_CASE("canny: step below the upper threshold is not detected") {
    CHECK(canny_oitr(step_image(8, 8, 4, 0, 25), {30, 10}).count() == 0);
    CHECK(canny_oitr(step_image(8, 8, 4, 0, 40), {45, 15}).count() == 0);
}

TEST_CASE("hysteresis keeps a weak chain attached to one strong pixel") {
    Raster<float> m(12, 12, 0.0f);
    for (int i = 2; i < 9; ++i) m.at(i, i) = 15.0f;
    m.at(5, 5) = 35.0f;
    m.at(10, 2) = 20.0f;  // weak and isolated
    const EdgeMap e = hysteresis(m, 10, 30);
    for (int i = 2; i < 9; ++i) CHECK(e.is_edge(i, i));
    CHECK_FALSE(e.is_edge(10, 2));
    CHECK(e.count() == 7);
}

TEST_CASE("hysteresis matches the BFS oracle") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        const Raster<float> m = random_magnitudes(16, 16, rng);
        CHECK(hysteresis(m, 10, 30) == oracle::hysteresis_bfs(m, 10, 30));
        CHECK(hysteresis(m, 20, 36) == oracle::hysteresis_bfs(m, 20, 36));
    }
}

TEST_CASE("degenerate thresholds [T, T] reduce to strong thresholding") {
    std::mt19937_64 rng(19);
    const Raster<float> m = random_magnitudes(16, 16, rng);
    const EdgeMap e = hysteresis(m, 25, 25);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) CHECK(e.is_edge(x, y) == (m.at(x, y) >= 25.0f));
    }
}

TEST_CASE("every canny pixel is a directional maximum at or above lower") {
    std::mt19937_64 rng(23);
    const GrayImage img = bilateral_filter(oracle::random_gray(40, 40, rng), {3.0, 60.0, 3});
    const GradientField grad = sobel_gradient(img);
    const Raster<float> nms = non_max_suppression(grad);
    const EdgeMap edges = canny_oitr(img, {30, 10});
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 40; ++x) {
            if (!edges.is_edge(x, y)) continue;
            CHECK(nms.at(x, y) > 0.0f);
            CHECK(nms.at(x, y) == grad.magnitude.at(x, y));
            CHECK(nms.at(x, y) >= 10.0f);
        }
    }
}

TEST_CASE("OITR thresholds are validated") {
    CHECK_THROWS_AS(OitrThresholds({10, 30}).validate(), InvalidArgument);
    CHECK_THROWS_AS(OitrThresholds({30, 0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(OitrThresholds({30, 30}).validate(), InvalidArgument);
    CHECK_NOTHROW(OitrThresholds({30, 10}).validate());
}

TEST_CASE("ROI: scan rows at the working resolution") {
    const TrapezoidRoi roi;
    CHECK(roi.top_row(594) == 368);
    CHECK(roi.bottom_row(594) == 535);
}

TEST_CASE("ROI mask: empty in, empty out") {
    CHECK(apply_roi_mask(EdgeMap(64, 48), {}).count() == 0);
}

TEST_CASE("ROI mask keeps the trapezoid centroid") {
    const TrapezoidRoi roi;
    EdgeMap e(1056, 594);
    const int cx = 1056 / 2;
    const int cy = static_cast<int>((roi.top_y_frac + roi.bottom_y_frac) / 2 * 594);
    e.set_edge(cx, cy);
    CHECK(apply_roi_mask(e, roi).is_edge(cx, cy));
}

TEST_CASE("ROI mask agrees with the row-interval oracle") {
    const TrapezoidRoi roi;
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> xs(0, 1055);
    std::uniform_int_distribution<int> ys(300, 593);
    EdgeMap e(1056, 594);
    std::vector<PixelPoint> pts;
    for (int i = 0; i < 50; ++i) {
        pts.push_back({xs(rng), ys(rng)});
        e.set_edge(pts.back().x, pts.back().y);
    }
    const EdgeMap masked = apply_roi_mask(e, roi);
    for (const auto& p : pts) CHECK(masked.is_edge(p.x, p.y) == oracle::trapezoid_contains(roi, p.x, p.y, 1056, 594));
}

TEST_CASE("ROI mask is idempotent and never adds pixels") {
    std::mt19937_64 rng(31);
    EdgeMap e(200, 120);
    std::bernoulli_distribution on(0.3);
    for (auto& v : e.pixels()) v = on(rng) ? 1 : 0;
    const EdgeMap once = apply_roi_mask(e, {});
    CHECK(apply_roi_mask(once, {}) == once);
    for (std::size_t i = 0; i < e.size(); ++i) CHECK((once.pixels()[i] <= e.pixels()[i]));
}

TEST_CASE("ROI geometry is validated") {
    CHECK_THROWS_AS(TrapezoidRoi({0.9, 0.6, 0.25, 0.95}).validate(), InvalidArgument);
    CHECK_THROWS_AS(TrapezoidRoi({0.6, 0.9, 0.95, 0.25}).validate(), InvalidArgument);
    CHECK_THROWS_AS(TrapezoidRoi({0.6, 0.9, 0.25, 1.5}).validate(), InvalidArgument);
}

TEST_CASE("resize: same size is identity, constant stays constant") {
    RgbImage img(16, 12, {40, 80, 120});
    img.at(3, 3) = {1, 2, 3};
    CHECK(resize_bilinear(img, 16, 12) == img);
    const RgbImage flat(16, 12, {40, 80, 120});
    const RgbImage big = resize_bilinear(flat, 33, 27);
    CHECK(big.width() == 33);
    for (const auto& px : big.pixels()) CHECK(px == Rgb{40, 80, 120});
}

TEST_CASE("frames smaller than 8x8 are rejected") {
    CHECK_THROWS_AS(RgbImage(7, 8), InvalidArgument);
    CHECK_THROWS_AS(GrayImage(0, 3), InvalidArgument);
}

TEST_CASE("image files round-trip") {
    const auto dir = std::filesystem::temp_directory_path() / "lanelab_test_imgcore_io";
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(37);
    RgbImage img(9, 11);
    for (auto& px : img.pixels()) px = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), 7};
    io::write_png(dir / "a.png", img);
    io::write_ppm(dir / "a.ppm", img);
    CHECK(io::read_rgb(dir / "a.png") == img);
    CHECK(io::read_rgb(dir / "a.ppm") == img);
    const GrayImage gray = to_grayscale(img);
    io::write_png(dir / "g.png", gray);
    io::write_pgm(dir / "g.pgm", gray);
    CHECK(io::read_gray(dir / "g.png") == gray);
    CHECK(io::read_gray(dir / "g.pgm") == gray);
    CHECK_THROWS(io::read_rgb(dir / "missing.png"));
    std::filesystem::remove_all(dir);
}
