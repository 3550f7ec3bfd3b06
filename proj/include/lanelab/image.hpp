/**
 * @file image.hpp
 * @brief Row-major rasters used by every pixel-level stage.
 */
#pragma once

#include "lanelab/errors.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lanelab {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct PixelPoint {
    int x = 0;
    int y = 0;

    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

template <typename T>
class Raster {
public:
    using value_type = T;

    Raster() = default;
    Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw InvalidArgument("raster dimensions must be positive, got " +
                                  std::to_string(width) + "x" + std::to_string(height));
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    T& at(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& at(int x, int y) const noexcept { return data_[index(x, y)]; }

    std::span<T> row(int y) noexcept {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }
    std::span<const T> row(int y) const noexcept {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }

    bool same_size(int width, int height) const noexcept {
        return width_ == width && height_ == height;
    }
    template <typename U>
    bool same_size(const Raster<U>& other) const noexcept {
        return same_size(other.width(), other.height());
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Minimum side length accepted for colour frames.
inline constexpr int kMinFrameSide = 8;

/// 24-bit colour frame; both sides at least kMinFrameSide.
class RgbImage : public Raster<Rgb> {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {}) : Raster<Rgb>(check(width, height), height, fill) {}

private:
    static int check(int width, int height) {
        if (width < kMinFrameSide || height < kMinFrameSide) {
            throw InvalidArgument("colour frames must be at least 8x8, got " +
                                  std::to_string(width) + "x" + std::to_string(height));
        }
        return width;
    }
};

using GrayImage = Raster<std::uint8_t>;

/// Binary edge raster; each element is 0 (no edge) or 1 (edge).
class EdgeMap : public Raster<std::uint8_t> {
public:
    EdgeMap() = default;
    EdgeMap(int width, int height) : Raster<std::uint8_t>(width, height, 0) {}

    bool is_edge(int x, int y) const noexcept { return at(x, y) != 0; }
    void set_edge(int x, int y, bool on = true) noexcept { at(x, y) = on ? 1 : 0; }
    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto v : pixels()) n += v != 0;
        return n;
    }
};

} // namespace lanelab
