#include "lanelab/imgcore.hpp"

#include <algorithm>

namespace lanelab::imgcore {

std::uint8_t luma(Rgb px) noexcept {
    const double v = kLumaRed * px.r + kLumaGreen * px.g + kLumaBlue * px.b;
    return static_cast<std::uint8_t>(std::clamp(round_half_up(v), 0.0, 255.0));
}

GrayImage to_grayscale(const RgbImage& img) {
    GrayImage out(img.width(), img.height());
    std::ranges::transform(img.pixels(), out.pixels().begin(), luma);
    return out;
}

} // namespace lanelab::imgcore
