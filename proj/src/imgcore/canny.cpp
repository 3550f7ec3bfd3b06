#include "lanelab/imgcore.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace lanelab::imgcore {

namespace {

constexpr double kTan22_5 = 0.41421356237309503;
constexpr double kTan67_5 = 2.4142135623730949;

// Backward neighbour offset per bin; the forward neighbour is the negation.
constexpr int kBackDx[4] = {-1, -1, 0, -1};
constexpr int kBackDy[4] = {0, -1, -1, 1};

GradientBin quantize(int gx, int gy) noexcept {
    const double ax = std::abs(gx);
    const double ay = std::abs(gy);
    if (ay <= ax * kTan22_5) return GradientBin::k0;
    if (ay > ax * kTan67_5) return GradientBin::k90;
    return (gx > 0) == (gy > 0) ? GradientBin::k45 : GradientBin::k135;
}

} // namespace

void OitrThresholds::validate() const {
    if (!(lower > 0.0) || !(lower < upper)) {
        throw InvalidArgument("thresholds must satisfy 0 < lower < upper (got upper=" +
                              std::to_string(upper) + ", lower=" + std::to_string(lower) + ")");
    }
}

GradientField sobel_gradient(const GrayImage& img) {
    const int w = img.width();
    const int h = img.height();
    GradientField field{Raster<float>(w, h, 0.0f), Raster<std::uint8_t>(w, h, 0)};
    for (int y = 1; y + 1 < h; ++y) {
        const auto up = img.row(y - 1);
        const auto mid = img.row(y);
        const auto down = img.row(y + 1);
        auto mag = field.magnitude.row(y);
        auto bin = field.bin.row(y);
        for (int x = 1; x + 1 < w; ++x) {
            const auto l = static_cast<std::size_t>(x - 1);
            const auto c = static_cast<std::size_t>(x);
            const auto r = static_cast<std::size_t>(x + 1);
            const int gx = (up[r] + 2 * mid[r] + down[r]) - (up[l] + 2 * mid[l] + down[l]);
            const int gy = (down[l] + 2 * down[c] + down[r]) - (up[l] + 2 * up[c] + up[r]);
            if (gx == 0 && gy == 0) continue;
            mag[c] = static_cast<float>(std::sqrt(static_cast<double>(gx * gx + gy * gy)) / 4.0);
            bin[c] = static_cast<std::uint8_t>(quantize(gx, gy));
        }
    }
    return field;
}

Raster<float> non_max_suppression(const GradientField& grad) {
    const int w = grad.magnitude.width();
    const int h = grad.magnitude.height();
    Raster<float> out(w, h, 0.0f);
    for (int y = 1; y + 1 < h; ++y) {
        for (int x = 1; x + 1 < w; ++x) {
            const float m = grad.magnitude.at(x, y);
            if (m <= 0.0f) continue;
            const int b = grad.bin.at(x, y);
            const float back = grad.magnitude.at(x + kBackDx[b], y + kBackDy[b]);
            const float fwd = grad.magnitude.at(x - kBackDx[b], y - kBackDy[b]);
            if (m > back && m >= fwd) out.at(x, y) = m;
        }
    }
    return out;
}

EdgeMap hysteresis(const Raster<float>& suppressed, double lower, double upper) {
    if (!(lower > 0.0) || lower > upper) {
        throw InvalidArgument("hysteresis needs 0 < lower <= upper");
    }
    const int w = suppressed.width();
    const int h = suppressed.height();
    EdgeMap edges(w, h);
    std::vector<PixelPoint> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (suppressed.at(x, y) >= upper && !edges.is_edge(x, y)) {
                edges.set_edge(x, y);
                stack.push_back({x, y});
            }
        }
    }
    while (!stack.empty()) {
        const PixelPoint p = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = p.x + dx;
                const int ny = p.y + dy;
                if (!suppressed.contains(nx, ny) || edges.is_edge(nx, ny)) continue;
                if (suppressed.at(nx, ny) >= lower) {
                    edges.set_edge(nx, ny);
                    stack.push_back({nx, ny});
                }
            }
        }
    }
    return edges;
}

EdgeMap canny_oitr(const GrayImage& img, const OitrThresholds& thresholds, const CannyOptions& options) {
    thresholds.validate();
    const GradientField grad =
        options.gaussian_presmooth ? sobel_gradient(gaussian_blur(img, 1.4, 2)) : sobel_gradient(img);
    return hysteresis(non_max_suppression(grad), thresholds.lower, thresholds.upper);
}

} // namespace lanelab::imgcore
