#include "lanelab/imgcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lanelab::imgcore {

void BilateralParams::validate() const {
    if (!(sigma_spatial > 0.0) || !(sigma_range > 0.0) || radius < 1) {
        throw InvalidArgument("bilateral parameters must be strictly positive (sigma_spatial=" +
                              std::to_string(sigma_spatial) + ", sigma_range=" +
                              std::to_string(sigma_range) + ", radius=" + std::to_string(radius) +
                              ")");
    }
}

GrayImage bilateral_filter(const GrayImage& img, const BilateralParams& params) {
    params.validate();
    const int w = img.width();
    const int h = img.height();
    const int r = params.radius;
    if (2 * r > std::min(w, h)) {
        throw InvalidArgument("bilateral radius " + std::to_string(r) +
                              " exceeds half the smaller image side");
    }

    const int side = 2 * r + 1;
    std::vector<double> spatial(static_cast<std::size_t>(side * side));
    const double s_den = 2.0 * params.sigma_spatial * params.sigma_spatial;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            spatial[static_cast<std::size_t>((dy + r) * side + (dx + r))] =
                std::exp(-static_cast<double>(dx * dx + dy * dy) / s_den);
        }
    }
    // Indexed by (Iq - Ip) + 255.
    std::array<double, 511> range{};
    const double r_den = 2.0 * params.sigma_range * params.sigma_range;
    for (int d = -255; d <= 255; ++d) {
        range[static_cast<std::size_t>(d + 255)] = std::exp(-static_cast<double>(d * d) / r_den);
    }

    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - r);
        const int y1 = std::min(h - 1, y + r);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - r);
            const int x1 = std::min(w - 1, x + r);
            const double* rw = range.data() + 255 - img.at(x, y);
            double norm = 0.0;
            double acc = 0.0;
            for (int qy = y0; qy <= y1; ++qy) {
                const std::uint8_t* row = img.row(qy).data();
                const double* srow = spatial.data() + (qy - y + r) * side + (r - x);
                for (int qx = x0; qx <= x1; ++qx) {
                    const int iq = row[qx];
                    const double weight = srow[qx] * rw[iq];
                    norm += weight;
                    acc += weight * iq;
                }
            }
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(round_half_up(acc / norm), 0.0, 255.0));
        }
    }
    return out;
}

void gaussian_blur_plane(Raster<double>& plane, double sigma, int radius) {
    if (!(sigma > 0.0) || radius < 1) {
        throw InvalidArgument("gaussian blur needs sigma > 0 and radius >= 1");
    }
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    }
    const int w = plane.width();
    const int h = plane.height();
    // The clipped window is a rectangle, so the normalized 2-D kernel factorizes.
    Raster<double> tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double norm = 0.0;
            double acc = 0.0;
            for (int qx = std::max(0, x - radius); qx <= std::min(w - 1, x + radius); ++qx) {
                const double k = kernel[static_cast<std::size_t>(qx - x + radius)];
                norm += k;
                acc += k * plane.at(qx, y);
            }
            tmp.at(x, y) = acc / norm;
        }
    }
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        double norm = 0.0;
        for (int qy = y0; qy <= y1; ++qy) norm += kernel[static_cast<std::size_t>(qy - y + radius)];
        auto dst = plane.row(y);
        std::fill(dst.begin(), dst.end(), 0.0);
        for (int qy = y0; qy <= y1; ++qy) {
            const double k = kernel[static_cast<std::size_t>(qy - y + radius)] / norm;
            const auto src = tmp.row(qy);
            for (int x = 0; x < w; ++x) dst[static_cast<std::size_t>(x)] += k * src[static_cast<std::size_t>(x)];
        }
    }
}

GrayImage gaussian_blur(const GrayImage& img, double sigma, int radius) {
    Raster<double> plane(img.width(), img.height());
    std::ranges::copy(img.pixels(), plane.pixels().begin());
    gaussian_blur_plane(plane, sigma, radius);
    GrayImage out(img.width(), img.height());
    std::ranges::transform(plane.pixels(), out.pixels().begin(), [](double v) {
        return static_cast<std::uint8_t>(std::clamp(round_half_up(v), 0.0, 255.0));
    });
    return out;
}

} // namespace lanelab::imgcore
