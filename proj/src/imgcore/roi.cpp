#include "lanelab/imgcore.hpp"

#include <algorithm>
#include <string>

namespace lanelab::imgcore {

namespace {

bool in_unit_open(double v) { return v > 0.0 && v < 1.0; }

int frac_row(double frac, int height) {
    return std::clamp(static_cast<int>(round_half_up(frac * height)), 0, height - 1);
}

} // namespace

void TrapezoidRoi::validate() const {
    const bool ok = in_unit_open(top_y_frac) && in_unit_open(bottom_y_frac) && top_y_frac < bottom_y_frac &&
                    top_width_frac > 0.0 && bottom_width_frac <= 1.0 && top_width_frac <= bottom_width_frac;
    if (!ok) {
        throw InvalidArgument("degenerate or malformed trapezoid ROI (top_y=" + std::to_string(top_y_frac) +
                              ", bottom_y=" + std::to_string(bottom_y_frac) + ", top_width=" +
                              std::to_string(top_width_frac) + ", bottom_width=" +
                              std::to_string(bottom_width_frac) + ")");
    }
}

std::array<std::array<double, 2>, 4> TrapezoidRoi::vertices(int width, int height) const {
    const double cx = width / 2.0;
    const double ty = top_y_frac * height;
    const double by = bottom_y_frac * height;
    const double th = top_width_frac * width / 2.0;
    const double bh = bottom_width_frac * width / 2.0;
    return {{{cx - th, ty}, {cx + th, ty}, {cx + bh, by}, {cx - bh, by}}};
}

int TrapezoidRoi::top_row(int height) const { return frac_row(top_y_frac, height); }
int TrapezoidRoi::bottom_row(int height) const { return frac_row(bottom_y_frac, height); }

bool TrapezoidRoi::contains(double x, double y, int width, int height) const {
    const auto v = vertices(width, height);
    // Vertices run clockwise on screen (y down), so interior points sit on the
    // non-negative side of every edge cross product.
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const double cross = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
        if (cross < 0.0) return false;
    }
    return true;
}

EdgeMap apply_roi_mask(const EdgeMap& edges, const TrapezoidRoi& roi) {
    roi.validate();
    const int w = edges.width();
    const int h = edges.height();
    EdgeMap out(w, h);
    const int y0 = std::max(0, static_cast<int>(std::floor(roi.top_y_frac * h)));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(roi.bottom_y_frac * h)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = 0; x < w; ++x) {
            if (edges.is_edge(x, y) && roi.contains(x, y, w, h)) out.set_edge(x, y);
        }
    }
    return out;
}

} // namespace lanelab::imgcore
