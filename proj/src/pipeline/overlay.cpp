#include "lanelab/overlay.hpp"

#include <cmath>
#include <cstdlib>

namespace lanelab::pipeline {

std::vector<PixelPoint> bresenham(PixelPoint from, PixelPoint to) {
    std::vector<PixelPoint> pts;
    int x = from.x;
    int y = from.y;
    const int dx = std::abs(to.x - from.x);
    const int dy = -std::abs(to.y - from.y);
    const int sx = from.x < to.x ? 1 : -1;
    const int sy = from.y < to.y ? 1 : -1;
    int err = dx + dy;
    while (true) {
        pts.push_back({x, y});
        if (x == to.x && y == to.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
    return pts;
}

void draw_line(RgbImage& img, PixelPoint from, PixelPoint to, Rgb color, int line_width) {
    const int lo = -(line_width - 1) / 2;
    const int hi = line_width / 2;
    for (const PixelPoint p : bresenham(from, to)) {
        for (int oy = lo; oy <= hi; ++oy) {
            for (int ox = lo; ox <= hi; ++ox) {
                if (img.contains(p.x + ox, p.y + oy)) img.at(p.x + ox, p.y + oy) = color;
            }
        }
    }
}

RgbImage render_overlay(const RgbImage& frame, const FrameResult& result, const PipelineConfig& config) {
    RgbImage out = frame;
    const double sx = static_cast<double>(frame.width()) / config.working_width;
    const double sy = static_cast<double>(frame.height()) / config.working_height;
    auto to_frame = [&](double x, double y) {
        return PixelPoint{static_cast<int>(std::lround((x + 0.5) * sx - 0.5)),
                          static_cast<int>(std::lround((y + 0.5) * sy - 0.5))};
    };
    const auto& style = config.overlay;

    if (style.draw_roi) {
        const auto v = config.roi.vertices(config.working_width, config.working_height);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& a = v[i];
            const auto& b = v[(i + 1) % v.size()];
            draw_line(out, to_frame(a[0], a[1]), to_frame(b[0], b[1]), style.roi_color, 1);
        }
    }
    auto draw_lane = [&](const std::optional<track::LanePosition>& pos, track::TrackStatus status) {
        if (!pos || status == track::TrackStatus::Lost) return;
        const Rgb color = status == track::TrackStatus::Held ? style.held_color : style.tracked_color;
        draw_line(out, to_frame(pos->x1, pos->y1), to_frame(pos->x2, pos->y2), color, style.line_width);
    };
    draw_lane(result.lanes.left, result.left_status);
    draw_lane(result.lanes.right, result.right_status);
    return out;
}

} // namespace lanelab::pipeline
