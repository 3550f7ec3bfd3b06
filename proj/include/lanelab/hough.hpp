#pragma once

#include "lanelab/image.hpp"

#include <cstdint>
#include <numbers>
#include <vector>

namespace lanelab::hough {

/// Endpoint pair in image coordinates (origin top-left, y down). The first
/// endpoint is the lower one on screen: y1 >= y2, and x1 <= x2 when y1 == y2.
struct LineSegment {
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;

    double length() const noexcept;
    friend bool operator==(const LineSegment&, const LineSegment&) = default;
};

/// Reorders endpoints into canonical lower-first order.
LineSegment make_segment(int xa, int ya, int xb, int yb) noexcept;

struct HoughParams {
    double rho_resolution = 1.0;                          ///< pixels
    double theta_resolution = std::numbers::pi / 180.0;   ///< radians
    int vote_threshold = 30;
    double min_line_length = 20.0;                         ///< pixels, Euclidean
    int max_line_gap = 20;                                 ///< pixels along the major axis
    std::uint64_t seed = 0x1a2e5eedULL;

    void validate() const;
};

struct DetectedSegment {
    LineSegment segment;
    std::vector<PixelPoint> support;  ///< edge pixels consumed by this segment
};

/// Progressive probabilistic Hough transform.
///
/// Edge pixels are drawn in a seeded random order; each draw votes into a
/// (rho, theta) accumulator with theta in [0, pi) and signed rho. When the
/// drawn pixel's best bin reaches vote_threshold, the line is walked in both
/// directions from that pixel, tolerating runs of up to max_line_gap missing
/// pixels, then refitted by total least squares and walked again so long
/// segments do not drift off their pixels at the quantized angle. Segments of
/// at least min_line_length are returned and their pixels withdraw their votes.
std::vector<DetectedSegment> hough_segments_detailed(const EdgeMap& edges, const HoughParams& params);

std::vector<LineSegment> hough_segments(const EdgeMap& edges, const HoughParams& params);

} // namespace lanelab::hough
