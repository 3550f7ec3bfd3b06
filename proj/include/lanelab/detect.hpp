/**
 * @file detect.hpp
 * @brief Lane verification: slope-sign side split, angle bands around 45 and
 *        135 degrees, and longest-line selection per side.
 */
#pragma once

#include "lanelab/hough.hpp"
#include "lanelab/image.hpp"

#include <numbers>
#include <optional>
#include <vector>

namespace lanelab::detect {

using hough::LineSegment;

enum class Side { Left, Right, Rejected };

struct CandidateLine {
    LineSegment segment;
    double slope = 0.0;   ///< dy/dx in image coordinates (y down); NaN when dx == 0
    double angle = 0.0;   ///< radians in [0, pi), anticlockwise from +x with y up
    double length = 0.0;
    Side side = Side::Rejected;
};

/// Derives slope, angle, length and side for one segment.
CandidateLine make_candidate(const LineSegment& segment);

struct AngleConstraint {
    double c = std::numbers::pi / 12.0;  ///< half-width of each acceptance band

    void validate() const;
    double left_mid() const noexcept { return std::numbers::pi / 4.0; }
    double right_mid() const noexcept { return 3.0 * std::numbers::pi / 4.0; }
};

struct LanePair {
    std::optional<LineSegment> left;
    std::optional<LineSegment> right;

    friend bool operator==(const LanePair&, const LanePair&) = default;
};

struct SideSplit {
    std::vector<CandidateLine> left;   ///< negative image-frame slope
    std::vector<CandidateLine> right;  ///< positive image-frame slope
};

/// Horizontal (m = 0) and vertical (dx = 0) segments are dropped.
SideSplit classify_side(const std::vector<LineSegment>& segments);

/// Keeps candidates whose angle lies in their side's closed band
/// [mid - c, mid + c]. Rejected candidates never pass.
std::vector<CandidateLine> filter_by_angle(const std::vector<CandidateLine>& candidates,
                                           const AngleConstraint& constraint);

/// Longest candidate per side. Equal lengths fall back to the smaller
/// distance from the band midpoint, then the smaller lower-endpoint x.
LanePair select_longest(const std::vector<CandidateLine>& left, const std::vector<CandidateLine>& right);

/// Full verification chain on an already masked edge map.
LanePair detect_lanes(const EdgeMap& edges, const hough::HoughParams& hough, const AngleConstraint& constraint);

/// Verification without the Hough step, for callers that time stages separately.
LanePair verify_segments(const std::vector<LineSegment>& segments, const AngleConstraint& constraint);

} // namespace lanelab::detect
