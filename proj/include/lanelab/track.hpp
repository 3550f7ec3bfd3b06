/**
 * @file track.hpp
 * @brief Frame-to-frame lane tracking with horizontally adjustable
 *        repositioning ranges (HALRR).
 *
 * A detection replaces the previous lane position only when both of its
 * endpoint x coordinates fall within +/- d of the previous ones, with
 * d = image_width * z / 100 and 0 < z < 6. Missing or out-of-range detections
 * keep the previous position for up to max_hold_frames frames.
 */
#pragma once

#include "lanelab/hough.hpp"

#include <optional>
#include <string_view>

namespace lanelab::track {

/// Lane position at two fixed scan rows; the lower endpoint comes first (y1 > y2).
struct LanePosition {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    friend bool operator==(const LanePosition&, const LanePosition&) = default;
};

struct HalrrParams {
    double z = 5.0;            ///< percent of image width, 0 < z < 6
    int max_hold_frames = 24;  ///< one second at 24 frames/s

    void validate() const;
};

enum class TrackStatus { Tracked, Held, Lost };

std::string_view to_string(TrackStatus status) noexcept;
std::optional<TrackStatus> parse_status(std::string_view text) noexcept;

struct SideState {
    TrackStatus status = TrackStatus::Lost;
    std::optional<LanePosition> position;
    int hold_count = 0;

    friend bool operator==(const SideState&, const SideState&) = default;
};

struct LaneState {
    SideState left;
    SideState right;

    friend bool operator==(const LaneState&, const LaneState&) = default;
};

struct RepositionRange {
    double r1_lo = 0.0;
    double r1_hi = 0.0;
    double r2_lo = 0.0;
    double r2_hi = 0.0;

    /// Closed-interval membership of both endpoint x coordinates.
    bool admits(const LanePosition& next) const noexcept;
};

/// R1 = [x_p1 - d, x_p1 + d], R2 = [x_p2 - d, x_p2 + d], clamped to
/// [0, image_width - 1]. Throws InvalidArgument unless 0 < z < 6.
RepositionRange halrr_ranges(const LanePosition& prev, int image_width, const HalrrParams& params);

/// Unclamped half-width d = image_width * z / 100.
double halrr_deviation(int image_width, const HalrrParams& params);

struct PositionPair {
    std::optional<LanePosition> left;
    std::optional<LanePosition> right;

    friend bool operator==(const PositionPair&, const PositionPair&) = default;
};

struct TrackResult {
    LaneState state;
    PositionPair lanes;  ///< post-update positions reported for this frame
};

SideState update_side(const SideState& prev, const std::optional<LanePosition>& detected, int image_width,
                      const HalrrParams& params);

TrackResult track_update(const LaneState& state, const PositionPair& detected, int image_width,
                         const HalrrParams& params);

/// Intersects the segment's infinite line with rows y_bottom and y_top
/// (y_top < y_bottom); x is clamped to [0, image_width - 1]. Throws
/// InvalidArgument for horizontal segments.
LanePosition normalize_to_scan_rows(const hough::LineSegment& seg, double y_bottom, double y_top, int image_width);

} // namespace lanelab::track
