#include "lanelab/track.hpp"

#include "lanelab/errors.hpp"

#include <algorithm>
#include <string>

namespace lanelab::track {

void HalrrParams::validate() const {
    if (!(z > 0.0 && z < 6.0)) {
        throw InvalidArgument("HALRR z must satisfy 0 < z < 6, got " + std::to_string(z));
    }
    if (max_hold_frames < 0) {
        throw InvalidArgument("max_hold_frames must be non-negative");
    }
}

std::string_view to_string(TrackStatus status) noexcept {
    switch (status) {
    case TrackStatus::Tracked: return "Tracked";
    case TrackStatus::Held: return "Held";
    case TrackStatus::Lost: return "Lost";
    }
    return "Lost";
}

std::optional<TrackStatus> parse_status(std::string_view text) noexcept {
    if (text == "Tracked") return TrackStatus::Tracked;
    if (text == "Held") return TrackStatus::Held;
    if (text == "Lost") return TrackStatus::Lost;
    return std::nullopt;
}

bool RepositionRange::admits(const LanePosition& next) const noexcept {
    return next.x1 >= r1_lo && next.x1 <= r1_hi && next.x2 >= r2_lo && next.x2 <= r2_hi;
}

double halrr_deviation(int image_width, const HalrrParams& params) {
    params.validate();
    return image_width * params.z / 100.0;
}

RepositionRange halrr_ranges(const LanePosition& prev, int image_width, const HalrrParams& params) {
    if (image_width <= 0) throw InvalidArgument("image width must be positive");
    const double d = halrr_deviation(image_width, params);
    const double hi = image_width - 1.0;
    auto clamp = [hi](double v) { return std::clamp(v, 0.0, hi); };
    return {clamp(prev.x1 - d), clamp(prev.x1 + d), clamp(prev.x2 - d), clamp(prev.x2 + d)};
}

SideState update_side(const SideState& prev, const std::optional<LanePosition>& detected, int image_width,
                      const HalrrParams& params) {
    params.validate();
    if (!prev.position) {
        // Bootstrap and re-acquisition accept the detection as is.
        if (detected) return {TrackStatus::Tracked, detected, 0};
        return {TrackStatus::Lost, std::nullopt, 0};
    }
    if (detected && halrr_ranges(*prev.position, image_width, params).admits(*detected)) {
        return {TrackStatus::Tracked, detected, 0};
    }
    const int held = prev.hold_count + 1;
    if (held > params.max_hold_frames) return {TrackStatus::Lost, std::nullopt, 0};
    return {TrackStatus::Held, prev.position, held};
}

TrackResult track_update(const LaneState& state, const PositionPair& detected, int image_width,
                         const HalrrParams& params) {
    TrackResult result;
    result.state.left = update_side(state.left, detected.left, image_width, params);
    result.state.right = update_side(state.right, detected.right, image_width, params);
    result.lanes = {result.state.left.position, result.state.right.position};
    return result;
}

LanePosition normalize_to_scan_rows(const hough::LineSegment& seg, double y_bottom, double y_top, int image_width) {
    if (seg.y1 == seg.y2) throw InvalidArgument("cannot normalize a horizontal segment to scan rows");
    if (!(y_top < y_bottom)) throw InvalidArgument("scan rows need y_top < y_bottom");
    const double inv_slope = static_cast<double>(seg.x2 - seg.x1) / static_cast<double>(seg.y2 - seg.y1);
    const double hi = image_width - 1.0;
    auto x_at = [&](double y) { return std::clamp(seg.x1 + (y - seg.y1) * inv_slope, 0.0, hi); };
    return {x_at(y_bottom), y_bottom, x_at(y_top), y_top};
}

} // namespace lanelab::track
