#include "lanelab/detect.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lanelab::detect {

CandidateLine make_candidate(const LineSegment& segment) {
    CandidateLine c;
    c.segment = segment;
    const double dx = segment.x2 - segment.x1;
    const double dy = segment.y2 - segment.y1;
    c.length = std::sqrt(dx * dx + dy * dy);
    if (dx == 0.0) {
        c.slope = std::numeric_limits<double>::quiet_NaN();
        c.angle = std::numbers::pi / 2.0;
        c.side = Side::Rejected;
        return c;
    }
    c.slope = dy / dx;
    double angle = std::atan2(-dy, dx);
    if (angle < 0.0) angle += std::numbers::pi;
    if (angle >= std::numbers::pi) angle -= std::numbers::pi;
    c.angle = angle;
    c.side = c.slope < 0.0 ? Side::Left : c.slope > 0.0 ? Side::Right : Side::Rejected;
    return c;
}

void AngleConstraint::validate() const {
    if (!(c > 0.0) || !(c < std::numbers::pi / 4.0)) {
        throw InvalidArgument("angle band half-width must lie in (0, pi/4), got " + std::to_string(c));
    }
}

SideSplit classify_side(const std::vector<LineSegment>& segments) {
    SideSplit split;
    for (const auto& s : segments) {
        CandidateLine c = make_candidate(s);
        if (c.side == Side::Left) {
            split.left.push_back(c);
        } else if (c.side == Side::Right) {
            split.right.push_back(c);
        }
    }
    return split;
}

std::vector<CandidateLine> filter_by_angle(const std::vector<CandidateLine>& candidates,
                                           const AngleConstraint& constraint) {
    constraint.validate();
    std::vector<CandidateLine> kept;
    for (const auto& cand : candidates) {
        if (cand.side == Side::Rejected) continue;
        const double mid = cand.side == Side::Left ? constraint.left_mid() : constraint.right_mid();
        if (cand.angle >= mid - constraint.c && cand.angle <= mid + constraint.c) kept.push_back(cand);
    }
    return kept;
}

namespace {

// True when a should be preferred over b.
bool better(const CandidateLine& a, const CandidateLine& b, double mid) {
    if (a.length != b.length) return a.length > b.length;
    const double da = std::abs(a.angle - mid);
    const double db = std::abs(b.angle - mid);
    if (da != db) return da < db;
    return a.segment.x1 < b.segment.x1;
}

std::optional<LineSegment> longest(const std::vector<CandidateLine>& candidates, double mid) {
    const CandidateLine* best = nullptr;
    for (const auto& c : candidates) {
        if (best == nullptr || better(c, *best, mid)) best = &c;
    }
    if (best == nullptr) return std::nullopt;
    return best->segment;
}

} // namespace

LanePair select_longest(const std::vector<CandidateLine>& left, const std::vector<CandidateLine>& right) {
    const AngleConstraint mids;
    return {longest(left, mids.left_mid()), longest(right, mids.right_mid())};
}

LanePair verify_segments(const std::vector<LineSegment>& segments, const AngleConstraint& constraint) {
    const SideSplit split = classify_side(segments);
    return select_longest(filter_by_angle(split.left, constraint), filter_by_angle(split.right, constraint));
}

LanePair detect_lanes(const EdgeMap& edges, const hough::HoughParams& hough, const AngleConstraint& constraint) {
    return verify_segments(hough::hough_segments(edges, hough), constraint);
}

} // namespace lanelab::detect
