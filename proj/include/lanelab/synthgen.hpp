/**
 * @file synthgen.hpp
 * @brief Synthetic straight-lane road scenes with exact per-frame ground truth.
 *
 * Lanes are straight stripes described by their angle (degrees, anticlockwise
 * from +x with y up) and the x of their centreline on the bottom image row.
 * Frames are rendered on floating-point planes, perturbed, then rounded.
 */
#pragma once

#include "lanelab/ground_truth.hpp"
#include "lanelab/image.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lanelab::synthgen {

enum class LaneSide { Left, Right };

struct DashPattern {
    double dash_len = 36.0;   ///< painted length along the lane, pixels
    double gap_len = 18.0;
    double speed = 6.0;       ///< pattern shift per frame, pixels
};

struct LaneSpec {
    bool present = true;
    double angle_deg = 45.0;
    double bottom_x = 265.0;    ///< centreline x at row height - 1 (before drift)
    double width_px = 4.0;
    bool dashed = false;
    DashPattern dash;
    Rgb color{210, 210, 210};
};

inline LaneSpec lane_at(double angle_deg, double bottom_x) {
    LaneSpec lane;
    lane.angle_deg = angle_deg;
    lane.bottom_x = bottom_x;
    return lane;
}

struct BrightnessShift {
    double delta = 0.0;
};

struct GaussianBlur {
    double sigma = 2.0;
};

/// Filled polygon painted over the scene (e.g. a wiper blade).
struct OcclusionBand {
    std::vector<std::array<double, 2>> polygon;
    Rgb color{30, 30, 30};
};

/// The lane is not painted; ground truth keeps it with visible = false.
struct EraseLane {
    LaneSide side = LaneSide::Left;
};

/// Straight confuser line anchored at its lower endpoint.
struct DistractorLine {
    double angle_deg = 0.0;
    double x = 0.0;
    double y = 0.0;
    double length = 50.0;
    double width_px = 4.0;
    Rgb color{200, 200, 200};
};

struct Perturbation {
    std::variant<BrightnessShift, GaussianBlur, OcclusionBand, EraseLane, DistractorLine> kind;
    int start_frame = 0;
    int end_frame = 0;  ///< exclusive

    bool active(int frame) const noexcept { return frame >= start_frame && frame < end_frame; }
};

struct SceneSpec {
    std::string name = "scene";
    int width = 1056;
    int height = 594;
    LaneSpec left = lane_at(45.0, 265.0);
    LaneSpec right = lane_at(135.0, 791.0);
    Rgb road{90, 90, 90};
    double horizon_y_frac = 0.55;   ///< lanes are painted below this row
    double noise_sigma = 0.0;
    std::vector<Perturbation> perturbations;
    int frame_count = 1;
    double lateral_drift_per_frame = 0.0;
    /// Drift direction flips every this many frames, giving a triangle wave
    /// that starts at zero offset; 0 keeps drifting one way.
    int drift_reverse_every = 0;
    int scan_row_bottom = 535;      ///< ground-truth rows
    int scan_row_top = 368;
    std::uint64_t seed = 1;

    /// Throws InvalidArgument on malformed fields.
    void validate() const;

    /// Lateral offset applied to both lanes in a frame.
    double drift_offset(int frame) const noexcept;
};

/// Centreline x of a lane at row y in a given frame (drift included).
double lane_x_at(const SceneSpec& spec, const LaneSpec& lane, int frame, double y);

/// True when the lane is erased in that frame.
bool lane_erased(const SceneSpec& spec, LaneSide side, int frame);

pipeline::GtFrame ground_truth_for(const SceneSpec& spec, int frame);

/// Renders one frame; deterministic in (spec, frame).
RgbImage render_frame(const SceneSpec& spec, int frame);

struct GeneratedSequence {
    std::vector<RgbImage> frames;
    std::vector<pipeline::GtFrame> ground_truth;
};

GeneratedSequence generate_sequence(const SceneSpec& spec);

/// Picks bottom_x so that the centreline crosses (x_at_row, row).
double bottom_x_through(double angle_deg, double x_at_row, double row, int height);

/// Suite names in battery order.
std::vector<std::string> suite_names();

/// Fixed, versioned scene set: clean, noisy, blurred, occluded,
/// distractor-heavy, dashed-lane, colored-lane, lane-change.
std::vector<SceneSpec> standard_suites();

/// Throws InvalidArgument for unknown names.
SceneSpec standard_suite(const std::string& name);

inline constexpr int kSuiteVersion = 1;

} // namespace lanelab::synthgen
