#include "lanelab/synthgen.hpp"

#include "lanelab/errors.hpp"

namespace lanelab::synthgen {

namespace {

constexpr int kFrames = 500;
constexpr double kLeftCrossX = 490.0;   // centreline x at the top scan row
constexpr double kRightCrossX = 566.0;

SceneSpec base(const std::string& name, std::uint64_t seed, double left_deg = 45.0, double right_deg = 135.0) {
    SceneSpec s;
    s.name = name;
    s.frame_count = kFrames;
    s.seed = seed;
    s.left.angle_deg = left_deg;
    s.left.bottom_x = bottom_x_through(left_deg, kLeftCrossX, s.scan_row_top, s.height);
    s.right.angle_deg = right_deg;
    s.right.bottom_x = bottom_x_through(right_deg, kRightCrossX, s.scan_row_top, s.height);
    return s;
}

Perturbation always(std::variant<BrightnessShift, GaussianBlur, OcclusionBand, EraseLane, DistractorLine> kind) {
    return {std::move(kind), 0, kFrames};
}

SceneSpec clean() { return base("clean", 101); }

SceneSpec noisy() {
    SceneSpec s = base("noisy", 102, 42.0, 138.0);
    s.noise_sigma = 10.0;
    return s;
}

SceneSpec blurred() {
    SceneSpec s = base("blurred", 103, 48.0, 132.0);
    s.noise_sigma = 3.0;
    s.perturbations.push_back(always(GaussianBlur{2.0}));
    return s;
}

SceneSpec occluded() {
    SceneSpec s = base("occluded", 104);
    s.noise_sigma = 3.0;
    s.perturbations.push_back({EraseLane{LaneSide::Left}, 100, 120});
    s.perturbations.push_back({EraseLane{LaneSide::Right}, 250, 265});
    // Wiper blade tilted about 10 degrees across both lanes.
    OcclusionBand wiper{{{150.0, 505.0}, {950.0, 364.0}, {950.0, 394.0}, {150.0, 535.0}}, {30, 30, 30}};
    s.perturbations.push_back({wiper, 400, 415});
    return s;
}

SceneSpec distractor_heavy() {
    SceneSpec s = base("distractor-heavy", 105);
    s.noise_sigma = 3.0;
    s.perturbations.push_back(always(DistractorLine{40.0, 150.0, 530.0, 90.0, 4.0, {200, 200, 200}}));
    s.perturbations.push_back(always(DistractorLine{145.0, 900.0, 530.0, 80.0, 4.0, {200, 200, 200}}));
    s.perturbations.push_back(always(DistractorLine{0.0, 420.0, 450.0, 200.0, 5.0, {220, 220, 220}}));
    s.perturbations.push_back(always(DistractorLine{80.0, 700.0, 530.0, 150.0, 6.0, {180, 180, 180}}));
    return s;
}

SceneSpec dashed_lane() {
    SceneSpec s = base("dashed-lane", 106);
    s.noise_sigma = 3.0;
    s.left.dashed = true;
    s.right.dashed = true;
    return s;
}

SceneSpec colored_lane() {
    SceneSpec s = base("colored-lane", 107);
    s.noise_sigma = 2.0;
    s.road = {100, 100, 100};
    s.left.color = {170, 140, 60};   // gray 140 on a gray 100 road
    s.right.color = {170, 140, 60};
    return s;
}

SceneSpec lane_change() {
    SceneSpec s = base("lane-change", 108);
    s.noise_sigma = 3.0;
    s.lateral_drift_per_frame = 2.0;
    s.drift_reverse_every = 45;
    return s;
}

} // namespace

std::vector<std::string> suite_names() {
    return {"clean", "noisy", "blurred", "occluded", "distractor-heavy", "dashed-lane", "colored-lane", "lane-change"};
}

std::vector<SceneSpec> standard_suites() {
    return {clean(), noisy(), blurred(), occluded(), distractor_heavy(), dashed_lane(), colored_lane(), lane_change()};
}

SceneSpec standard_suite(const std::string& name) {
    for (auto& s : standard_suites()) {
        if (s.name == name) return s;
    }
    std::string known;
    for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown suite '" + name + "' (known: " + known + ")");
}

} // namespace lanelab::synthgen
