#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lanelab::pipeline {

/// Ground-truth lane centreline given by two points (usually the scan rows).
/// `visible == false` marks a lane that exists but is not painted in the frame.
struct GtLane {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;
    bool visible = true;

    /// x of the infinite line through both points at row y.
    double x_at(double y) const noexcept;
    friend bool operator==(const GtLane&, const GtLane&) = default;
};

struct GtFrame {
    int frame_index = 0;
    std::string condition;
    std::optional<GtLane> left;
    std::optional<GtLane> right;

    friend bool operator==(const GtFrame&, const GtFrame&) = default;
};

/// One JSON object per line:
/// {"frame_index":0,"condition":"clean","left":{"x1":..,"y1":..,"x2":..,"y2":..,"visible":true},"right":null}
std::vector<GtFrame> read_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const std::filesystem::path& path, const std::vector<GtFrame>& frames);
std::string ground_truth_line(const GtFrame& frame);
GtFrame parse_ground_truth_line(const std::string& line);

} // namespace lanelab::pipeline
