#include "lanelab/ground_truth.hpp"

#include "lanelab/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace lanelab::pipeline {

namespace {

using nlohmann::json;

json lane_to_json(const std::optional<GtLane>& lane) {
    if (!lane) return nullptr;
    return json{{"x1", lane->x1}, {"y1", lane->y1}, {"x2", lane->x2}, {"y2", lane->y2}, {"visible", lane->visible}};
}

std::optional<GtLane> lane_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    GtLane lane;
    lane.x1 = j.at("x1").get<double>();
    lane.y1 = j.at("y1").get<double>();
    lane.x2 = j.at("x2").get<double>();
    lane.y2 = j.at("y2").get<double>();
    lane.visible = j.value("visible", true);
    if (lane.y1 == lane.y2) throw InputError("ground-truth lane has identical y coordinates");
    return lane;
}

} // namespace

double GtLane::x_at(double y) const noexcept { return x1 + (y - y1) * (x2 - x1) / (y2 - y1); }

std::string ground_truth_line(const GtFrame& frame) {
    json j;
    j["frame_index"] = frame.frame_index;
    j["condition"] = frame.condition;
    j["left"] = lane_to_json(frame.left);
    j["right"] = lane_to_json(frame.right);
    return j.dump();
}

GtFrame parse_ground_truth_line(const std::string& line) {
    try {
        const json j = json::parse(line);
        GtFrame frame;
        frame.frame_index = j.at("frame_index").get<int>();
        frame.condition = j.value("condition", std::string{});
        frame.left = lane_from_json(j.value("left", json(nullptr)));
        frame.right = lane_from_json(j.value("right", json(nullptr)));
        return frame;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed ground-truth record: ") + e.what());
    }
}

std::vector<GtFrame> read_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string() + ": cannot open ground-truth file");
    std::vector<GtFrame> frames;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            frames.push_back(parse_ground_truth_line(line));
        } catch (const InputError& e) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return frames;
}

void write_ground_truth(const std::filesystem::path& path, const std::vector<GtFrame>& frames) {
    std::ofstream out(path);
    if (!out) throw InputError(path.string() + ": cannot open for writing");
    for (const auto& f : frames) out << ground_truth_line(f) << '\n';
    if (!out) throw InputError(path.string() + ": write failed");
}

} // namespace lanelab::pipeline
