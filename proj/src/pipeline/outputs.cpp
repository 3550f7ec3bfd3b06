#include "lanelab/outputs.hpp"

#include "lanelab/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace lanelab::pipeline {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

ordered_json side_json(track::TrackStatus status, const std::optional<track::LanePosition>& pos) {
    ordered_json j;
    j["status"] = std::string(track::to_string(status));
    if (pos) {
        j["x1"] = pos->x1;
        j["y1"] = pos->y1;
        j["x2"] = pos->x2;
        j["y2"] = pos->y2;
    }
    return j;
}

void side_from_json(const ordered_json& j, track::TrackStatus& status, std::optional<track::LanePosition>& pos) {
    const auto parsed = track::parse_status(j.at("status").get<std::string>());
    if (!parsed) throw InputError("unknown lane status '" + j.at("status").get<std::string>() + "'");
    status = *parsed;
    if (j.contains("x1")) {
        pos = track::LanePosition{j.at("x1").get<double>(), j.at("y1").get<double>(), j.at("x2").get<double>(),
                                  j.at("y2").get<double>()};
    }
}

ordered_json optional_number(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string log_line(const FrameResult& result, const LogOptions& options) {
    ordered_json j;
    j["frame_index"] = result.frame_index;
    j["left"] = side_json(result.left_status, result.lanes.left);
    j["right"] = side_json(result.right_status, result.lanes.right);
    if (!options.redact_timings) {
        ordered_json timings = ordered_json::object();
        for (const auto& t : result.stage_timings) timings[t.name] = t.micros;
        j["stage_timings_us"] = timings;
        j["total_us"] = result.total_micros;
    }
    if (result.evaluation) {
        const auto& e = *result.evaluation;
        j["evaluation"] = {{"condition", e.condition},
                           {"incorrect", e.incorrect},
                           {"left_error", optional_number(e.left_error)},
                           {"right_error", optional_number(e.right_error)}};
    }
    return j.dump();
}

FrameResult parse_log_line(const std::string& line) {
    try {
        const ordered_json j = ordered_json::parse(line);
        FrameResult r;
        r.frame_index = j.at("frame_index").get<int>();
        side_from_json(j.at("left"), r.left_status, r.lanes.left);
        side_from_json(j.at("right"), r.right_status, r.lanes.right);
        if (j.contains("stage_timings_us")) {
            for (const auto& [name, value] : j.at("stage_timings_us").items()) {
                r.stage_timings.push_back({name, value.get<double>()});
            }
        }
        r.total_micros = j.value("total_us", 0.0);
        if (j.contains("evaluation")) {
            const auto& e = j.at("evaluation");
            FrameEvaluation eval;
            eval.condition = e.at("condition").get<std::string>();
            eval.incorrect = e.at("incorrect").get<bool>();
            if (!e.at("left_error").is_null()) eval.left_error = e.at("left_error").get<double>();
            if (!e.at("right_error").is_null()) eval.right_error = e.at("right_error").get<double>();
            r.evaluation = eval;
        }
        return r;
    } catch (const ordered_json::exception& e) {
        throw InputError(std::string("malformed log record: ") + e.what());
    }
}

std::vector<FrameResult> read_log(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string() + ": cannot open log");
    std::vector<FrameResult> results;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            results.push_back(parse_log_line(line));
        } catch (const InputError& e) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return results;
}

std::string report_csv(const DetectionReport& report) {
    std::string out = "condition,f_t,f_i,rate\n";
    for (const auto& row : report.conditions) {
        out += row.condition + "," + std::to_string(row.total_frames) + "," + std::to_string(row.incorrect_frames) +
               "," + fixed2(row.detection_rate()) + "\n";
    }
    out += "total," + std::to_string(report.total_frames) + "," + std::to_string(report.incorrect_frames) + "," +
           (report.total_frames > 0 ? fixed2(report.detection_rate) : std::string("")) + "\n";
    return out;
}

std::string report_text(const DetectionReport& report) {
    std::string out;
    for (const auto& row : report.conditions) {
        out += row.condition + ": f_t=" + std::to_string(row.total_frames) +
               " f_i=" + std::to_string(row.incorrect_frames) + " rate=" + fixed2(row.detection_rate()) + "%\n";
    }
    if (report.total_frames > 0) {
        out += "total: f_t=" + std::to_string(report.total_frames) + " f_i=" + std::to_string(report.incorrect_frames) +
               " rate=" + fixed2(report.detection_rate) + "%\n";
    } else {
        out += "no ground truth: detection rate not computed\n";
    }
    if (report.mean_latency_ms) {
        out += "latency: mean=" + fixed2(*report.mean_latency_ms) + " ms median=" + fixed2(*report.median_latency_ms) +
               " ms\n";
    }
    return out;
}

void emit_outputs(const std::vector<FrameResult>& results, const DetectionReport& report, const fs::path& output_dir,
                  const LogOptions& options) {
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw InputError(output_dir.string() + ": " + ec.message());

    const fs::path log_path = output_dir / kLogFile;
    std::ofstream log(log_path, std::ios::binary);
    if (!log) throw InputError(log_path.string() + ": cannot open for writing");
    for (const auto& r : results) log << log_line(r, options) << '\n';
    if (!log) throw InputError(log_path.string() + ": write failed");

    const fs::path csv_path = output_dir / kReportFile;
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw InputError(csv_path.string() + ": cannot open for writing");
    csv << report_csv(report);
    if (!csv) throw InputError(csv_path.string() + ": write failed");
}

fs::path overlay_path(const fs::path& output_dir, int frame_index) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06d.png", frame_index);
    return output_dir / kOverlayDir / name;
}

} // namespace lanelab::pipeline
