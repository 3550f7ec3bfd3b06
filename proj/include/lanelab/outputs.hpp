#pragma once

#include "lanelab/config.hpp"
#include "lanelab/pipeline.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace lanelab::pipeline {

struct LogOptions {
    bool redact_timings = false;
};

/// One JSON Lines record: frame_index, per-side status and endpoints, stage
/// timings (unless redacted) and, when scored, the evaluation.
std::string log_line(const FrameResult& result, const LogOptions& options = {});
FrameResult parse_log_line(const std::string& line);
std::vector<FrameResult> read_log(const std::filesystem::path& path);

/// condition,f_t,f_i,rate rows followed by a "total" summary row; rates use two decimals.
std::string report_csv(const DetectionReport& report);

/// Human-readable report summary.
std::string report_text(const DetectionReport& report);

inline constexpr const char* kLogFile = "detections.jsonl";
inline constexpr const char* kReportFile = "report.csv";
inline constexpr const char* kOverlayDir = "overlay";

/// Writes detections.jsonl and report.csv into output_dir (created if needed).
/// Throws InputError with the offending path on I/O failure.
void emit_outputs(const std::vector<FrameResult>& results, const DetectionReport& report,
                  const std::filesystem::path& output_dir, const LogOptions& options = {});

/// Path of the numbered overlay PNG for a frame.
std::filesystem::path overlay_path(const std::filesystem::path& output_dir, int frame_index);

} // namespace lanelab::pipeline
