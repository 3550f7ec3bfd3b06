/**
 * @file pipeline.hpp
 * @brief Per-frame orchestration: grayscale, bilateral smoothing, Canny,
 *        ROI mask, Hough, lane verification, scan-row normalization and
 *        tracking, with per-stage wall-clock timing.
 */
#pragma once

#include "lanelab/config.hpp"
#include "lanelab/ground_truth.hpp"
#include "lanelab/image.hpp"
#include "lanelab/track.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lanelab::pipeline {

inline constexpr const char* kStageNames[] = {"preprocess", "bilateral", "canny", "roi_mask",
                                              "hough",      "verify",    "track"};
inline constexpr std::size_t kStageCount = std::size(kStageNames);

struct StageTiming {
    std::string name;
    double micros = 0.0;
};

struct FrameEvaluation {
    std::string condition;
    bool incorrect = false;
    std::optional<double> left_error;   ///< lateral error at the bottom scan row, pixels
    std::optional<double> right_error;
};

struct FrameResult {
    int frame_index = 0;
    track::PositionPair lanes;  ///< post-tracking positions
    track::TrackStatus left_status = track::TrackStatus::Lost;
    track::TrackStatus right_status = track::TrackStatus::Lost;
    std::vector<StageTiming> stage_timings;
    double total_micros = 0.0;
    std::optional<FrameEvaluation> evaluation;
};

/// Everything carried from one frame of a sequence to the next.
struct SequenceState {
    track::LaneState lanes;
    int frame_width = 0;   ///< input size fixed by the first frame (0 = none yet)
    int frame_height = 0;
    int next_index = 0;
};

struct FrameOutcome {
    FrameResult result;
    SequenceState state;
};

/// Row range [first, last] processed by the pixel stages.
struct RowBand {
    int first = 0;
    int last = 0;
};
RowBand processing_band(const PipelineConfig& config);

/// Runs one frame through every stage. Throws InputError when the frame size
/// differs from earlier frames of the sequence.
FrameOutcome process_frame(const RgbImage& frame, const PipelineConfig& config, const SequenceState& state);

/// Random-access frame provider.
class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual std::size_t size() const = 0;
    virtual RgbImage load(std::size_t index) const = 0;
    virtual std::string describe(std::size_t index) const { return "frame " + std::to_string(index); }
};

class VectorFrameSource final : public FrameSource {
public:
    explicit VectorFrameSource(std::vector<RgbImage> frames) : frames_(std::move(frames)) {}
    std::size_t size() const override { return frames_.size(); }
    RgbImage load(std::size_t index) const override { return frames_.at(index); }

private:
    std::vector<RgbImage> frames_;
};

/// *.png / *.ppm / *.pgm files of a directory, in lexicographic filename order.
class DirectoryFrameSource final : public FrameSource {
public:
    explicit DirectoryFrameSource(const std::filesystem::path& dir);
    std::size_t size() const override { return files_.size(); }
    RgbImage load(std::size_t index) const override;
    std::string describe(std::size_t index) const override;

private:
    std::vector<std::filesystem::path> files_;
};

/// Lateral-error scoring of one frame; incorrect when a ground-truth lane is
/// reported Lost or its reported x at the bottom scan row is off by more than
/// the tolerance. Ground truth is given in input-frame pixels and scaled to
/// the working resolution with (scale_x, scale_y).
FrameEvaluation evaluate_frame(const FrameResult& result, const GtFrame& truth, const PipelineConfig& config,
                               double scale_x = 1.0, double scale_y = 1.0);

struct ConditionRow {
    std::string condition;
    int total_frames = 0;
    int incorrect_frames = 0;
    double detection_rate() const;
};

struct DetectionReport {
    int total_frames = 0;
    int incorrect_frames = 0;
    double detection_rate = 0.0;  ///< percent
    std::vector<ConditionRow> conditions;
    std::optional<double> mean_latency_ms;
    std::optional<double> median_latency_ms;
};

/// (f_t - f_i) / f_t * 100. Throws InvalidArgument unless 0 <= f_i <= f_t and f_t > 0.
double detection_rate(int total_frames, int incorrect_frames);

/// Aggregates evaluated frames; frames without evaluation count toward
/// latency only. Latency is omitted when every total_micros is zero.
DetectionReport build_report(const std::vector<FrameResult>& results);

struct SequenceRun {
    std::vector<FrameResult> results;
    DetectionReport report;
};

using FrameCallback = std::function<void(const RgbImage& frame, const FrameResult& result)>;

/// Threads the tracker state through every frame in order. When ground truth
/// is supplied each frame is scored against the record with the same index.
/// Throws InputError naming the frame on unreadable or mis-sized frames.
SequenceRun process_sequence(const FrameSource& frames, const PipelineConfig& config,
                             const std::vector<GtFrame>* ground_truth = nullptr,
                             const FrameCallback& on_frame = {}, const std::string& default_condition = "all");

} // namespace lanelab::pipeline
