#include "lanelab/pipeline.hpp"

#include "lanelab/detect.hpp"
#include "lanelab/hough.hpp"
#include "lanelab/image_io.hpp"
#include "lanelab/imgcore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace lanelab::pipeline {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename Fn>
    auto run(const char* name, Fn&& fn) {
        const auto start = Clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            sink_.push_back({name, micros_since(start)});
        } else {
            auto value = fn();
            sink_.push_back({name, micros_since(start)});
            return value;
        }
    }

private:
    std::vector<StageTiming>& sink_;
};

GrayImage crop_rows(const GrayImage& img, RowBand band) {
    GrayImage out(img.width(), band.last - band.first + 1);
    for (int y = band.first; y <= band.last; ++y) {
        std::ranges::copy(img.row(y), out.row(y - band.first).begin());
    }
    return out;
}

} // namespace

RowBand processing_band(const PipelineConfig& config) {
    const int h = config.working_height;
    if (!config.roi_band_only) return {0, h - 1};
    const int context = config.bilateral.radius + 2 + config.roi_band_margin;
    const int top = static_cast<int>(std::floor(config.roi.top_y_frac * h));
    const int bottom = static_cast<int>(std::ceil(config.roi.bottom_y_frac * h));
    RowBand band{std::max(0, top - context), std::min(h - 1, bottom + context)};
    if (band.last - band.first + 1 < 2 * config.bilateral.radius) return {0, h - 1};
    return band;
}

FrameOutcome process_frame(const RgbImage& frame, const PipelineConfig& config, const SequenceState& state) {
    const auto frame_start = Clock::now();
    config.validate();
    if (state.frame_width != 0 && !frame.same_size(state.frame_width, state.frame_height)) {
        throw InputError("frame " + std::to_string(state.next_index) + " is " + std::to_string(frame.width()) + "x" +
                         std::to_string(frame.height()) + " but the sequence started at " +
                         std::to_string(state.frame_width) + "x" + std::to_string(state.frame_height));
    }

    FrameOutcome out;
    FrameResult& result = out.result;
    result.frame_index = state.next_index;
    result.stage_timings.reserve(kStageCount);
    StageClock clock(result.stage_timings);

    const int width = config.working_width;
    const int height = config.working_height;
    const RowBand band = processing_band(config);

    const GrayImage gray = clock.run("preprocess", [&] {
        GrayImage full = imgcore::to_grayscale(imgcore::resize_bilinear(frame, width, height));
        if (band.first == 0 && band.last == height - 1) return full;
        return crop_rows(full, band);
    });
    const GrayImage smoothed = clock.run("bilateral", [&] { return imgcore::bilateral_filter(gray, config.bilateral); });
    const EdgeMap edges = clock.run("canny", [&] {
        const EdgeMap partial = imgcore::canny_oitr(smoothed, config.oitr, config.canny);
        if (partial.same_size(width, height)) return partial;
        EdgeMap full(width, height);
        for (int y = 0; y < partial.height(); ++y) {
            std::ranges::copy(partial.row(y), full.row(y + band.first).begin());
        }
        return full;
    });
    const EdgeMap masked = clock.run("roi_mask", [&] { return imgcore::apply_roi_mask(edges, config.roi); });
    const auto segments = clock.run("hough", [&] { return hough::hough_segments(masked, config.hough); });
    const detect::LanePair detected =
        clock.run("verify", [&] { return detect::verify_segments(segments, config.angle); });

    const track::TrackResult tracked = clock.run("track", [&] {
        const double y_bottom = config.roi.bottom_row(height);
        const double y_top = config.roi.top_row(height);
        track::PositionPair positions;
        if (detected.left) positions.left = track::normalize_to_scan_rows(*detected.left, y_bottom, y_top, width);
        if (detected.right) positions.right = track::normalize_to_scan_rows(*detected.right, y_bottom, y_top, width);
        return track::track_update(state.lanes, positions, width, config.halrr);
    });

    result.lanes = tracked.lanes;
    result.left_status = tracked.state.left.status;
    result.right_status = tracked.state.right.status;

    out.state.lanes = tracked.state;
    out.state.frame_width = frame.width();
    out.state.frame_height = frame.height();
    out.state.next_index = state.next_index + 1;
    result.total_micros = micros_since(frame_start);
    return out;
}

DirectoryFrameSource::DirectoryFrameSource(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw InputError(dir.string() + ": not a directory");
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".ppm" || ext == ".pgm") files_.push_back(entry.path());
    }
    if (ec) throw InputError(dir.string() + ": " + ec.message());
    std::ranges::sort(files_, [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
}

RgbImage DirectoryFrameSource::load(std::size_t index) const { return io::read_rgb(files_.at(index)); }

std::string DirectoryFrameSource::describe(std::size_t index) const {
    return "frame " + std::to_string(index) + " (" + files_.at(index).string() + ")";
}

FrameEvaluation evaluate_frame(const FrameResult& result, const GtFrame& truth, const PipelineConfig& config,
                               double scale_x, double scale_y) {
    FrameEvaluation eval;
    eval.condition = truth.condition;
    const double y_bottom = config.roi.bottom_row(config.working_height);
    // Pixel-centre aligned mapping, matching resize_bilinear.
    const double y_input = (y_bottom + 0.5) / scale_y - 0.5;

    auto score = [&](const std::optional<GtLane>& gt, const std::optional<track::LanePosition>& reported,
                     std::optional<double>& error) {
        if (!gt) return;
        if (!reported) {
            eval.incorrect = true;
            return;
        }
        const double gt_x = (gt->x_at(y_input) + 0.5) * scale_x - 0.5;
        const double reported_x = reported->y1 == y_bottom
                                      ? reported->x1
                                      : reported->x1 + (y_bottom - reported->y1) * (reported->x2 - reported->x1) /
                                                           (reported->y2 - reported->y1);
        error = std::abs(reported_x - gt_x);
        if (*error > config.lateral_tolerance_px) eval.incorrect = true;
    };
    score(truth.left, result.lanes.left, eval.left_error);
    score(truth.right, result.lanes.right, eval.right_error);
    return eval;
}

double ConditionRow::detection_rate() const { return pipeline::detection_rate(total_frames, incorrect_frames); }

double detection_rate(int total_frames, int incorrect_frames) {
    if (total_frames <= 0 || incorrect_frames < 0 || incorrect_frames > total_frames) {
        throw InvalidArgument("detection rate needs 0 <= f_i <= f_t and f_t > 0 (f_t=" +
                              std::to_string(total_frames) + ", f_i=" + std::to_string(incorrect_frames) + ")");
    }
    return static_cast<double>(total_frames - incorrect_frames) / total_frames * 100.0;
}

DetectionReport build_report(const std::vector<FrameResult>& results) {
    DetectionReport report;
    std::map<std::string, std::size_t> row_of;
    std::vector<double> latencies;
    bool any_timing = false;
    for (const auto& r : results) {
        latencies.push_back(r.total_micros / 1000.0);
        any_timing = any_timing || r.total_micros > 0.0;
        if (!r.evaluation) continue;
        auto [it, inserted] = row_of.emplace(r.evaluation->condition, report.conditions.size());
        if (inserted) report.conditions.push_back({r.evaluation->condition, 0, 0});
        ConditionRow& row = report.conditions[it->second];
        ++row.total_frames;
        ++report.total_frames;
        if (r.evaluation->incorrect) {
            ++row.incorrect_frames;
            ++report.incorrect_frames;
        }
    }
    if (report.total_frames > 0) report.detection_rate = detection_rate(report.total_frames, report.incorrect_frames);
    if (any_timing && !latencies.empty()) {
        double sum = 0.0;
        for (double v : latencies) sum += v;
        report.mean_latency_ms = sum / static_cast<double>(latencies.size());
        std::ranges::sort(latencies);
        const std::size_t n = latencies.size();
        report.median_latency_ms = n % 2 == 1 ? latencies[n / 2] : 0.5 * (latencies[n / 2 - 1] + latencies[n / 2]);
    }
    return report;
}

SequenceRun process_sequence(const FrameSource& frames, const PipelineConfig& config,
                             const std::vector<GtFrame>* ground_truth, const FrameCallback& on_frame,
                             const std::string& default_condition) {
    if (frames.size() == 0) throw InputError("frame source contains no frames");
    config.validate();

    std::map<int, const GtFrame*> truth_by_index;
    if (ground_truth != nullptr) {
        for (const auto& gt : *ground_truth) truth_by_index[gt.frame_index] = &gt;
    }

    SequenceRun run;
    run.results.reserve(frames.size());
    SequenceState state;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        RgbImage frame;
        try {
            frame = frames.load(i);
        } catch (const std::exception& e) {
            throw InputError("unreadable " + frames.describe(i) + ": " + e.what());
        }
        FrameOutcome outcome;
        try {
            outcome = process_frame(frame, config, state);
        } catch (const InputError& e) {
            throw InputError(frames.describe(i) + ": " + e.what());
        }
        state = std::move(outcome.state);
        FrameResult& result = outcome.result;
        if (const auto it = truth_by_index.find(result.frame_index); it != truth_by_index.end()) {
            const double sx = static_cast<double>(config.working_width) / frame.width();
            const double sy = static_cast<double>(config.working_height) / frame.height();
            result.evaluation = evaluate_frame(result, *it->second, config, sx, sy);
            if (result.evaluation->condition.empty()) result.evaluation->condition = default_condition;
        }
        if (on_frame) on_frame(frame, result);
        run.results.push_back(std::move(result));
    }
    run.report = build_report(run.results);
    return run;
}

} // namespace lanelab::pipeline
