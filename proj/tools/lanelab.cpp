#include "lanelab/config.hpp"
#include "lanelab/errors.hpp"
#include "lanelab/ground_truth.hpp"
#include "lanelab/image_io.hpp"
#include "lanelab/outputs.hpp"
#include "lanelab/overlay.hpp"
#include "lanelab/pipeline.hpp"
#include "lanelab/synthgen.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

namespace fs = std::filesystem;
using namespace lanelab;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;
constexpr double kReferenceFrameMs = 29.06;

pipeline::PipelineConfig config_from(const std::string& path, std::optional<std::uint64_t> seed) {
    pipeline::PipelineConfig config = path.empty() ? pipeline::PipelineConfig{} : pipeline::load_config(path);
    if (seed) config.hough.seed = *seed;
    config.validate();
    return config;
}

struct RunArgs {
    std::string input;
    std::string config;
    std::string output;
    std::string ground_truth;
    std::optional<std::uint64_t> seed;
    bool overlay = false;
    bool redact_timings = false;
};

int cmd_run(const RunArgs& args) {
    const auto config = config_from(args.config, args.seed);
    const pipeline::DirectoryFrameSource frames(args.input);
    std::optional<std::vector<pipeline::GtFrame>> truth;
    if (!args.ground_truth.empty()) truth = pipeline::read_ground_truth(args.ground_truth);

    const fs::path out_dir(args.output);
    pipeline::FrameCallback on_frame;
    if (args.overlay) {
        std::error_code ec;
        fs::create_directories(out_dir / pipeline::kOverlayDir, ec);
        if (ec) throw InputError((out_dir / pipeline::kOverlayDir).string() + ": " + ec.message());
        on_frame = [&](const RgbImage& frame, const pipeline::FrameResult& result) {
            io::write_png(pipeline::overlay_path(out_dir, result.frame_index),
                          pipeline::render_overlay(frame, result, config));
        };
    }
    const auto run = pipeline::process_sequence(frames, config, truth ? &*truth : nullptr, on_frame);
    pipeline::emit_outputs(run.results, run.report, out_dir, {args.redact_timings});
    std::cout << pipeline::report_text(run.report);
    return 0;
}

int cmd_report(const std::string& log_path) {
    const auto results = pipeline::read_log(log_path);
    const auto report = pipeline::build_report(results);
    std::cout << pipeline::report_text(report) << pipeline::report_csv(report);
    return 0;
}

double percentile(std::vector<double> values, double p) {
    std::ranges::sort(values);
    const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

int cmd_bench(const std::string& input, const std::string& config_path) {
    const auto config = config_from(config_path, std::nullopt);
    const pipeline::DirectoryFrameSource frames(input);
    const auto run = pipeline::process_sequence(frames, config);

    std::map<std::string, std::vector<double>> per_stage;
    std::vector<double> totals;
    for (const auto& r : run.results) {
        for (const auto& t : r.stage_timings) per_stage[t.name].push_back(t.micros / 1000.0);
        totals.push_back(r.total_micros / 1000.0);
    }
    std::printf("frames: %zu at %dx%d (working)\n", run.results.size(), config.working_width, config.working_height);
    std::printf("%-12s %10s %10s %10s\n", "stage", "p50_ms", "p90_ms", "p99_ms");
    auto row = [](const char* name, const std::vector<double>& v) {
        std::printf("%-12s %10.3f %10.3f %10.3f\n", name, percentile(v, 50), percentile(v, 90), percentile(v, 99));
    };
    for (const char* name : pipeline::kStageNames) row(name, per_stage[name]);
    row("total", totals);
    std::printf("reference frame time: %.2f ms\n", kReferenceFrameMs);
    return 0;
}

int cmd_synth(const std::string& suite, const std::string& output, int frame_limit) {
    synthgen::SceneSpec spec = synthgen::standard_suite(suite);
    if (frame_limit > 0) {
        spec.frame_count = std::min(spec.frame_count, frame_limit);
        for (auto& p : spec.perturbations) p.end_frame = std::min(p.end_frame, spec.frame_count);
        std::erase_if(spec.perturbations, [](const auto& p) { return p.start_frame >= p.end_frame; });
    }
    spec.validate();
    const fs::path dir(output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError(dir.string() + ": " + ec.message());
    std::vector<pipeline::GtFrame> truth;
    for (int f = 0; f < spec.frame_count; ++f) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06d.png", f);
        io::write_png(dir / name, synthgen::render_frame(spec, f));
        truth.push_back(synthgen::ground_truth_for(spec, f));
    }
    pipeline::write_ground_truth(dir / "ground_truth.jsonl", truth);
    std::cout << "wrote " << spec.frame_count << " frames of suite '" << suite << "' to " << dir.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lane detection and tracking batch tool"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Detect and track lanes over a directory of frames");
    run_cmd->add_option("--input", run.input, "Directory of PNG/PPM/PGM frames")->required();
    run_cmd->add_option("--config", run.config, "Configuration file");
    run_cmd->add_option("--output", run.output, "Output directory")->required();
    run_cmd->add_flag("--overlay", run.overlay, "Write annotated frames");
    run_cmd->add_option("--ground-truth", run.ground_truth, "Ground-truth JSON Lines file");
    run_cmd->add_option("--seed", run.seed, "Hough sampling seed");
    run_cmd->add_flag("--redact-timings", run.redact_timings, "Omit timings from the log");

    std::string log_path;
    auto* report_cmd = app.add_subcommand("report", "Recompute the detection report from a log");
    report_cmd->add_option("--log", log_path, "detections.jsonl")->required();

    std::string bench_input;
    std::string bench_config;
    auto* bench_cmd = app.add_subcommand("bench", "Per-stage latency percentiles");
    bench_cmd->add_option("--input", bench_input, "Directory of frames")->required();
    bench_cmd->add_option("--config", bench_config, "Configuration file");

    std::string suite;
    std::string synth_output;
    int frame_limit = 0;
    auto* synth_cmd = app.add_subcommand("synth", "Write a standard synthetic suite");
    synth_cmd->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(synthgen::suite_names()));
    synth_cmd->add_option("--output", synth_output, "Output directory")->required();
    synth_cmd->add_option("--frames", frame_limit, "Only the first N frames")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*report_cmd) return cmd_report(log_path);
        if (*bench_cmd) return cmd_bench(bench_input, bench_config);
        if (*synth_cmd) return cmd_synth(suite, synth_output, frame_limit);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitConfig;
}
