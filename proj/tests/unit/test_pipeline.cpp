#include "lanelab/config.hpp"
#include "lanelab/detect.hpp"
#include "lanelab/ground_truth.hpp"
#include "lanelab/image_io.hpp"
#include "lanelab/outputs.hpp"
#include "lanelab/overlay.hpp"
#include "lanelab/pipeline.hpp"
#include "lanelab/synthgen.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace lanelab;
using namespace lanelab::pipeline;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

synthgen::SceneSpec clean_spec(int frames) {
    synthgen::SceneSpec spec = synthgen::standard_suite("clean");
    spec.frame_count = frames;
    return spec;
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

double x_at(const track::LanePosition& p, double y) { return p.x1 + (y - p.y1) * (p.x2 - p.x1) / (p.y2 - p.y1); }

} // namespace

TEST_CASE("detection rate arithmetic") {
    CHECK(detection_rate(33323, 880) == doctest::Approx(97.359181).epsilon(1e-7));
    CHECK(detection_rate(700, 0) == 100.0);
    CHECK(detection_rate(12, 12) == 0.0);
    CHECK_THROWS_AS(detection_rate(0, 0), InvalidArgument);
    CHECK_THROWS_AS(detection_rate(10, 11), InvalidArgument);
    CHECK_THROWS_AS(detection_rate(10, -1), InvalidArgument);

    DetectionReport table;
    table.conditions = {{"daytime", 33323, 880}};
    table.total_frames = 33323;
    table.incorrect_frames = 880;
    table.detection_rate = detection_rate(33323, 880);
    CHECK(report_csv(table) == "condition,f_t,f_i,rate\ndaytime,33323,880,97.36\ntotal,33323,880,97.36\n");
}

TEST_CASE("report CSV row for 500 frames with 25 incorrect") {
    DetectionReport r;
    r.conditions = {{"synthetic-rain", 500, 25}};
    r.total_frames = 500;
    r.incorrect_frames = 25;
    r.detection_rate = detection_rate(500, 25);
    CHECK(report_csv(r).find("synthetic-rain,500,25,95.00\n") != std::string::npos);
}

TEST_CASE("ideal synthetic frame: both lanes Tracked within 5 px") {
    const auto spec = clean_spec(1);
    const PipelineConfig config;
    const FrameOutcome out = process_frame(synthgen::render_frame(spec, 0), config, {});
    CHECK(out.result.left_status == track::TrackStatus::Tracked);
    CHECK(out.result.right_status == track::TrackStatus::Tracked);
    const GtFrame gt = synthgen::ground_truth_for(spec, 0);
    REQUIRE(out.result.lanes.left);
    REQUIRE(out.result.lanes.right);
    for (const auto& [pos, lane] : {std::pair{*out.result.lanes.left, *gt.left}, std::pair{*out.result.lanes.right, *gt.right}}) {
        CHECK(std::abs(x_at(pos, lane.y1) - lane.x1) <= 5.0);
        CHECK(std::abs(x_at(pos, lane.y2) - lane.x2) <= 5.0);
    }
}

TEST_CASE("black frame: Lost from a fresh state, Held from a tracking state") {
    const RgbImage black(1056, 594);
    const PipelineConfig config;
    const FrameOutcome fresh = process_frame(black, config, {});
    CHECK(fresh.result.left_status == track::TrackStatus::Lost);
    CHECK(fresh.result.right_status == track::TrackStatus::Lost);
    CHECK_FALSE(fresh.result.lanes.left);

    const FrameOutcome first = process_frame(synthgen::render_frame(clean_spec(1), 0), config, {});
    const FrameOutcome held = process_frame(black, config, first.state);
    CHECK(held.result.left_status == track::TrackStatus::Held);
    CHECK(held.result.right_status == track::TrackStatus::Held);
    CHECK(held.result.lanes == first.result.lanes);
    CHECK(held.result.frame_index == 1);
}

TEST_CASE("frame size must stay constant within a sequence") {
    const PipelineConfig config;
    const FrameOutcome first = process_frame(RgbImage(1056, 594), config, {});
    CHECK_THROWS_AS(process_frame(RgbImage(640, 360), config, first.state), InputError);
}

TEST_CASE("process_frame is the composition of the module operations") {
    PipelineConfig config;
    config.roi_band_only = false;
    const auto spec = clean_spec(2);
    SequenceState state;
    track::LaneState manual_state;
    for (int f = 0; f < 2; ++f) {
        const RgbImage frame = synthgen::render_frame(spec, f);
        const FrameOutcome out = process_frame(frame, config, state);
        state = out.state;

        const GrayImage gray = imgcore::to_grayscale(frame);
        const GrayImage smooth = imgcore::bilateral_filter(gray, config.bilateral);
        const EdgeMap edges = imgcore::apply_roi_mask(imgcore::canny_oitr(smooth, config.oitr, config.canny), config.roi);
        const detect::LanePair lanes = detect::detect_lanes(edges, config.hough, config.angle);
        const double yb = config.roi.bottom_row(594);
        const double yt = config.roi.top_row(594);
        track::PositionPair det;
        if (lanes.left) det.left = track::normalize_to_scan_rows(*lanes.left, yb, yt, 1056);
        if (lanes.right) det.right = track::normalize_to_scan_rows(*lanes.right, yb, yt, 1056);
        const track::TrackResult tr = track::track_update(manual_state, det, 1056, config.halrr);
        manual_state = tr.state;

        CHECK(out.result.lanes == tr.lanes);
        CHECK(out.state.lanes == tr.state);
    }
}

TEST_CASE("row-band processing agrees with full-frame processing on a clean frame") {
    PipelineConfig full;
    full.roi_band_only = false;
    const PipelineConfig band;
    const RgbImage frame = synthgen::render_frame(clean_spec(1), 0);
    CHECK(process_frame(frame, band, {}).result.lanes == process_frame(frame, full, {}).result.lanes);
    const RowBand rows = processing_band(band);
    CHECK(rows.first <= band.roi.top_row(594) - band.bilateral.radius);
    CHECK(rows.last >= band.roi.bottom_row(594) + band.bilateral.radius);
    CHECK(processing_band(full).first == 0);
    CHECK(processing_band(full).last == 593);
}

TEST_CASE("stage timings are complete and bounded by the frame total") {
    const FrameOutcome out = process_frame(synthgen::render_frame(clean_spec(1), 0), {}, {});
    REQUIRE(out.result.stage_timings.size() == kStageCount);
    double sum = 0.0;
    for (std::size_t i = 0; i < kStageCount; ++i) {
        CHECK(out.result.stage_timings[i].name == kStageNames[i]);
        CHECK(out.result.stage_timings[i].micros >= 0.0);
        sum += out.result.stage_timings[i].micros;
    }
    CHECK(sum <= out.result.total_micros);
}

TEST_CASE("frames of a different size are resized to the working resolution") {
    synthgen::SceneSpec spec = clean_spec(1);
    spec.width = 528;
    spec.height = 297;
    spec.scan_row_bottom = 267;
    spec.scan_row_top = 184;
    spec.left.bottom_x = synthgen::bottom_x_through(45, 245, 184, 297);
    spec.right.bottom_x = synthgen::bottom_x_through(135, 283, 184, 297);
    const std::vector<GtFrame> truth{synthgen::ground_truth_for(spec, 0)};
    const auto run = process_sequence(VectorFrameSource({synthgen::render_frame(spec, 0)}), {}, &truth);
    REQUIRE(run.results.size() == 1);
    CHECK(run.results[0].left_status == track::TrackStatus::Tracked);
    CHECK_FALSE(run.results[0].evaluation->incorrect);
}

TEST_CASE("evaluation: Lost lane with ground truth is incorrect, large error is incorrect") {
    const PipelineConfig config;
    GtFrame gt;
    gt.condition = "c";
    gt.left = GtLane{300, 535, 400, 368, true};
    FrameResult r;
    CHECK(evaluate_frame(r, gt, config).incorrect);

    r.lanes.left = track::LanePosition{305, 535, 402, 368};
    FrameEvaluation ok = evaluate_frame(r, gt, config);
    CHECK_FALSE(ok.incorrect);
    CHECK(*ok.left_error == doctest::Approx(5.0));

    r.lanes.left = track::LanePosition{311, 535, 402, 368};
    CHECK(evaluate_frame(r, gt, config).incorrect);

    GtFrame none;
    CHECK_FALSE(evaluate_frame(FrameResult{}, none, config).incorrect);
}

TEST_CASE("process_sequence scores against ground truth and reports per condition") {
    const auto spec = clean_spec(3);
    const auto seq = synthgen::generate_sequence(spec);
    const auto run = process_sequence(VectorFrameSource(seq.frames), {}, &seq.ground_truth);
    REQUIRE(run.results.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(run.results[static_cast<std::size_t>(i)].frame_index == i);
    CHECK(run.report.total_frames == 3);
    CHECK(run.report.incorrect_frames == 0);
    CHECK(run.report.detection_rate == 100.0);
    REQUIRE(run.report.conditions.size() == 1);
    CHECK(run.report.conditions[0].condition == "clean");
    CHECK(run.report.median_latency_ms);
}

TEST_CASE("empty frame source is an input error") {
    CHECK_THROWS_AS(process_sequence(VectorFrameSource({}), {}), InputError);
}

TEST_CASE("log lines round-trip and reproduce the report") {
    const auto seq = synthgen::generate_sequence(clean_spec(3));
    std::vector<GtFrame> truth = seq.ground_truth;
    truth[1].right->x1 += 40;  // force one incorrect frame
    const auto run = process_sequence(VectorFrameSource(seq.frames), {}, &truth);
    std::vector<FrameResult> parsed;
    for (const auto& r : run.results) {
        const std::string line = log_line(r);
        parsed.push_back(parse_log_line(line));
        CHECK(log_line(parsed.back()) == line);
    }
    const DetectionReport again = build_report(parsed);
    CHECK(again.total_frames == run.report.total_frames);
    CHECK(again.incorrect_frames == 1);
    CHECK(again.detection_rate == run.report.detection_rate);
    CHECK(report_csv(again) == report_csv(run.report));
}

TEST_CASE("redacted log lines carry no timings") {
    const auto run = process_sequence(VectorFrameSource({synthgen::render_frame(clean_spec(1), 0)}), {});
    const std::string line = log_line(run.results[0], {true});
    CHECK(line.find("stage_timings_us") == std::string::npos);
    CHECK(line.find("total_us") == std::string::npos);
    CHECK(line.find("\"frame_index\":0") != std::string::npos);
}

TEST_CASE("emit_outputs writes one record per frame and no overlays") {
    TempDir dir("lanelab_test_emit");
    const auto seq = synthgen::generate_sequence(clean_spec(3));
    const auto run = process_sequence(VectorFrameSource(seq.frames), {}, &seq.ground_truth);
    emit_outputs(run.results, run.report, dir.path / "out");
    const auto lines = lines_of(dir.path / "out" / kLogFile);
    REQUIRE(lines.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(parse_log_line(lines[static_cast<std::size_t>(i)]).frame_index == i);
    CHECK(read_log(dir.path / "out" / kLogFile).size() == 3);
    CHECK(lines_of(dir.path / "out" / kReportFile).front() == "condition,f_t,f_i,rate");
    CHECK_FALSE(fs::exists(dir.path / "out" / kOverlayDir));
    CHECK(overlay_path(dir.path, 7).filename() == "frame_000007.png");
}

TEST_CASE("emit_outputs reports unwritable paths") {
    TempDir dir("lanelab_test_emit_fail");
    std::ofstream(dir.path / "file") << "x";
    CHECK_THROWS_AS(emit_outputs({}, {}, dir.path / "file" / "sub"), InputError);
}

TEST_CASE("directory source orders frames by filename and skips other files") {
    TempDir dir("lanelab_test_dirsource");
    io::write_png(dir.path / "b.png", RgbImage(8, 8, {2, 2, 2}));
    io::write_png(dir.path / "a.png", RgbImage(8, 8, {1, 1, 1}));
    io::write_ppm(dir.path / "c.ppm", RgbImage(8, 8, {3, 3, 3}));
    std::ofstream(dir.path / "notes.txt") << "skip";
    const DirectoryFrameSource src(dir.path);
    REQUIRE(src.size() == 3);
    CHECK(src.load(0).at(0, 0) == Rgb{1, 1, 1});
    CHECK(src.load(1).at(0, 0) == Rgb{2, 2, 2});
    CHECK(src.load(2).at(0, 0) == Rgb{3, 3, 3});
    CHECK_THROWS_AS(DirectoryFrameSource(dir.path / "missing"), InputError);
}

TEST_CASE("unreadable and mis-sized frames abort with the frame named") {
    TempDir dir("lanelab_test_badframes");
    io::write_png(dir.path / "f0.png", RgbImage(16, 16));
    io::write_png(dir.path / "f1.png", RgbImage(32, 16));
    try {
        process_sequence(DirectoryFrameSource(dir.path), {});
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("f1.png") != std::string::npos);
    }
    std::ofstream(dir.path / "f2.png") << "not a png";
    fs::remove(dir.path / "f1.png");
    try {
        process_sequence(DirectoryFrameSource(dir.path), {});
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("frame 1") != std::string::npos);
    }
}

TEST_CASE("ground truth JSON Lines round-trip") {
    TempDir dir("lanelab_test_gt");
    GtFrame a{0, "clean", GtLane{1.5, 535, 2.25, 368, true}, std::nullopt};
    GtFrame b{1, "occluded", GtLane{3, 535, 4, 368, false}, GtLane{900, 535, 700, 368, true}};
    write_ground_truth(dir.path / "gt.jsonl", {a, b});
    const auto back = read_ground_truth(dir.path / "gt.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0] == a);
    CHECK(back[1] == b);
    CHECK(parse_ground_truth_line(ground_truth_line(b)) == b);
    CHECK(ground_truth_line(a).find("\"right\":null") != std::string::npos);
    CHECK_THROWS(parse_ground_truth_line("{not json"));
    CHECK(GtLane{0, 10, 10, 0, true}.x_at(5) == doctest::Approx(5.0));
}

TEST_CASE("config: checked-in defaults equal the built-in defaults") {
    const PipelineConfig loaded = load_config(fs::path(LANELAB_SOURCE_DIR) / "config" / "default.conf");
    CHECK(serialize_config(loaded) == serialize_config(PipelineConfig{}));
}

TEST_CASE("config: serialize then parse is stable") {
    PipelineConfig c;
    c.oitr = {45, 15};
    c.hough.seed = 99;
    c.overlay.held_color = {1, 2, 3};
    c.roi_band_only = false;
    const std::string text = serialize_config(c);
    CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("config: partial documents keep defaults") {
    const PipelineConfig c = parse_config("# comment\n\noitr.upper = 45\n  oitr.lower=15  # trailing\n");
    CHECK(c.oitr.upper == 45.0);
    CHECK(c.oitr.lower == 15.0);
    CHECK(c.bilateral.radius == 6);
}

TEST_CASE("config: malformed input is a ConfigError") {
    CHECK_THROWS_AS(parse_config("nosuch.key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("oitr.upper\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("oitr.upper = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("oitr.lower = 40\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("halrr.z = 6\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("overlay.held_color = 1,2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("pipeline.roi_band_only = maybe\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/lanelab.conf"), ConfigError);
}

TEST_CASE("bresenham: one pixel per major step, within half a pixel of the line") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> c(-30, 30);
    for (int i = 0; i < 200; ++i) {
        const PixelPoint a{c(rng), c(rng)};
        const PixelPoint b{c(rng), c(rng)};
        const auto pts = bresenham(a, b);
        const int dx = b.x - a.x;
        const int dy = b.y - a.y;
        REQUIRE(pts.size() == static_cast<std::size_t>(std::max(std::abs(dx), std::abs(dy)) + 1));
        CHECK(pts.front() == a);
        CHECK(pts.back() == b);
        for (std::size_t k = 1; k < pts.size(); ++k) {
            CHECK(std::abs(pts[k].x - pts[k - 1].x) <= 1);
            CHECK(std::abs(pts[k].y - pts[k - 1].y) <= 1);
        }
        for (const auto& p : pts) {
            if (std::abs(dx) >= std::abs(dy)) {
                const double exact = dx == 0 ? a.y : a.y + static_cast<double>(p.x - a.x) * dy / dx;
                CHECK(std::abs(p.y - exact) <= 0.5 + 1e-9);
            } else {
                const double exact = a.x + static_cast<double>(p.y - a.y) * dx / dy;
                CHECK(std::abs(p.x - exact) <= 0.5 + 1e-9);
            }
        }
    }
}

TEST_CASE("overlay: no lanes means an unchanged copy") {
    RgbImage frame(1056, 594, {5, 6, 7});
    FrameResult r;
    CHECK(render_overlay(frame, r, {}) == frame);
}

TEST_CASE("overlay: a Tracked lane changes exactly the brushed segment pixels") {
    const RgbImage frame(1056, 594, {5, 6, 7});
    PipelineConfig config;
    FrameResult r;
    r.lanes.left = track::LanePosition{100, 500, 200, 380};
    r.left_status = track::TrackStatus::Tracked;
    const RgbImage out = render_overlay(frame, r, config);
    std::set<std::pair<int, int>> expected;
    const int w = config.overlay.line_width;
    for (const auto& p : bresenham({100, 500}, {200, 380})) {
        for (int oy = -(w - 1) / 2; oy <= w / 2; ++oy) {
            for (int ox = -(w - 1) / 2; ox <= w / 2; ++ox) expected.insert({p.x + ox, p.y + oy});
        }
    }
    for (int y = 0; y < 594; ++y) {
        for (int x = 0; x < 1056; ++x) {
            const bool changed = !(out.at(x, y) == frame.at(x, y));
            if (changed != (expected.count({x, y}) == 1)) FAIL("pixel mismatch at " << x << "," << y);
            if (changed) CHECK(out.at(x, y) == config.overlay.tracked_color);
        }
    }
    CHECK(frame.at(100, 500) == Rgb{5, 6, 7});
}

TEST_CASE("overlay: Held lanes use the held colour, ROI outline is optional") {
    const RgbImage frame(1056, 594);
    PipelineConfig config;
    FrameResult r;
    r.lanes.right = track::LanePosition{900, 535, 600, 368};
    r.right_status = track::TrackStatus::Held;
    const RgbImage out = render_overlay(frame, r, config);
    CHECK(out.at(900, 535) == config.overlay.held_color);
    config.overlay.draw_roi = true;
    const RgbImage roi = render_overlay(frame, FrameResult{}, config);
    const auto v = config.roi.vertices(1056, 594);
    CHECK(roi.at(static_cast<int>(std::lround(v[0][0])), static_cast<int>(std::lround(v[0][1]))) == config.overlay.roi_color);
}
