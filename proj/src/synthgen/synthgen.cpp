#include "lanelab/synthgen.hpp"

#include "lanelab/errors.hpp"
#include "lanelab/imgcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace lanelab::synthgen {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("invalid scene spec: " + what);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Canvas {
    Raster<double> r;
    Raster<double> g;
    Raster<double> b;

    Canvas(int w, int h, Rgb fill) : r(w, h, fill.r), g(w, h, fill.g), b(w, h, fill.b) {}

    int width() const { return r.width(); }
    int height() const { return r.height(); }

    void paint(int x, int y, Rgb c) {
        r.at(x, y) = c.r;
        g.at(x, y) = c.g;
        b.at(x, y) = c.b;
    }
};

const LaneSpec& lane_of(const SceneSpec& spec, LaneSide side) {
    return side == LaneSide::Left ? spec.left : spec.right;
}

void paint_lane(Canvas& canvas, const SceneSpec& spec, const LaneSpec& lane, int frame) {
    const double sin_a = std::sin(lane.angle_deg * kDeg);
    const double half = lane.width_px / 2.0 / sin_a;  // horizontal half extent of the stripe
    const int y0 = std::max(0, static_cast<int>(std::ceil(spec.horizon_y_frac * spec.height)));
    const double period = lane.dash.dash_len + lane.dash.gap_len;
    for (int y = y0; y < spec.height; ++y) {
        if (lane.dashed) {
            const double along = (spec.height - 1 - y) / sin_a + lane.dash.speed * frame;
            if (std::fmod(along, period) >= lane.dash.dash_len) continue;
        }
        const double xc = lane_x_at(spec, lane, frame, y);
        const int x_lo = std::max(0, static_cast<int>(std::ceil(xc - half)));
        const int x_hi = std::min(spec.width - 1, static_cast<int>(std::floor(xc + half)));
        for (int x = x_lo; x <= x_hi; ++x) canvas.paint(x, y, lane.color);
    }
}

void paint_distractor(Canvas& canvas, const DistractorLine& d) {
    const double ux = std::cos(d.angle_deg * kDeg);
    const double uy = -std::sin(d.angle_deg * kDeg);
    const double ex = d.x + ux * d.length;
    const double ey = d.y + uy * d.length;
    const double pad = d.width_px;
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(d.x, ex) - pad)));
    const int x1 = std::min(canvas.width() - 1, static_cast<int>(std::ceil(std::max(d.x, ex) + pad)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(d.y, ey) - pad)));
    const int y1 = std::min(canvas.height() - 1, static_cast<int>(std::ceil(std::max(d.y, ey) + pad)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double t = (x - d.x) * ux + (y - d.y) * uy;
            const double n = -(x - d.x) * uy + (y - d.y) * ux;
            if (t >= 0.0 && t <= d.length && std::abs(n) <= d.width_px / 2.0) canvas.paint(x, y, d.color);
        }
    }
}

bool inside_polygon(const std::vector<std::array<double, 2>>& poly, double x, double y) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a[1] > y) != (b[1] > y) && x < (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0]) inside = !inside;
    }
    return inside;
}

void paint_polygon(Canvas& canvas, const OcclusionBand& band) {
    double minx = band.polygon[0][0], maxx = minx, miny = band.polygon[0][1], maxy = miny;
    for (const auto& p : band.polygon) {
        minx = std::min(minx, p[0]);
        maxx = std::max(maxx, p[0]);
        miny = std::min(miny, p[1]);
        maxy = std::max(maxy, p[1]);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(minx)));
    const int x1 = std::min(canvas.width() - 1, static_cast<int>(std::ceil(maxx)));
    const int y0 = std::max(0, static_cast<int>(std::floor(miny)));
    const int y1 = std::min(canvas.height() - 1, static_cast<int>(std::ceil(maxy)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (inside_polygon(band.polygon, x, y)) canvas.paint(x, y, band.color);
        }
    }
}

template <typename Fn>
void for_each_plane(Canvas& canvas, Fn&& fn) {
    fn(canvas.r);
    fn(canvas.g);
    fn(canvas.b);
}

} // namespace

void SceneSpec::validate() const {
    require(width >= kMinFrameSide && height >= kMinFrameSide, "frame must be at least 8x8");
    require(frame_count >= 1, "frame_count must be positive");
    require(noise_sigma >= 0.0, "noise_sigma must be non-negative");
    require(horizon_y_frac >= 0.0 && horizon_y_frac < 1.0, "horizon_y_frac must lie in [0, 1)");
    require(drift_reverse_every >= 0, "drift_reverse_every must be non-negative");
    require(scan_row_top >= 0 && scan_row_bottom < height && scan_row_top < scan_row_bottom,
            "scan rows must satisfy 0 <= top < bottom < height");
    auto check_lane = [&](const LaneSpec& lane, double lo, double hi, const char* side) {
        if (!lane.present) return;
        require(lane.angle_deg > lo && lane.angle_deg < hi,
                std::string(side) + " lane angle must lie in (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
        require(lane.width_px > 0.0, std::string(side) + " lane width must be positive");
        if (lane.dashed) {
            require(lane.dash.dash_len > 0.0 && lane.dash.gap_len > 0.0,
                    std::string(side) + " dash pattern needs positive lengths");
        }
    };
    check_lane(left, 20.0, 70.0, "left");
    check_lane(right, 110.0, 160.0, "right");
    for (const auto& p : perturbations) {
        require(p.start_frame >= 0 && p.start_frame < p.end_frame && p.end_frame <= frame_count,
                "perturbation frame range must lie within [0, frame_count)");
        if (const auto* blur = std::get_if<GaussianBlur>(&p.kind)) require(blur->sigma > 0.0, "blur sigma must be positive");
        if (const auto* band = std::get_if<OcclusionBand>(&p.kind)) {
            require(band->polygon.size() >= 3, "occlusion polygon needs at least 3 vertices");
        }
        if (const auto* d = std::get_if<DistractorLine>(&p.kind)) {
            require(d->length > 0.0 && d->width_px > 0.0, "distractor needs positive length and width");
        }
    }
}

double SceneSpec::drift_offset(int frame) const noexcept {
    if (drift_reverse_every <= 0) return lateral_drift_per_frame * frame;
    const int p = drift_reverse_every;
    const int k = frame % (4 * p);
    const int steps = k <= p ? k : k <= 3 * p ? 2 * p - k : k - 4 * p;
    return lateral_drift_per_frame * steps;
}

double lane_x_at(const SceneSpec& spec, const LaneSpec& lane, int frame, double y) {
    const double a = lane.angle_deg * kDeg;
    return lane.bottom_x + spec.drift_offset(frame) + (spec.height - 1 - y) * std::cos(a) / std::sin(a);
}

double bottom_x_through(double angle_deg, double x_at_row, double row, int height) {
    const double a = angle_deg * kDeg;
    return x_at_row - (height - 1 - row) * std::cos(a) / std::sin(a);
}

bool lane_erased(const SceneSpec& spec, LaneSide side, int frame) {
    for (const auto& p : spec.perturbations) {
        if (!p.active(frame)) continue;
        if (const auto* e = std::get_if<EraseLane>(&p.kind); e != nullptr && e->side == side) return true;
    }
    return false;
}

pipeline::GtFrame ground_truth_for(const SceneSpec& spec, int frame) {
    pipeline::GtFrame gt;
    gt.frame_index = frame;
    gt.condition = spec.name;
    auto lane_truth = [&](LaneSide side) -> std::optional<pipeline::GtLane> {
        const LaneSpec& lane = lane_of(spec, side);
        if (!lane.present) return std::nullopt;
        const double yb = spec.scan_row_bottom;
        const double yt = spec.scan_row_top;
        return pipeline::GtLane{lane_x_at(spec, lane, frame, yb), yb, lane_x_at(spec, lane, frame, yt), yt,
                                !lane_erased(spec, side, frame)};
    };
    gt.left = lane_truth(LaneSide::Left);
    gt.right = lane_truth(LaneSide::Right);
    return gt;
}

RgbImage render_frame(const SceneSpec& spec, int frame) {
    Canvas canvas(spec.width, spec.height, spec.road);
    for (LaneSide side : {LaneSide::Left, LaneSide::Right}) {
        const LaneSpec& lane = lane_of(spec, side);
        if (lane.present && !lane_erased(spec, side, frame)) paint_lane(canvas, spec, lane, frame);
    }
    for (const auto& p : spec.perturbations) {
        if (!p.active(frame)) continue;
        if (const auto* d = std::get_if<DistractorLine>(&p.kind)) paint_distractor(canvas, *d);
        if (const auto* band = std::get_if<OcclusionBand>(&p.kind)) paint_polygon(canvas, *band);
    }
    for (const auto& p : spec.perturbations) {
        if (!p.active(frame)) continue;
        if (const auto* shift = std::get_if<BrightnessShift>(&p.kind)) {
            for_each_plane(canvas, [&](Raster<double>& plane) {
                for (double& v : plane.pixels()) v += shift->delta;
            });
        }
        if (const auto* blur = std::get_if<GaussianBlur>(&p.kind)) {
            const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * blur->sigma)));
            for_each_plane(canvas, [&](Raster<double>& plane) { imgcore::gaussian_blur_plane(plane, blur->sigma, radius); });
        }
    }
    if (spec.noise_sigma > 0.0) {
        std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(frame) + 1)));
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        auto& r = canvas.r;
        auto& g = canvas.g;
        auto& b = canvas.b;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double n = noise(rng);
            r.pixels()[i] += n;
            g.pixels()[i] += n;
            b.pixels()[i] += n;
        }
    }

    RgbImage img(spec.width, spec.height);
    auto quantize = [](double v) {
        return static_cast<std::uint8_t>(std::clamp(imgcore::round_half_up(v), 0.0, 255.0));
    };
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = {quantize(canvas.r.pixels()[i]), quantize(canvas.g.pixels()[i]), quantize(canvas.b.pixels()[i])};
    }
    return img;
}

GeneratedSequence generate_sequence(const SceneSpec& spec) {
    spec.validate();
    GeneratedSequence seq;
    seq.frames.reserve(static_cast<std::size_t>(spec.frame_count));
    for (int f = 0; f < spec.frame_count; ++f) {
        seq.frames.push_back(render_frame(spec, f));
        seq.ground_truth.push_back(ground_truth_for(spec, f));
    }
    return seq;
}

} // namespace lanelab::synthgen
