#include "lanelab/hough.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace lanelab::hough {

double LineSegment::length() const noexcept {
    return std::hypot(static_cast<double>(x1 - x2), static_cast<double>(y1 - y2));
}

LineSegment make_segment(int xa, int ya, int xb, int yb) noexcept {
    if (ya > yb || (ya == yb && xa <= xb)) return {xa, ya, xb, yb};
    return {xb, yb, xa, ya};
}

void HoughParams::validate() const {
    if (!(rho_resolution > 0.0) || !(theta_resolution > 0.0) || vote_threshold <= 0 ||
        !(min_line_length > 0.0) || max_line_gap <= 0) {
        throw InvalidArgument("hough parameters must be strictly positive");
    }
    if (theta_resolution >= std::numbers::pi) {
        throw InvalidArgument("theta_resolution must be below pi, got " + std::to_string(theta_resolution));
    }
}

namespace {

struct LineFit {
    double cx = 0.0;
    double cy = 0.0;
    double ux = 1.0;  // unit direction
    double uy = 0.0;
};

LineFit fit_line(const std::vector<PixelPoint>& pts) {
    LineFit fit;
    const double n = static_cast<double>(pts.size());
    for (const auto& p : pts) {
        fit.cx += p.x;
        fit.cy += p.y;
    }
    fit.cx /= n;
    fit.cy /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const auto& p : pts) {
        const double dx = p.x - fit.cx;
        const double dy = p.y - fit.cy;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    fit.ux = std::cos(angle);
    fit.uy = std::sin(angle);
    return fit;
}

class Transform {
public:
    Transform(const EdgeMap& edges, const HoughParams& params)
        : params_(params),
          width_(edges.width()),
          height_(edges.height()),
          numangle_(std::max(1, static_cast<int>(std::lround(std::numbers::pi / params.theta_resolution)))),
          numrho_(static_cast<int>(std::lround(((width_ + height_) * 2 + 1) / params.rho_resolution))),
          accum_(static_cast<std::size_t>(numangle_) * static_cast<std::size_t>(numrho_), 0),
          mask_(edges.pixels().begin(), edges.pixels().end()),
          voted_(edges.size(), 0),
          stamp_(edges.size(), 0) {
        trig_.reserve(static_cast<std::size_t>(numangle_) * 2);
        for (int n = 0; n < numangle_; ++n) {
            const double theta = n * params.theta_resolution;
            trig_.push_back(std::cos(theta) / params.rho_resolution);
            trig_.push_back(std::sin(theta) / params.rho_resolution);
        }
    }

    std::vector<DetectedSegment> run() {
        std::vector<PixelPoint> pool;
        for (int y = 0; y < height_; ++y) {
            for (int x = 0; x < width_; ++x) {
                if (mask_[index(x, y)]) pool.push_back({x, y});
            }
        }

        std::mt19937_64 rng(params_.seed);
        std::vector<DetectedSegment> found;
        for (std::size_t count = pool.size(); count > 0; --count) {
            const std::size_t pick = static_cast<std::size_t>(rng() % count);
            const PixelPoint seed = pool[pick];
            pool[pick] = pool[count - 1];
            if (!mask_[index(seed.x, seed.y)]) continue;

            const auto [best_votes, best_angle] = vote(seed, +1);
            voted_[index(seed.x, seed.y)] = 1;
            if (best_votes < params_.vote_threshold) continue;

            const double theta = best_angle * params_.theta_resolution;
            std::vector<PixelPoint> support = walk(seed.x, seed.y, -std::sin(theta), std::cos(theta));
            if (support.size() >= 2) {
                const LineFit coarse = fit_line(support);
                std::vector<PixelPoint> refined = walk(coarse.cx, coarse.cy, coarse.ux, coarse.uy);
                if (refined.size() >= 2) support = std::move(refined);
            }

            const LineSegment segment = endpoints(support);
            const bool good = segment.length() >= params_.min_line_length;
            for (const auto& p : support) {
                const std::size_t i = index(p.x, p.y);
                if (good && voted_[i]) {
                    vote(p, -1);
                    voted_[i] = 0;
                }
                mask_[i] = 0;
            }
            if (good) found.push_back({segment, std::move(support)});
        }
        return found;
    }

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    // Adds delta to every bin the pixel votes for; returns the strongest bin
    // (first angle wins ties).
    std::pair<int, int> vote(PixelPoint p, int delta) {
        int best = params_.vote_threshold - 1;
        int best_n = 0;
        const int offset = (numrho_ - 1) / 2;
        for (int n = 0; n < numangle_; ++n) {
            const double r = p.x * trig_[static_cast<std::size_t>(2 * n)] +
                             p.y * trig_[static_cast<std::size_t>(2 * n + 1)];
            const int bin = static_cast<int>(std::lround(r)) + offset;
            int& cell = accum_[static_cast<std::size_t>(n) * static_cast<std::size_t>(numrho_) +
                               static_cast<std::size_t>(bin)];
            cell += delta;
            if (cell > best) {
                best = cell;
                best_n = n;
            }
        }
        return {best, best_n};
    }

    // Steps one pixel at a time along the major axis in both directions from
    // (ox, oy). At each step the rounded position and its two neighbours
    // across the line are checked. A direction ends at the border or once more
    // than max_line_gap consecutive steps found nothing.
    std::vector<PixelPoint> walk(double ox, double oy, double ux, double uy) {
        ++walk_id_;
        const bool x_major = std::abs(ux) >= std::abs(uy);
        const double major = x_major ? std::abs(ux) : std::abs(uy);
        const double sx = ux / major;
        const double sy = uy / major;

        std::vector<PixelPoint> collected;
        for (int dir : {+1, -1}) {
            int gap = 0;
            for (int k = dir > 0 ? 0 : 1;; ++k) {
                const double px = ox + dir * k * sx;
                const double py = oy + dir * k * sy;
                const int ix = static_cast<int>(std::lround(px));
                const int iy = static_cast<int>(std::lround(py));
                if (x_major ? (ix < 0 || ix >= width_ || iy < -1 || iy > height_)
                            : (iy < 0 || iy >= height_ || ix < -1 || ix > width_)) {
                    break;
                }
                bool hit = false;
                for (int off : {0, -1, 1}) {
                    const int cx = x_major ? ix : ix + off;
                    const int cy = x_major ? iy + off : iy;
                    if (cx < 0 || cy < 0 || cx >= width_ || cy >= height_) continue;
                    const std::size_t i = index(cx, cy);
                    if (!mask_[i]) continue;
                    hit = true;
                    if (stamp_[i] != walk_id_) {
                        stamp_[i] = walk_id_;
                        collected.push_back({cx, cy});
                    }
                }
                if (hit) {
                    gap = 0;
                } else if (++gap > params_.max_line_gap) {
                    break;
                }
            }
        }
        return collected;
    }

    LineSegment endpoints(const std::vector<PixelPoint>& support) const {
        if (support.size() < 2) {
            const PixelPoint p = support.empty() ? PixelPoint{} : support.front();
            return {p.x, p.y, p.x, p.y};
        }
        const LineFit fit = fit_line(support);
        double tmin = 0.0;
        double tmax = 0.0;
        bool first = true;
        for (const auto& p : support) {
            const double t = (p.x - fit.cx) * fit.ux + (p.y - fit.cy) * fit.uy;
            if (first || t < tmin) tmin = t;
            if (first || t > tmax) tmax = t;
            first = false;
        }
        auto clampx = [&](double v) { return std::clamp(static_cast<int>(std::lround(v)), 0, width_ - 1); };
        auto clampy = [&](double v) { return std::clamp(static_cast<int>(std::lround(v)), 0, height_ - 1); };
        return make_segment(clampx(fit.cx + tmin * fit.ux), clampy(fit.cy + tmin * fit.uy),
                            clampx(fit.cx + tmax * fit.ux), clampy(fit.cy + tmax * fit.uy));
    }

    HoughParams params_;
    int width_;
    int height_;
    int numangle_;
    int numrho_;
    std::vector<int> accum_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::uint8_t> voted_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t walk_id_ = 0;
    std::vector<double> trig_;
};

} // namespace

std::vector<DetectedSegment> hough_segments_detailed(const EdgeMap& edges, const HoughParams& params) {
    params.validate();
    if (edges.empty()) return {};
    return Transform(edges, params).run();
}

std::vector<LineSegment> hough_segments(const EdgeMap& edges, const HoughParams& params) {
    std::vector<LineSegment> out;
    for (auto& d : hough_segments_detailed(edges, params)) out.push_back(d.segment);
    return out;
}

} // namespace lanelab::hough
