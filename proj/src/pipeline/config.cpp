#include "lanelab/config.hpp"

#include "lanelab/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace lanelab::pipeline {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
    return out;
}

long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

Rgb parse_rgb(const std::string& key, const std::string& v) {
    std::stringstream ss(v);
    std::string part;
    int channels[3] = {};
    int n = 0;
    while (std::getline(ss, part, ',')) {
        if (n == 3) break;
        const long long c = parse_int(key, trim(part));
        if (c < 0 || c > 255) throw ConfigError("config key '" + key + "': channel out of [0, 255]");
        channels[n++] = static_cast<int>(c);
    }
    if (n != 3 || std::getline(ss, part, ',')) {
        throw ConfigError("config key '" + key + "': expected r,g,b, got '" + v + "'");
    }
    return {static_cast<std::uint8_t>(channels[0]), static_cast<std::uint8_t>(channels[1]),
            static_cast<std::uint8_t>(channels[2])};
}

std::string fmt_rgb(Rgb c) {
    return std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b);
}

struct Degrees {};

template <typename T>
struct Codec;

template <>
struct Codec<double> {
    static double parse(const std::string& k, const std::string& v) { return parse_double(k, v); }
    static std::string format(double v) { return fmt_double(v); }
};

template <>
struct Codec<Degrees> {
    static double parse(const std::string& k, const std::string& v) { return parse_double(k, v) * kDeg; }
    static std::string format(double v) { return fmt_double(std::round(v / kDeg * 1e9) / 1e9); }
};

template <>
struct Codec<int> {
    static int parse(const std::string& k, const std::string& v) {
        const long long n = parse_int(k, v);
        if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
            throw ConfigError("config key '" + k + "': out of range");
        }
        return static_cast<int>(n);
    }
    static std::string format(int v) { return std::to_string(v); }
};

template <>
struct Codec<std::uint64_t> {
    static std::uint64_t parse(const std::string& k, const std::string& v) { return parse_u64(k, v); }
    static std::string format(std::uint64_t v) { return std::to_string(v); }
};

template <>
struct Codec<bool> {
    static bool parse(const std::string& k, const std::string& v) { return parse_bool(k, v); }
    static std::string format(bool v) { return v ? "true" : "false"; }
};

template <>
struct Codec<Rgb> {
    static Rgb parse(const std::string& k, const std::string& v) { return parse_rgb(k, v); }
    static std::string format(Rgb v) { return fmt_rgb(v); }
};

struct Field {
    std::string key;
    std::function<void(PipelineConfig&, const std::string& key, const std::string& value)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

// `access` must be a generic lambda returning a reference to the member.
template <typename Tag, typename Access>
void add(std::vector<Field>& table, std::string key, Access access) {
    table.push_back({std::move(key),
                     [access](PipelineConfig& c, const std::string& k, const std::string& v) {
                         access(c) = Codec<Tag>::parse(k, v);
                     },
                     [access](const PipelineConfig& c) { return Codec<Tag>::format(access(c)); }});
}

// Ordered as serialized.
const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> t;
        add<int>(t, "pipeline.working_width", [](auto& c) -> auto& { return c.working_width; });
        add<int>(t, "pipeline.working_height", [](auto& c) -> auto& { return c.working_height; });
        add<bool>(t, "pipeline.roi_band_only", [](auto& c) -> auto& { return c.roi_band_only; });
        add<int>(t, "pipeline.roi_band_margin", [](auto& c) -> auto& { return c.roi_band_margin; });
        add<double>(t, "bilateral.sigma_spatial", [](auto& c) -> auto& { return c.bilateral.sigma_spatial; });
        add<double>(t, "bilateral.sigma_range", [](auto& c) -> auto& { return c.bilateral.sigma_range; });
        add<int>(t, "bilateral.radius", [](auto& c) -> auto& { return c.bilateral.radius; });
        add<double>(t, "oitr.upper", [](auto& c) -> auto& { return c.oitr.upper; });
        add<double>(t, "oitr.lower", [](auto& c) -> auto& { return c.oitr.lower; });
        add<bool>(t, "canny.gaussian_presmooth", [](auto& c) -> auto& { return c.canny.gaussian_presmooth; });
        add<double>(t, "roi.top_y_frac", [](auto& c) -> auto& { return c.roi.top_y_frac; });
        add<double>(t, "roi.bottom_y_frac", [](auto& c) -> auto& { return c.roi.bottom_y_frac; });
        add<double>(t, "roi.top_width_frac", [](auto& c) -> auto& { return c.roi.top_width_frac; });
        add<double>(t, "roi.bottom_width_frac", [](auto& c) -> auto& { return c.roi.bottom_width_frac; });
        add<double>(t, "hough.rho_resolution", [](auto& c) -> auto& { return c.hough.rho_resolution; });
        add<Degrees>(t, "hough.theta_resolution_deg", [](auto& c) -> auto& { return c.hough.theta_resolution; });
        add<int>(t, "hough.vote_threshold", [](auto& c) -> auto& { return c.hough.vote_threshold; });
        add<double>(t, "hough.min_line_length", [](auto& c) -> auto& { return c.hough.min_line_length; });
        add<int>(t, "hough.max_line_gap", [](auto& c) -> auto& { return c.hough.max_line_gap; });
        add<std::uint64_t>(t, "hough.seed", [](auto& c) -> auto& { return c.hough.seed; });
        add<Degrees>(t, "angle.c_deg", [](auto& c) -> auto& { return c.angle.c; });
        add<double>(t, "halrr.z", [](auto& c) -> auto& { return c.halrr.z; });
        add<int>(t, "halrr.max_hold_frames", [](auto& c) -> auto& { return c.halrr.max_hold_frames; });
        add<double>(t, "eval.lateral_tolerance_px", [](auto& c) -> auto& { return c.lateral_tolerance_px; });
        add<int>(t, "overlay.line_width", [](auto& c) -> auto& { return c.overlay.line_width; });
        add<bool>(t, "overlay.draw_roi", [](auto& c) -> auto& { return c.overlay.draw_roi; });
        add<Rgb>(t, "overlay.tracked_color", [](auto& c) -> auto& { return c.overlay.tracked_color; });
        add<Rgb>(t, "overlay.held_color", [](auto& c) -> auto& { return c.overlay.held_color; });
        add<Rgb>(t, "overlay.roi_color", [](auto& c) -> auto& { return c.overlay.roi_color; });
        return t;
    }();
    return table;
}

} // namespace

void PipelineConfig::validate() const {
    auto check = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid configuration: " + what);
    };
    auto wrap = [](const char* section, auto&& fn) {
        try {
            fn();
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("invalid configuration [") + section + "]: " + e.what());
        }
    };
    check(working_width >= kMinFrameSide && working_height >= kMinFrameSide,
          "pipeline.working_width/height must be at least 8");
    check(roi_band_margin >= 0, "pipeline.roi_band_margin must be non-negative");
    wrap("bilateral", [&] { bilateral.validate(); });
    check(2 * bilateral.radius <= std::min(working_width, working_height), "bilateral.radius too large for frame");
    wrap("oitr", [&] { oitr.validate(); });
    wrap("roi", [&] { roi.validate(); });
    check(roi.top_row(working_height) < roi.bottom_row(working_height), "roi rows collapse at working height");
    wrap("hough", [&] { hough.validate(); });
    wrap("angle", [&] { angle.validate(); });
    wrap("halrr", [&] { halrr.validate(); });
    check(lateral_tolerance_px > 0.0, "eval.lateral_tolerance_px must be positive");
    check(overlay.line_width >= 1, "overlay.line_width must be at least 1");
}

PipelineConfig parse_config(std::string_view text) {
    std::map<std::string, const Field*> lookup;
    for (const auto& field : fields()) lookup.emplace(field.key, &field);

    PipelineConfig config;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        const auto it = lookup.find(key);
        if (it == lookup.end()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        it->second->set(config, key, value);
    }
    config.validate();
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string serialize_config(const PipelineConfig& config) {
    std::string out;
    for (const auto& field : fields()) {
        out += field.key + " = " + field.get(config) + "\n";
    }
    return out;
}

} // namespace lanelab::pipeline
