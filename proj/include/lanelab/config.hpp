#pragma once

#include "lanelab/detect.hpp"
#include "lanelab/hough.hpp"
#include "lanelab/image.hpp"
#include "lanelab/imgcore.hpp"
#include "lanelab/track.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace lanelab::pipeline {

struct OverlayStyle {
    int line_width = 3;
    bool draw_roi = false;
    Rgb tracked_color{0, 255, 0};
    Rgb held_color{255, 200, 0};
    Rgb roi_color{0, 128, 255};
};

struct PipelineConfig {
    int working_width = 1056;
    int working_height = 594;
    /// Restrict the pixel stages to the ROI's row band (plus margin rows).
    bool roi_band_only = true;
    int roi_band_margin = 8;

    imgcore::BilateralParams bilateral;
    imgcore::OitrThresholds oitr;
    imgcore::CannyOptions canny;
    imgcore::TrapezoidRoi roi;
    hough::HoughParams hough;
    detect::AngleConstraint angle;
    track::HalrrParams halrr;

    double lateral_tolerance_px = 10.0;
    OverlayStyle overlay;

    /// Throws ConfigError naming the first offending key.
    void validate() const;
};

/// Flat `namespace.key = value` document; `#` starts a comment. Keys not
/// present keep their defaults. Throws ConfigError on unknown keys or bad values.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, parseable by parse_config.
std::string serialize_config(const PipelineConfig& config);

} // namespace lanelab::pipeline
