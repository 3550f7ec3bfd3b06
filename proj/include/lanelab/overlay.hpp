#pragma once

#include "lanelab/config.hpp"
#include "lanelab/image.hpp"
#include "lanelab/pipeline.hpp"

#include <vector>

namespace lanelab::pipeline {

/// Integer Bresenham line including both endpoints.
std::vector<PixelPoint> bresenham(PixelPoint from, PixelPoint to);

/// Draws a line with a square brush of side `line_width` (clipped to the image).
void draw_line(RgbImage& img, PixelPoint from, PixelPoint to, Rgb color, int line_width);

/// Copy of `frame` with the tracked lanes drawn over it, Tracked and Held
/// lanes in their configured colours, optional ROI outline. Lane coordinates
/// are in working-resolution pixels and are mapped back to the frame size.
RgbImage render_overlay(const RgbImage& frame, const FrameResult& result, const PipelineConfig& config);

} // namespace lanelab::pipeline
