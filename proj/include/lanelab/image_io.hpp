#pragma once

#include "lanelab/image.hpp"

#include <filesystem>

namespace lanelab::io {

/// Reads PNG (any 8-bit colour type, expanded to RGB), binary PPM (P6) or PGM (P5).
/// Throws InputError with the path on failure.
RgbImage read_rgb(const std::filesystem::path& path);
GrayImage read_gray(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RgbImage& img);
void write_png(const std::filesystem::path& path, const GrayImage& img);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Writes an EdgeMap as an 8-bit PNG (edges 255, background 0).
void write_edges_png(const std::filesystem::path& path, const EdgeMap& edges);

} // namespace lanelab::io
