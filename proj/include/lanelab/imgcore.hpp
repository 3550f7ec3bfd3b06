/**
 * @file imgcore.hpp
 * @brief Pixel-level preprocessing: grayscale conversion, bilateral smoothing,
 *        dual-threshold Canny edges and the trapezoid region-of-interest mask.
 */
#pragma once

#include "lanelab/image.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace lanelab::imgcore {

/// Rounds half-up; every stage that produces intensities goes through this.
inline double round_half_up(double v) noexcept;

// ---------------------------------------------------------------------------
// Grayscale
// ---------------------------------------------------------------------------

inline constexpr double kLumaRed = 0.3;
inline constexpr double kLumaGreen = 0.59;
inline constexpr double kLumaBlue = 0.11;

std::uint8_t luma(Rgb px) noexcept;
GrayImage to_grayscale(const RgbImage& img);

// ---------------------------------------------------------------------------
// Bilateral filter
// ---------------------------------------------------------------------------

struct BilateralParams {
    double sigma_spatial = 3.0;
    double sigma_range = 20.0;
    int radius = 6;

    /// Throws InvalidArgument unless all fields are strictly positive.
    void validate() const;
};

/// Edge-preserving normalized weighted mean over a clipped square window.
///
/// Weights are exp(-(dx^2+dy^2) / 2 sigma_s^2) * exp(-(Ip-Iq)^2 / 2 sigma_r^2),
/// accumulated in row-major window order and rounded half-up. Throws
/// InvalidArgument when the radius exceeds min(width, height) / 2.
GrayImage bilateral_filter(const GrayImage& img, const BilateralParams& params);

/// Separable Gaussian smoothing over a clipped window, normalized by the
/// in-image weight sum.
GrayImage gaussian_blur(const GrayImage& img, double sigma, int radius);
void gaussian_blur_plane(Raster<double>& plane, double sigma, int radius);

// ---------------------------------------------------------------------------
// Canny
// ---------------------------------------------------------------------------

struct OitrThresholds {
    double upper = 30.0;
    double lower = 10.0;

    void validate() const;
};

struct CannyOptions {
    /// Standalone use only: the pipeline feeds bilateral output instead.
    bool gaussian_presmooth = false;
};

/// Gradient quantized to the NMS neighbour axis (angle of the gradient vector, y down).
enum class GradientBin : std::uint8_t { k0 = 0, k45 = 1, k90 = 2, k135 = 3 };

struct GradientField {
    Raster<float> magnitude;
    Raster<std::uint8_t> bin;  ///< GradientBin values
};

/// Sobel gradient scaled by 1/4 so that an ideal step of height h yields a
/// magnitude of h. The one-pixel frame border (where the 3x3 window does not
/// fit) gets zero magnitude.
GradientField sobel_gradient(const GrayImage& img);

/// Keeps magnitudes that are local maxima along the quantized gradient axis
/// (strictly greater than the backward neighbour, not smaller than the
/// forward one); everything else becomes zero.
Raster<float> non_max_suppression(const GradientField& grad);

/// Pixels with magnitude >= upper seed edges; pixels in [lower, upper) survive
/// when 8-connected (transitively) to a seed. Accepts lower == upper.
EdgeMap hysteresis(const Raster<float>& suppressed, double lower, double upper);

EdgeMap canny_oitr(const GrayImage& img, const OitrThresholds& thresholds,
                   const CannyOptions& options = {});

// ---------------------------------------------------------------------------
// Region of interest
// ---------------------------------------------------------------------------

struct TrapezoidRoi {
    double top_y_frac = 0.62;
    double bottom_y_frac = 0.90;
    double top_width_frac = 0.25;
    double bottom_width_frac = 0.95;

    void validate() const;

    /// Vertices in pixel coordinates, clockwise on screen starting top-left.
    std::array<std::array<double, 2>, 4> vertices(int width, int height) const;

    /// Rows used to normalise lane positions: round(frac * height), clamped.
    int top_row(int height) const;
    int bottom_row(int height) const;

    /// Boundary-inclusive point-in-trapezoid test in pixel coordinates.
    bool contains(double x, double y, int width, int height) const;
};

/// Clears every edge pixel outside the trapezoid. Throws InvalidArgument on a
/// degenerate trapezoid.
EdgeMap apply_roi_mask(const EdgeMap& edges, const TrapezoidRoi& roi);

// ---------------------------------------------------------------------------
// Geometry helpers
// ---------------------------------------------------------------------------

/// Bilinear resampling to the requested size (pixel-centre aligned).
RgbImage resize_bilinear(const RgbImage& img, int width, int height);

inline double round_half_up(double v) noexcept { return std::floor(v + 0.5); }

} // namespace lanelab::imgcore
