#pragma once

// Image comparison and quality measures used by `compare` and the acceptance suite.

#include <span>
#include <vector>

#include "rtm/geometry.hpp"
#include "rtm/imaging.hpp"

namespace rtm::metrics {

/// Zero-mean normalized cross-correlation of two images on one grid, in [-1, 1].
double normalized_cross_correlation(const imaging::Image& a, const imaging::Image& b);
double sup_difference(const imaging::Image& a, const imaging::Image& b);
/// sup |a - b| / max |b|.
double relative_sup_difference(const imaging::Image& a, const imaging::Image& b);

struct Peak {
  Point2 location;
  double value = 0.0;
};
Peak peak(const imaging::Image& image);
/// Largest value among nodes within `radius` of `curve`'s boundary.
Peak peak_near(const imaging::Image& image, const geometry::CurveKind& curve, double radius);
/// Position of the largest section sample with position in [lo, hi].
double section_peak(std::span<const imaging::SectionPoint> section, double lo, double hi);

enum class WidthReference {
  Zero,        // half of the peak value
  Prominence,  // halfway between the peak and the higher of its two flanking minima
};

/// Full width at half maximum of the highest sample with position in [lo, hi],
/// with linear interpolation at the half-level crossings. Throws ComputeError
/// if the section does not fall below the half level on both sides.
double fwhm(std::span<const imaging::SectionPoint> section, double lo, double hi,
            WidthReference reference = WidthReference::Prominence);

/// Boundary contrast-to-noise ratio: (mean over the boundary band - mean over the
/// background) / standard deviation over the background. The band holds nodes
/// within `band` of any obstacle boundary; the background holds nodes outside
/// every obstacle and farther than 2 * band from every boundary.
double boundary_contrast(const imaging::Image& image, std::span<const geometry::CurveKind> curves, double band);

}  // namespace rtm::metrics
