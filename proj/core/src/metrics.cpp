#include "rtm/metrics.hpp"

#include <cmath>
#include <limits>

#include "rtm/errors.hpp"

namespace rtm::metrics {
namespace {

void check_same_grid(const imaging::Image& a, const imaging::Image& b) {
  a.validate();
  b.validate();
  if (!(a.grid == b.grid)) throw ValidationError("images are on different grids");
}

// Crossing of the half level between samples lo_i and hi_i (adjacent).
double crossing(const imaging::SectionPoint& inside, const imaging::SectionPoint& outside, double half) {
  const double t = (inside.value - half) / (inside.value - outside.value);
  return inside.position + t * (outside.position - inside.position);
}

}  // namespace

double normalized_cross_correlation(const imaging::Image& a, const imaging::Image& b) {
  check_same_grid(a, b);
  const Eigen::ArrayXXd da = a.values.array() - a.values.mean();
  const Eigen::ArrayXXd db = b.values.array() - b.values.mean();
  const double denom = std::sqrt(da.square().sum() * db.square().sum());
  if (denom == 0.0) return (da.isZero(0.0) && db.isZero(0.0)) ? 1.0 : 0.0;
  return (da * db).sum() / denom;
}

double sup_difference(const imaging::Image& a, const imaging::Image& b) {
  check_same_grid(a, b);
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

double relative_sup_difference(const imaging::Image& a, const imaging::Image& b) {
  const double scale = b.values.cwiseAbs().maxCoeff();
  const double diff = sup_difference(a, b);
  if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / scale;
}

Peak peak(const imaging::Image& image) {
  image.validate();
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  const double v = image.values.maxCoeff(&i, &j);
  return {image.grid.node(static_cast<int>(i), static_cast<int>(j)), v};
}

Peak peak_near(const imaging::Image& image, const geometry::CurveKind& curve, double radius) {
  image.validate();
  const geometry::BoundaryCurve probe(curve, 256);
  Peak best{{}, -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < image.grid.n1; ++i) {
    for (int j = 0; j < image.grid.n2; ++j) {
      const Point2 z = image.grid.node(i, j);
      if (image.values(i, j) > best.value && probe.distance_to(z) <= radius) best = {z, image.values(i, j)};
    }
  }
  if (!std::isfinite(best.value)) throw ValidationError("no grid node near the curve");
  return best;
}

double section_peak(std::span<const imaging::SectionPoint> section, double lo, double hi) {
  const imaging::SectionPoint* best = nullptr;
  for (const auto& p : section) {
    if (p.position < lo || p.position > hi) continue;
    if (best == nullptr || p.value > best->value) best = &p;
  }
  if (best == nullptr) throw ValidationError("no section samples in the peak window");
  return best->position;
}

double fwhm(std::span<const imaging::SectionPoint> section, double lo, double hi, WidthReference reference) {
  int top = -1;
  for (std::size_t s = 0; s < section.size(); ++s) {
    const auto& p = section[s];
    if (p.position < lo || p.position > hi) continue;
    if (top < 0 || p.value > section[static_cast<std::size_t>(top)].value) top = static_cast<int>(s);
  }
  if (top < 0) throw ValidationError("no section samples in the peak window");
  const auto at = [&](int s) { return section[static_cast<std::size_t>(s)]; };
  const int last = static_cast<int>(section.size()) - 1;
  const double peak_value = at(top).value;

  double base = 0.0;
  if (reference == WidthReference::Prominence) {
    // Lowest sample on each side before the section rises above the peak again.
    double left_min = peak_value;
    for (int s = top - 1; s >= 0 && at(s).value <= peak_value; --s) left_min = std::min(left_min, at(s).value);
    double right_min = peak_value;
    for (int s = top + 1; s <= last && at(s).value <= peak_value; ++s) right_min = std::min(right_min, at(s).value);
    base = std::max(left_min, right_min);
  }
  const double half = base + 0.5 * (peak_value - base);
  if (!(peak_value > base) || (reference == WidthReference::Zero && !(half > 0.0))) {
    throw ComputeError("section peak does not stand above its reference level");
  }
  int left = top;
  while (left > 0 && at(left - 1).value > half) --left;
  int right = top;
  while (right < last && at(right + 1).value > half) ++right;
  if (left == 0 || right == last) throw ComputeError("section does not fall to half maximum around the peak");
  return crossing(at(right), at(right + 1), half) - crossing(at(left), at(left - 1), half);
}

double boundary_contrast(const imaging::Image& image, std::span<const geometry::CurveKind> curves, double band) {
  image.validate();
  if (curves.empty()) throw ValidationError("boundary contrast needs at least one obstacle");
  std::vector<geometry::BoundaryCurve> probes;
  for (const auto& c : curves) probes.emplace_back(c, 256);
  double band_sum = 0.0;
  int band_count = 0;
  double back_sum = 0.0;
  double back_sq = 0.0;
  int back_count = 0;
  for (int i = 0; i < image.grid.n1; ++i) {
    for (int j = 0; j < image.grid.n2; ++j) {
      const Point2 z = image.grid.node(i, j);
      double dist = std::numeric_limits<double>::infinity();
      bool inside = false;
      for (const auto& p : probes) {
        dist = std::min(dist, p.distance_to(z));
        inside = inside || p.contains(z);
      }
      const double v = image.values(i, j);
      if (dist <= band) {
        band_sum += v;
        ++band_count;
      } else if (!inside && dist > 2.0 * band) {
        back_sum += v;
        back_sq += v * v;
        ++back_count;
      }
    }
  }
  if (band_count == 0 || back_count < 2) throw ValidationError("grid has no boundary band or no background");
  const double back_mean = back_sum / back_count;
  const double back_std = std::sqrt(std::max(0.0, back_sq / back_count - back_mean * back_mean));
  if (back_std == 0.0) return std::numeric_limits<double>::infinity();
  return (band_sum / band_count - back_mean) / back_std;
}

}  // namespace rtm::metrics
