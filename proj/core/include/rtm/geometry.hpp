#pragma once

// Obstacle boundaries, transducer circles and the imaging sampling grid.

#include <span>
#include <variant>
#include <vector>

#include "rtm/types.hpp"

namespace rtm::geometry {

struct Circle {
  double radius = 1.0;
  Point2 center{};
};

/// x1 = cos t + 0.65 cos 2t - 0.65, x2 = 1.5 sin t, scaled and shifted.
struct Kite {
  Point2 center{};
  double scale = 1.0;
};

/// Polar curve r(t) = scale * (1 + 0.2 cos(p t)) about `center`.
struct PLeaf {
  int p = 4;
  Point2 center{};
  double scale = 1.0;
};

using CurveKind = std::variant<Circle, Kite, PLeaf>;

/// Position and first two parameter derivatives at one parameter value.
struct CurveSample {
  Point2 point;
  Point2 d1;
  Point2 d2;
};

CurveSample evaluate(const CurveKind& kind, double theta);
void validate(const CurveKind& kind);

struct CurveNode {
  double theta = 0.0;
  Point2 point;
  Point2 tangent;  // x'(theta), not normalized
  Point2 second;   // x''(theta)
  Point2 normal;   // unit outward normal
  double jacobian = 0.0;  // |x'(theta)|
};

/// Sigmoidal reparameterization theta = g(s) of order p whose derivatives up to
/// order p - 1 vanish at theta = 0 and theta = pi. Nodes cluster there, which
/// restores fast convergence when boundary data jump at those two points.
/// The flat points sit half a node step away from the nodes, so every node has
/// a positive jacobian.
struct Grading {
  int order = 0;  // 0: identity map
  int n_points = 0;
  double parameter(double s) const;
  /// g(s), g'(s), g''(s)
  void map(double s, double& t, double& dt, double& ddt) const;
  /// Largest g' over a period; spacing in the sparsest region grows by this factor.
  static double max_speed(int order);
};

/// Closed analytic curve sampled at s_j = 2 pi j / n. Without grading s is the
/// geometric parameter theta; with grading theta = g(s). Immutable.
class BoundaryCurve {
 public:
  BoundaryCurve(CurveKind kind, int n_points, int grading_order = 0);

  const CurveKind& kind() const { return kind_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  std::span<const CurveNode> nodes() const { return nodes_; }
  const CurveNode& node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }

  /// Sample at quadrature parameter s, derivatives taken with respect to s.
  CurveSample evaluate(double s) const;
  /// Geometric parameter theta for quadrature parameter s.
  double geometric_parameter(double s) const { return grading_.order > 0 ? grading_.parameter(s) : s; }
  /// Inverse of geometric_parameter, in [0, 2 pi).
  double quadrature_parameter(double theta) const;
  int grading_order() const { return grading_.order; }
  BoundaryCurve resampled(int n_points) const { return BoundaryCurve(kind_, n_points, grading_.order); }

  /// Trapezoid arclength over the node set.
  double arclength() const;
  /// Area centroid of the enclosed region.
  Point2 centroid() const;
  /// Largest distance from `c` to the curve (dense sampling).
  double max_distance_from(const Point2& c) const;
  /// Winding-number test on a dense polygon.
  bool contains(const Point2& p) const;
  /// Approximate distance from `p` to the curve.
  double distance_to(const Point2& p) const;

 private:
  CurveKind kind_;
  Grading grading_;
  std::vector<CurveNode> nodes_;
  std::vector<Point2> polygon_;
};

/// Self-refined trapezoid arclength of the analytic curve, 1e-10 relative.
double arclength(const CurveKind& kind);

/// Smallest even node count with spacing <= wavelength / points_per_wavelength,
/// never below 16.
int points_per_wavelength(const CurveKind& kind, double k, double points_per_wavelength = 10.0);

/// Diameter of a set of curves (max pairwise node distance on dense samples).
double diameter(std::span<const BoundaryCurve> curves);

struct AcquisitionGeometry {
  double source_radius = 10.0;
  double receiver_radius = 10.0;
  int n_sources = 64;
  int n_receivers = 64;
  Point2 center{};

  void validate() const;
  /// x_s = center + Rs (cos 2 pi s/Ns, sin 2 pi s/Ns), s = 1..Ns, stored at index s-1.
  Point2 source(int index) const;
  Point2 receiver(int index) const;
  std::vector<Point2> sources() const;
  std::vector<Point2> receivers() const;
  /// |Gamma_s| / Ns and |Gamma_r| / Nr.
  double source_weight() const { return kTwoPi * source_radius / n_sources; }
  double receiver_weight() const { return kTwoPi * receiver_radius / n_receivers; }
  bool coincident() const;

  friend bool operator==(const AcquisitionGeometry&, const AcquisitionGeometry&) = default;
};

struct SamplingGrid {
  double x1_min = -1.0;
  double x1_max = 1.0;
  double x2_min = -1.0;
  double x2_max = 1.0;
  int n1 = 2;
  int n2 = 2;

  void validate() const;
  double spacing1() const { return (x1_max - x1_min) / (n1 - 1); }
  double spacing2() const { return (x2_max - x2_min) / (n2 - 1); }
  Point2 node(int i, int j) const { return {x1_min + i * spacing1(), x2_min + j * spacing2()}; }
  std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
  /// Row-major flat index, i (x1) major.
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n2) + static_cast<std::size_t>(j);
  }
  bool contains(const Point2& p) const {
    return p.x1 >= x1_min && p.x1 <= x1_max && p.x2 >= x2_min && p.x2 <= x2_max;
  }

  friend bool operator==(const SamplingGrid&, const SamplingGrid&) = default;
};

}  // namespace rtm::geometry
