#include "rtm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rtm/errors.hpp"

namespace rtm::geometry {
namespace {

constexpr int kPolygonPoints = 2048;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

CurveSample scaled(const Point2& center, double scale, const CurveSample& unit) {
  return {center + scale * unit.point, scale * unit.d1, scale * unit.d2};
}

}  // namespace

void validate(const CurveKind& kind) {
  std::visit(Overloaded{
                 [](const Circle& c) {
                   if (!(c.radius > 0.0)) throw ValidationError("circle radius must be positive");
                 },
                 [](const Kite& k) {
                   if (!(k.scale > 0.0)) throw ValidationError("kite scale must be positive");
                 },
                 [](const PLeaf& l) {
                   if (l.p < 1) throw ValidationError("p-leaf requires p >= 1");
                   if (!(l.scale > 0.0)) throw ValidationError("p-leaf scale must be positive");
                 },
             },
             kind);
}

CurveSample evaluate(const CurveKind& kind, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return std::visit(
      Overloaded{
          [&](const Circle& circ) {
            const double r = circ.radius;
            return CurveSample{circ.center + Point2{r * c, r * s}, {-r * s, r * c}, {-r * c, -r * s}};
          },
          [&](const Kite& kite) {
            const double c2 = std::cos(2.0 * t);
            const double s2 = std::sin(2.0 * t);
            const CurveSample unit{{c + 0.65 * c2 - 0.65, 1.5 * s},
                                   {-s - 1.3 * s2, 1.5 * c},
                                   {-c - 2.6 * c2, -1.5 * s}};
            return scaled(kite.center, kite.scale, unit);
          },
          [&](const PLeaf& leaf) {
            const double p = leaf.p;
            const double r = 1.0 + 0.2 * std::cos(p * t);
            const double dr = -0.2 * p * std::sin(p * t);
            const double ddr = -0.2 * p * p * std::cos(p * t);
            const Point2 radial{c, s};
            const Point2 angular{-s, c};
            const CurveSample unit{r * radial, dr * radial + r * angular,
                                   ddr * radial + 2.0 * dr * angular - r * radial};
            return scaled(leaf.center, leaf.scale, unit);
          },
      },
      kind);
}

namespace {

// Kress's substitution on [0, 2 pi] with flat ends: w(u) = 2 pi a / (a + b),
// a = v(u)^p, b = v(2 pi - u)^p, v cubic with v(0) = 0, v(pi) = 1/2, v(2 pi) = 1.
struct KressMap {
  double p;

  double v(double u) const {
    const double q = (kPi - u) / kPi;
    return (1.0 / p - 0.5) * q * q * q + (u - kPi) / (p * kPi) + 0.5;
  }
  double dv(double u) const {
    const double q = (kPi - u) / kPi;
    return -3.0 * (1.0 / p - 0.5) * q * q / kPi + 1.0 / (p * kPi);
  }
  double ddv(double u) const { return 6.0 * (1.0 / p - 0.5) * (kPi - u) / (kPi * kPi * kPi); }

  void eval(double u, double& w, double& dw, double& ddw) const {
    const double va = v(u);
    const double vb = v(kTwoPi - u);
    const double a = std::pow(va, p);
    const double b = std::pow(vb, p);
    const double da = p * std::pow(va, p - 1.0) * dv(u);
    const double db = -p * std::pow(vb, p - 1.0) * dv(kTwoPi - u);
    const double dda = p * (p - 1.0) * std::pow(va, p - 2.0) * dv(u) * dv(u) + p * std::pow(va, p - 1.0) * ddv(u);
    const double ddb =
        p * (p - 1.0) * std::pow(vb, p - 2.0) * dv(kTwoPi - u) * dv(kTwoPi - u) + p * std::pow(vb, p - 1.0) * ddv(kTwoPi - u);
    const double sum = a + b;
    const double num = da * b - a * db;
    w = kTwoPi * a / sum;
    dw = kTwoPi * num / (sum * sum);
    ddw = kTwoPi * ((dda * b - a * ddb) * sum - 2.0 * num * (da + db)) / (sum * sum * sum);
  }
};

}  // namespace

void Grading::map(double s, double& t, double& dt, double& ddt) const {
  // Shift by half a node step, reduce to one period, then apply the Kress map
  // to each half [0, pi] and [pi, 2 pi] stretched onto [0, 2 pi].
  const double shifted = s - kPi / n_points;
  const double period = std::floor(shifted / kTwoPi);
  double u = shifted - kTwoPi * period;
  const double base = u >= kPi ? kPi : 0.0;
  u -= base;
  double w = 0.0;
  double dw = 0.0;
  double ddw = 0.0;
  KressMap{static_cast<double>(order)}.eval(2.0 * u, w, dw, ddw);
  t = kTwoPi * period + base + 0.5 * w;
  dt = dw;
  ddt = 2.0 * ddw;
}

double Grading::parameter(double s) const {
  double t = 0.0;
  double dt = 0.0;
  double ddt = 0.0;
  map(s, t, dt, ddt);
  return t;
}

double Grading::max_speed(int order) {
  if (order <= 0) return 1.0;
  double best = 0.0;
  const KressMap m{static_cast<double>(order)};
  for (int i = 0; i <= 4096; ++i) {
    double w = 0.0;
    double dw = 0.0;
    double ddw = 0.0;
    m.eval(kTwoPi * i / 4096.0, w, dw, ddw);
    best = std::max(best, dw);
  }
  return best;
}

CurveSample BoundaryCurve::evaluate(double s) const {
  if (grading_.order <= 0) return geometry::evaluate(kind_, s);
  double t = 0.0;
  double dt = 0.0;
  double ddt = 0.0;
  grading_.map(s, t, dt, ddt);
  const CurveSample g = geometry::evaluate(kind_, t);
  return {g.point, dt * g.d1, (dt * dt) * g.d2 + ddt * g.d1};
}

double BoundaryCurve::quadrature_parameter(double theta) const {
  double t = theta - kTwoPi * std::floor(theta / kTwoPi);
  if (grading_.order <= 0) return t;
  // g is increasing with g(s + 2 pi) = g(s) + 2 pi; bisect on one period.
  double lo = kPi / size() - 1e-12;
  double hi = lo + kTwoPi;
  if (t < grading_.parameter(lo)) t += kTwoPi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (grading_.parameter(mid) < t ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  return s - kTwoPi * std::floor(s / kTwoPi);
}

BoundaryCurve::BoundaryCurve(CurveKind kind, int n_points, int grading_order)
    : kind_(kind), grading_{grading_order, n_points} {
  validate(kind_);
  if (n_points < 16) throw ValidationError("curve needs at least 16 nodes, got " + std::to_string(n_points));
  if (n_points % 2 != 0) throw ValidationError("curve node count must be even, got " + std::to_string(n_points));
  if (grading_order < 0 || grading_order == 1) throw ValidationError("grading order must be 0 or at least 2");
  nodes_.reserve(static_cast<std::size_t>(n_points));
  for (int j = 0; j < n_points; ++j) {
    const double t = kTwoPi * j / n_points;
    const CurveSample s = evaluate(t);
    const double jac = norm(s.d1);
    nodes_.push_back({t, s.point, s.d1, s.d2, (1.0 / jac) * right_normal(s.d1), jac});
  }
  polygon_.reserve(kPolygonPoints);
  for (int j = 0; j < kPolygonPoints; ++j) {
    polygon_.push_back(geometry::evaluate(kind_, kTwoPi * j / kPolygonPoints).point);
  }
}

double BoundaryCurve::arclength() const {
  double sum = 0.0;
  for (const auto& n : nodes_) sum += n.jacobian;
  return sum * kTwoPi / size();
}

Point2 BoundaryCurve::centroid() const {
  double area = 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (const auto& n : nodes_) {
    area += 0.5 * cross(n.point, n.tangent);
    mx += 0.5 * n.point.x1 * n.point.x1 * n.tangent.x2;
    my -= 0.5 * n.point.x2 * n.point.x2 * n.tangent.x1;
  }
  return {mx / area, my / area};
}

double BoundaryCurve::max_distance_from(const Point2& c) const {
  double best = 0.0;
  for (const auto& p : polygon_) best = std::max(best, distance(p, c));
  return best;
}

bool BoundaryCurve::contains(const Point2& p) const {
  // Crossing-number form of the winding test; curves are simple and counterclockwise.
  bool inside = false;
  const std::size_t n = polygon_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = polygon_[i];
    const Point2& b = polygon_[j];
    if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
      const double x_cross = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
      if (p.x1 < x_cross) inside = !inside;
    }
  }
  return inside;
}

double BoundaryCurve::distance_to(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : polygon_) best = std::min(best, distance(p, q));
  return best;
}

double arclength(const CurveKind& kind) {
  validate(kind);
  auto trapezoid = [&](int n) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += norm(evaluate(kind, kTwoPi * j / n).d1);
    return sum * kTwoPi / n;
  };
  int n = 16;
  double prev = trapezoid(n);
  for (int iter = 0; iter < 20; ++iter) {
    n *= 2;
    const double cur = trapezoid(n);
    if (std::abs(cur - prev) <= 1e-10 * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

int points_per_wavelength(const CurveKind& kind, double k, double ppw) {
  if (!(k > 0.0)) throw ValidationError("points_per_wavelength: k must be positive");
  const double wavelength = kTwoPi / k;
  const double length = arclength(kind);
  // Guard against ceil() of values a few ulps above an integer.
  const double target = ppw * length / wavelength;
  int n = static_cast<int>(std::ceil(target - 1e-9 * target));
  if (n % 2 != 0) ++n;
  return std::max(n, 16);
}

double diameter(std::span<const BoundaryCurve> curves) {
  std::vector<Point2> pts;
  for (const auto& c : curves) {
    const int m = 256;
    for (int j = 0; j < m; ++j) pts.push_back(c.evaluate(kTwoPi * j / m).point);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, distance(pts[i], pts[j]));
  }
  return best;
}

void AcquisitionGeometry::validate() const {
  if (!(source_radius > 0.0) || !(receiver_radius > 0.0)) {
    throw ValidationError("acquisition radii must be positive");
  }
  if (n_sources < 1 || n_receivers < 1) throw ValidationError("acquisition needs at least one transducer");
}

Point2 AcquisitionGeometry::source(int index) const {
  return center + source_radius * unit_direction(kTwoPi * (index + 1) / n_sources);
}

Point2 AcquisitionGeometry::receiver(int index) const {
  return center + receiver_radius * unit_direction(kTwoPi * (index + 1) / n_receivers);
}

std::vector<Point2> AcquisitionGeometry::sources() const {
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(n_sources));
  for (int s = 0; s < n_sources; ++s) out.push_back(source(s));
  return out;
}

std::vector<Point2> AcquisitionGeometry::receivers() const {
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(n_receivers));
  for (int r = 0; r < n_receivers; ++r) out.push_back(receiver(r));
  return out;
}

bool AcquisitionGeometry::coincident() const {
  return source_radius == receiver_radius && n_sources == n_receivers;
}

void SamplingGrid::validate() const {
  if (n1 < 2 || n2 < 2) throw ValidationError("sampling grid needs n1, n2 >= 2");
  if (!(x1_max > x1_min) || !(x2_max > x2_min)) throw ValidationError("sampling grid bounds are empty");
}

}  // namespace rtm::geometry
