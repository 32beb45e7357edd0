#include "rtm/reference.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "rtm/disk_series.hpp"
#include "rtm/errors.hpp"
#include "rtm/specfun.hpp"

namespace rtm::reference {
namespace {

constexpr int kBlock = 32;

std::vector<double> uniform_angles(int n) {
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) a[static_cast<std::size_t>(q)] = kTwoPi * q / n;
  return a;
}

// Same Euclidean norm on every column, with at most cols() rows.
Eigen::MatrixXcd compress_rows(const Eigen::MatrixXcd& m) {
  if (m.rows() <= m.cols()) return m;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
}

// Runs fill(first, count) over fixed-size blocks of points in parallel.
template <class Fill>
void for_blocks(std::size_t n_points, const Parallelism& par, Fill&& fill) {
  const int n_blocks = static_cast<int>((n_points + kBlock - 1) / kBlock);
  parallel_for(n_blocks, par, [&](int b) {
    const std::size_t first = static_cast<std::size_t>(b) * kBlock;
    fill(first, std::min<std::size_t>(kBlock, n_points - first));
  });
}

std::vector<double> boundary_values(const forward::Solver& solver, std::span<const Point2> points, int n_far,
                                    const ReferenceOptions& options) {
  const double k = solver.k();
  const auto& boundary = *solver.boundary();
  const int n = boundary.size();
  const Eigen::MatrixXcd inverse = solver.factorization().inverse();
  const std::vector<double> angles = uniform_angles(n_far);
  const Eigen::MatrixXcd far =
      compress_rows(nystrom::combined_far_field_matrix(boundary, k, solver.coupling(), angles) * inverse);
  const double far_weight = k * kTwoPi / n_far;

  const bool impedance = std::holds_alternative<forward::Impedance>(solver.model().physics);
  Eigen::MatrixXcd trace;
  Eigen::VectorXd boundary_weight;
  if (impedance) {
    trace = solver.trace_matrix() * inverse;
    boundary_weight.resize(n);
    for (int i = 0; i < n; ++i) {
      boundary_weight(i) = k * boundary.weight(i) * boundary.node(i).jacobian * solver.impedance_at_nodes()(i);
    }
  }

  std::vector<double> out(points.size());
  for_blocks(points.size(), options.par, [&](std::size_t first, std::size_t count) {
    const auto cols = static_cast<Eigen::Index>(count);
    Eigen::MatrixXcd rhs(n, cols);
    for (std::size_t c = 0; c < count; ++c) {
      rhs.col(static_cast<Eigen::Index>(c)) = solver.boundary_rhs(forward::imag_green(k, points[first + c]));
    }
    const Eigen::MatrixXcd psi_far = far * rhs;
    Eigen::MatrixXcd total;
    if (impedance) {
      total = trace * rhs;
      for (std::size_t c = 0; c < count; ++c) {
        for (int i = 0; i < n; ++i) {
          total(i, static_cast<Eigen::Index>(c)) += specfun::green_imag(k, boundary.node(i).point, points[first + c]);
        }
      }
    }
    for (std::size_t c = 0; c < count; ++c) {
      const auto col = static_cast<Eigen::Index>(c);
      double value = far_weight * psi_far.col(col).squaredNorm();
      if (impedance) value += boundary_weight.dot(total.col(col).cwiseAbs2());
      out[first + c] = value;
    }
  });
  return out;
}

std::vector<double> volume_values(const forward::Solver& solver, std::span<const Point2> points, int n_far,
                                  const ReferenceOptions& options) {
  const double k = solver.k();
  const auto& ls = *solver.volume_solver();
  std::vector<double> out(points.size(), 0.0);
  if (ls.trivial()) return out;
  const std::vector<double> angles = uniform_angles(n_far);
  // far * A^{-1} = (A^{-T} far^T)^T
  const Eigen::PartialPivLU<volume::Matrix> lu_transposed(ls.dense_system().transpose());
  const Eigen::MatrixXcd far =
      compress_rows(lu_transposed.solve(ls.far_field_matrix(angles).transpose()).transpose());
  const double far_weight = k * kTwoPi / n_far;
  const auto nodes = ls.nodes();

  for_blocks(points.size(), options.par, [&](std::size_t first, std::size_t count) {
    Eigen::MatrixXcd incident(ls.size(), static_cast<Eigen::Index>(count));
    for (std::size_t c = 0; c < count; ++c) {
      for (int i = 0; i < ls.size(); ++i) {
        incident(i, static_cast<Eigen::Index>(c)) =
            specfun::green_imag(k, nodes[static_cast<std::size_t>(i)], points[first + c]);
      }
    }
    const Eigen::MatrixXcd psi_far = far * incident;
    for (std::size_t c = 0; c < count; ++c) {
      out[first + c] = far_weight * psi_far.col(static_cast<Eigen::Index>(c)).squaredNorm();
    }
  });
  return out;
}

std::vector<double> series_values(const forward::ScattererModel& model, double k, std::span<const Point2> points,
                                  const ReferenceOptions& options) {
  const auto& circle = std::get<geometry::Circle>(model.curves[0]);
  const auto& pen = std::get<forward::Penetrable>(model.physics);
  const disk::Disk d{circle.radius, circle.center, disk::Transmission{pen.index_of(0)}};
  const int order = disk::truncation_order(k, circle.radius);
  std::vector<double> out(points.size());
  parallel_for(static_cast<int>(points.size()), options.par, [&](int i) {
    const auto coeffs = disk::imag_green_coefficients(k, d.center, points[static_cast<std::size_t>(i)], order);
    out[static_cast<std::size_t>(i)] = disk::SeriesField(d, k, coeffs).far_field_energy();
  });
  return out;
}

TheoremImage image_for(const forward::ScattererModel& model, const geometry::SamplingGrid& grid, double k,
                       const ReferenceOptions& options) {
  grid.validate();
  std::vector<Point2> points;
  points.reserve(grid.size());
  for (int i = 0; i < grid.n1; ++i) {
    for (int j = 0; j < grid.n2; ++j) points.push_back(grid.node(i, j));
  }
  const std::vector<double> values = theorem_values(model, k, points, options);
  TheoremImage img;
  img.grid = grid;
  img.theorem = theorem_for(model);
  img.far_field_nodes = options.far_field_nodes > 0 ? options.far_field_nodes : default_far_field_nodes(model, k);
  img.k = k;
  img.values.resize(grid.n1, grid.n2);
  for (int i = 0; i < grid.n1; ++i) {
    for (int j = 0; j < grid.n2; ++j) img.values(i, j) = values[grid.index(i, j)];
  }
  return img;
}

double quadrature_weight(const geometry::CurveNode& node, int n) { return kTwoPi / n * node.jacobian; }

}  // namespace

Theorem theorem_for(const forward::ScattererModel& model) {
  if (std::holds_alternative<forward::Dirichlet>(model.physics)) return Theorem::SoundSoft;
  if (std::holds_alternative<forward::Impedance>(model.physics)) return Theorem::Impedance;
  return Theorem::Penetrable;
}

int default_far_field_nodes(const forward::ScattererModel& model, double k) {
  if (model.empty()) return 64;
  std::vector<geometry::BoundaryCurve> curves;
  for (const auto& c : model.curves) curves.emplace_back(c, 64);
  const int n = std::max(64, static_cast<int>(std::ceil(10.0 * k * geometry::diameter(curves))));
  return n + (n % 2);
}

imaging::Image TheoremImage::as_image() const {
  imaging::Image img;
  img.grid = grid;
  img.values = values;
  img.kind = imaging::ImageKind::Reference;
  img.wavenumbers = {k};
  return img;
}

std::vector<double> theorem_values(const forward::ScattererModel& model, double k, std::span<const Point2> points,
                                   const ReferenceOptions& options) {
  const int n_far = options.far_field_nodes > 0 ? options.far_field_nodes : default_far_field_nodes(model, k);
  if (n_far < 8) throw ValidationError("far-field quadrature needs at least 8 nodes");
  const forward::Solver solver(model, k, options.par);
  switch (solver.method()) {
    case forward::Method::None:
      return std::vector<double>(points.size(), 0.0);
    case forward::Method::Boundary:
      return boundary_values(solver, points, n_far, options);
    case forward::Method::Volume:
      return volume_values(solver, points, n_far, options);
    case forward::Method::Series:
      return series_values(solver.model(), k, points, options);
  }
  throw ComputeError("unknown solver method");
}

TheoremImage theorem_image(const forward::ScattererModel& model, const geometry::SamplingGrid& grid, double k,
                           const ReferenceOptions& options) {
  return image_for(model, grid, k, options);
}

TheoremImage theorem_image_sound_soft(const forward::ScattererModel& model, const geometry::SamplingGrid& grid,
                                      double k, const ReferenceOptions& options) {
  if (theorem_for(model) != Theorem::SoundSoft) throw ValidationError("sound-soft limit image needs Dirichlet physics");
  return image_for(model, grid, k, options);
}

TheoremImage theorem_image_impedance(const forward::ScattererModel& model, const geometry::SamplingGrid& grid,
                                     double k, const ReferenceOptions& options) {
  if (theorem_for(model) != Theorem::Impedance) throw ValidationError("impedance limit image needs impedance physics");
  return image_for(model, grid, k, options);
}

TheoremImage theorem_image_penetrable(const forward::ScattererModel& model, const geometry::SamplingGrid& grid,
                                      double k, const ReferenceOptions& options) {
  if (theorem_for(model) != Theorem::Penetrable) throw ValidationError("penetrable limit image needs penetrable physics");
  return image_for(model, grid, k, options);
}

IdentityReport check_hk_boundary(const geometry::CurveKind& curve, double k, const Point2& x, const Point2& y,
                                 const HkOptions& options) {
  const int n = options.nodes > 0 ? options.nodes : 2 * geometry::points_per_wavelength(curve, k);
  const geometry::BoundaryCurve c(curve, n);
  if (!c.contains(x) || !c.contains(y)) throw ValidationError("identity points must lie inside the curve");
  Complex sum{0.0, 0.0};
  for (const auto& nd : c.nodes()) {
    const auto gx = specfun::green_with_gradient(k, nd.point, x);
    const auto gy = specfun::green_with_gradient(k, nd.point, y);
    const Complex dnx = gx.grad.d1 * nd.normal.x1 + gx.grad.d2 * nd.normal.x2;
    const Complex dny = gy.grad.d1 * nd.normal.x1 + gy.grad.d2 * nd.normal.x2;
    sum += quadrature_weight(nd, n) * (std::conj(gx.value) * dny - std::conj(dnx) * gy.value);
  }
  IdentityReport r;
  r.identity = Identity::HkBoundary;
  r.lhs = options.green_scale * options.green_scale * sum;
  r.rhs = Complex{0.0, 2.0 * specfun::green_imag(k, x, y)};
  r.residual = std::abs(r.lhs - r.rhs);
  r.relative_residual = r.residual / std::abs(r.rhs);
  r.nodes = n;
  return r;
}

namespace {

Complex circle_integral(double radius, double k, int n, const Point2& x, const Point2& z, double scale) {
  Complex sum{0.0, 0.0};
  for (int q = 0; q < n; ++q) {
    const Point2 xs = radius * unit_direction(kTwoPi * q / n);
    sum += std::conj(specfun::green(k, x, xs)) * specfun::green(k, xs, z);
  }
  return scale * scale * k * (kTwoPi * radius / n) * sum;
}

void check_circle_args(double radius, int n_nodes, const Point2& x, const Point2& z) {
  if (!(radius > 0.0)) throw ValidationError("circle radius must be positive");
  if (n_nodes < 8) throw ValidationError("circle quadrature needs at least 8 nodes");
  if (!(norm(x) < radius) || !(norm(z) < radius)) throw ValidationError("identity points must lie inside the circle");
}

}  // namespace

IdentityReport check_hk_circle(double radius, double k, int n_nodes, const Point2& x, const Point2& z,
                               const HkOptions& options) {
  check_circle_args(radius, n_nodes, x, z);
  IdentityReport r;
  r.identity = Identity::HkCircleSource;
  r.lhs = circle_integral(radius, k, n_nodes, x, z, options.green_scale);
  r.rhs = specfun::green_imag(k, x, z);
  r.residual = std::abs(r.lhs - r.rhs);
  r.relative_residual = r.residual / std::abs(r.rhs);
  r.radius = radius;
  r.nodes = n_nodes;
  return r;
}

IdentityReport check_hk_circle_gradient(double radius, double k, int n_nodes, const Point2& x, const Point2& z,
                                        double h, const HkOptions& options) {
  check_circle_args(radius, n_nodes, x, z);
  const auto lhs_at = [&](const Point2& p) { return circle_integral(radius, k, n_nodes, p, z, options.green_scale); };
  const Complex d1 = (lhs_at(x + Point2{h, 0.0}) - lhs_at(x - Point2{h, 0.0})) / (2.0 * h);
  const Complex d2 = (lhs_at(x + Point2{0.0, h}) - lhs_at(x - Point2{0.0, h})) / (2.0 * h);
  // grad_x J0(k|x - z|)/4 = -(k/4) J1(k r) (x - z)/r
  const Point2 d = x - z;
  const double r = norm(d);
  double g1 = 0.0;
  double g2 = 0.0;
  if (r > 0.0) {
    const double f = -0.25 * k * specfun::bessel_jy01(k * r).j1 / r;
    g1 = f * d.x1;
    g2 = f * d.x2;
  }
  IdentityReport rep;
  rep.identity = Identity::HkCircleGradient;
  rep.lhs = std::sqrt(std::norm(d1) + std::norm(d2));
  rep.rhs = std::hypot(g1, g2);
  rep.residual = std::sqrt(std::norm(d1 - g1) + std::norm(d2 - g2));
  rep.relative_residual = rep.rhs.real() > 0.0 ? rep.residual / rep.rhs.real() : rep.residual;
  rep.radius = radius;
  rep.nodes = n_nodes;
  return rep;
}

IdentityReport check_energy_identity(const forward::ScattererModel& model, double k, const Point2& source,
                                     int far_field_nodes) {
  if (!std::holds_alternative<forward::Dirichlet>(model.physics)) {
    throw ValidationError("energy identity check needs a sound-soft model");
  }
  const forward::BoundarySolution sol = forward::solve_dirichlet(model, k, source);
  const auto& boundary = *sol.boundary;
  Complex flux{0.0, 0.0};
  for (int c = 0; c < boundary.curve_count(); ++c) {
    const auto& curve = boundary.curve(c);
    for (int j = 0; j < curve.size(); ++j) {
      const auto& nd = curve.node(j);
      const forward::BoundaryTrace t = forward::boundary_trace(sol, c, nd.theta);
      flux += quadrature_weight(nd, curve.size()) * t.value * std::conj(t.normal_derivative);
    }
  }
  const int n_far = far_field_nodes > 0 ? far_field_nodes : default_far_field_nodes(model, k);
  const std::vector<double> angles = uniform_angles(n_far);
  const forward::Vector far = forward::far_field(forward::Solution{sol}, angles);
  IdentityReport r;
  r.identity = Identity::Energy;
  r.lhs = -flux.imag();
  r.rhs = k * kTwoPi / n_far * far.squaredNorm();
  r.residual = std::abs(r.lhs - r.rhs);
  r.relative_residual = r.residual / std::abs(r.rhs);
  r.nodes = boundary.size();
  return r;
}

}  // namespace rtm::reference
