#include "rtm/nystrom.hpp"

#include <cmath>
#include <string>

#include "rtm/errors.hpp"
#include "rtm/specfun.hpp"

namespace rtm::nystrom {
namespace {

using geometry::BoundaryCurve;
using geometry::CurveNode;

constexpr double kInv2Pi = 1.0 / kTwoPi;
constexpr double kInv4Pi = 1.0 / (2.0 * kTwoPi);

struct Target {
  Point2 x;
  Point2 d1;
  Point2 d2;
  double jac = 0.0;
  Point2 unit_normal;
  int curve = 0;
  double theta = 0.0;
  int diag = -1;  // local node index when the target sits on a node
};

struct RowBuffers {
  Eigen::RowVectorXcd single;
  Eigen::RowVectorXcd dbl;
  Eigen::RowVectorXcd adj;
  Eigen::RowVectorXcd hyp;        // terms acting on phi
  Eigen::RowVectorXcd hyp_deriv;  // terms acting on phi' over the owning curve

  void resize(int total, int local) {
    single.setZero(total);
    dbl.setZero(total);
    adj.setZero(total);
    hyp.setZero(total);
    hyp_deriv.setZero(local);
  }
};

Target target_at_node(const Boundary& b, int curve, int local) {
  const CurveNode& nd = b.curve(curve).node(local);
  return {nd.point, nd.tangent, nd.second, nd.jacobian, nd.normal, curve, nd.theta, local};
}

// Fills one row for the target. R and C are the log and cot weights of the
// owning curve evaluated at the target parameter.
void fill_row(const Boundary& b, double k, const Target& tg, std::span<const double> R, std::span<const double> C,
              unsigned mask, RowBuffers& row) {
  const bool want_s = mask & kSingle;
  const bool want_k = mask & kDouble;
  const bool want_a = mask & kAdjoint;
  const bool want_t = mask & kHypersingular;
  const Complex ik = kI * k;
  const double k2 = k * k;

  for (int c = 0; c < b.curve_count(); ++c) {
    const BoundaryCurve& curve = b.curve(c);
    const int n_nodes = curve.size();
    const int off = b.offset(c);
    const double w_trap = kTwoPi / n_nodes;

    if (c != tg.curve) {
      for (int j = 0; j < n_nodes; ++j) {
        const CurveNode& src = curve.node(j);
        const Point2 d = tg.x - src.point;
        const double r = norm(d);
        const auto bj = specfun::bessel_jy01(k * r);
        const Complex h0{bj.j0, bj.y0};
        const Complex h1{bj.j1, bj.y1};
        const double wj = w_trap * src.jacobian;
        const double dn_src = dot(d, src.normal);
        const double dn_tgt = dot(d, tg.unit_normal);
        if (want_s) row.single(off + j) = wj * 0.25 * kI * h0;
        if (want_k) row.dbl(off + j) = wj * 0.25 * ik * h1 * dn_src / r;
        if (want_a) row.adj(off + j) = -wj * 0.25 * ik * h1 * dn_tgt / r;
        if (want_t) {
          const Complex radial = (k * h0 - 2.0 * h1 / r) * dn_tgt * dn_src / (r * r);
          row.hyp(off + j) = wj * 0.25 * ik * (radial + h1 * dot(tg.unit_normal, src.normal) / r);
        }
      }
      continue;
    }

    const double log_jac_diag = std::log(0.5 * k * tg.jac);
    for (int j = 0; j < n_nodes; ++j) {
      const CurveNode& src = curve.node(j);
      const double Rj = R[static_cast<std::size_t>(j)];
      const double jac_j = src.jacobian;
      const Point2 nu_j = right_normal(src.tangent);  // unnormalized, carries |x'|

      if (j == tg.diag) {
        const Complex m1 = -kInv2Pi * jac_j;
        const Complex m2 = (0.5 * kI - kEulerGamma / kPi - log_jac_diag / kPi) * jac_j;
        const double curvature_term = kInv2Pi * dot(right_normal(tg.d1), tg.d2) / (tg.jac * tg.jac);
        if (want_s) row.single(off + j) = 0.5 * (Rj * m1 + w_trap * m2);
        if (want_k) row.dbl(off + j) = 0.5 * w_trap * curvature_term;
        if (want_a) row.adj(off + j) = 0.5 * w_trap * curvature_term;
        if (want_t) {
          const double a2 = -kInv4Pi * dot(tg.d1, tg.d2) / (tg.jac * tg.jac);
          row.hyp_deriv(j) = w_trap * a2 / tg.jac;
          row.hyp(off + j) = C[static_cast<std::size_t>(j)] / tg.jac + 0.5 * k2 * (Rj * m1 + w_trap * m2);
        }
        continue;
      }

      const Point2 d = tg.x - src.point;
      const double r = norm(d);
      const auto bj = specfun::bessel_jy01(k * r);
      const Complex h0{bj.j0, bj.y0};
      const Complex h1{bj.j1, bj.y1};
      const double half = 0.5 * (tg.theta - src.theta);
      const double sin_half = std::sin(half);
      const double ls = std::log(4.0 * sin_half * sin_half);

      const Complex m = 0.5 * kI * h0 * jac_j;
      const double m1 = -kInv2Pi * bj.j0 * jac_j;
      const Complex m2 = m - m1 * ls;
      if (want_s) row.single(off + j) = 0.5 * (Rj * m1 + w_trap * m2);
      if (want_k) {
        const double nd = dot(nu_j, d);
        const Complex l = 0.5 * ik * h1 * nd / r;
        const double l1 = -k * kInv2Pi * nd * bj.j1 / r;
        row.dbl(off + j) = 0.5 * (Rj * l1 + w_trap * (l - l1 * ls));
      }
      if (want_a) {
        const double nd = dot(tg.unit_normal, d);
        const Complex l = -0.5 * ik * h1 * nd / r * jac_j;
        const double l1 = k * kInv2Pi * nd * bj.j1 / r * jac_j;
        row.adj(off + j) = 0.5 * (Rj * l1 + w_trap * (l - l1 * ls));
      }
      if (want_t) {
        const double dx = dot(d, tg.d1);
        const Complex dt_green = -0.25 * ik * h1 * dx / r;
        const double a1 = k * kInv4Pi * dx * bj.j1 / r;
        const Complex a2 = dt_green + kInv4Pi * std::cos(half) / sin_half - a1 * ls;
        row.hyp_deriv(j) = (Rj * a1 + w_trap * a2) / tg.jac;
        const double nn = dot(tg.unit_normal, src.normal);
        row.hyp(off + j) = C[static_cast<std::size_t>(j)] / tg.jac + 0.5 * k2 * nn * (Rj * m1 + w_trap * m2);
      }
    }
  }
}

// Weight vectors at node i from the vector at node 0 (they depend on i - j only).
std::vector<double> shifted(const std::vector<double>& base, int i) {
  const int n = static_cast<int>(base.size());
  std::vector<double> out(base.size());
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>((i - j + n) % n)];
  return out;
}

}  // namespace

Boundary::Boundary(std::vector<geometry::BoundaryCurve> curves) : curves_(std::move(curves)) {
  for (const auto& c : curves_) offsets_.push_back(offsets_.back() + c.size());
}

std::pair<int, int> Boundary::locate(int global) const {
  if (global < 0 || global >= size()) throw ValidationError("boundary node index out of range");
  int c = 0;
  while (global >= offsets_[static_cast<std::size_t>(c) + 1]) ++c;
  return {c, global - offsets_[static_cast<std::size_t>(c)]};
}

const geometry::CurveNode& Boundary::node(int global) const {
  const auto [c, j] = locate(global);
  return curve(c).node(j);
}

double Boundary::weight(int global) const { return kTwoPi / curve(locate(global).first).size(); }

std::vector<double> log_weights(int n_nodes, double t) {
  const int n = n_nodes / 2;
  std::vector<double> w(static_cast<std::size_t>(n_nodes));
  for (int j = 0; j < n_nodes; ++j) {
    const double s = t - kPi * j / n;
    double sum = 0.0;
    for (int m = 1; m < n; ++m) sum += std::cos(m * s) / m;
    w[static_cast<std::size_t>(j)] = -(kTwoPi / n) * sum - (kPi / (static_cast<double>(n) * n)) * std::cos(n * s);
  }
  return w;
}

std::vector<double> cot_weights(int n_nodes, double t) {
  const int n = n_nodes / 2;
  std::vector<double> w(static_cast<std::size_t>(n_nodes));
  for (int j = 0; j < n_nodes; ++j) {
    const double s = t - kPi * j / n;
    double sum = 0.0;
    for (int m = 1; m < n; ++m) sum += m * std::cos(m * s);
    w[static_cast<std::size_t>(j)] = -sum / (2.0 * n) - 0.25 * std::cos(n * s);
  }
  return w;
}

std::vector<double> interpolation_weights(int n_nodes, double t) {
  const int n = n_nodes / 2;
  std::vector<double> w(static_cast<std::size_t>(n_nodes));
  for (int j = 0; j < n_nodes; ++j) {
    const double s = t - kPi * j / n;
    double sum = 1.0 + std::cos(n * s);
    for (int m = 1; m < n; ++m) sum += 2.0 * std::cos(m * s);
    w[static_cast<std::size_t>(j)] = sum / n_nodes;
  }
  return w;
}

Eigen::MatrixXd differentiation_matrix(int n_nodes) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  const double h = kTwoPi / n_nodes;
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = 0; j < n_nodes; ++j) {
      if (i == j) continue;
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(0.5 * (i - j) * h);
    }
  }
  return d;
}

LayerMatrices assemble(const Boundary& boundary, double k, unsigned mask, const Parallelism& par) {
  if (!(k > 0.0)) throw ValidationError("wavenumber must be positive");
  const int total = boundary.size();
  LayerMatrices out;
  if (mask & kSingle) out.single.setZero(total, total);
  if (mask & kDouble) out.double_layer.setZero(total, total);
  if (mask & kAdjoint) out.adjoint.setZero(total, total);
  if (mask & kHypersingular) out.hypersingular.setZero(total, total);

  for (int c = 0; c < boundary.curve_count(); ++c) {
    const int n_nodes = boundary.curve(c).size();
    const int off = boundary.offset(c);
    const std::vector<double> r0 = log_weights(n_nodes, 0.0);
    const std::vector<double> c0 = cot_weights(n_nodes, 0.0);
    Matrix deriv_coeffs;
    if (mask & kHypersingular) deriv_coeffs.setZero(n_nodes, n_nodes);

    parallel_for(n_nodes, par, [&](int i) {
      const Target tg = target_at_node(boundary, c, i);
      const std::vector<double> R = shifted(r0, i);
      const std::vector<double> C = shifted(c0, i);
      RowBuffers row;
      row.resize(total, n_nodes);
      fill_row(boundary, k, tg, R, C, mask, row);
      if (mask & kSingle) out.single.row(off + i) = row.single;
      if (mask & kDouble) out.double_layer.row(off + i) = row.dbl;
      if (mask & kAdjoint) out.adjoint.row(off + i) = row.adj;
      if (mask & kHypersingular) {
        out.hypersingular.row(off + i) = row.hyp;
        deriv_coeffs.row(i) = row.hyp_deriv;
      }
    });

    if (mask & kHypersingular) {
      out.hypersingular.block(off, off, n_nodes, n_nodes) +=
          deriv_coeffs * differentiation_matrix(n_nodes).cast<Complex>();
    }
  }
  return out;
}

OperatorRows rows_at(const Boundary& boundary, double k, int curve, double theta) {
  if (curve < 0 || curve >= boundary.curve_count()) throw ValidationError("curve index out of range");
  const BoundaryCurve& cv = boundary.curve(curve);
  const int n_nodes = cv.size();
  const int off = boundary.offset(curve);
  const int total = boundary.size();

  const double t = theta - kTwoPi * std::floor(theta / kTwoPi);
  const geometry::CurveSample s = cv.evaluate(t);
  Target tg{s.point, s.d1, s.d2, norm(s.d1), (1.0 / norm(s.d1)) * right_normal(s.d1), curve, t, -1};
  const double pos = t * n_nodes / kTwoPi;
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-12) {
    tg.diag = static_cast<int>(nearest) % n_nodes;
    tg.theta = cv.node(tg.diag).theta;
  }

  RowBuffers row;
  row.resize(total, n_nodes);
  fill_row(boundary, k, tg, log_weights(n_nodes, tg.theta), cot_weights(n_nodes, tg.theta), kAllOperators, row);

  OperatorRows out;
  out.single = row.single;
  out.double_layer = row.dbl;
  out.adjoint = row.adj;
  out.hypersingular = row.hyp;
  out.hypersingular.segment(off, n_nodes) += row.hyp_deriv * differentiation_matrix(n_nodes).cast<Complex>();
  out.interpolation.setZero(total);
  const std::vector<double> li = interpolation_weights(n_nodes, tg.theta);
  for (int j = 0; j < n_nodes; ++j) out.interpolation(off + j) = li[static_cast<std::size_t>(j)];
  return out;
}

Matrix combined_potential_matrix(const Boundary& boundary, double k, double coupling, std::span<const Point2> points,
                                 const Parallelism& par) {
  Matrix out(static_cast<Eigen::Index>(points.size()), boundary.size());
  const Complex ik = kI * k;
  parallel_for(static_cast<int>(points.size()), par, [&](int p) {
    const Point2 x = points[static_cast<std::size_t>(p)];
    for (int c = 0; c < boundary.curve_count(); ++c) {
      const BoundaryCurve& curve = boundary.curve(c);
      const double w = kTwoPi / curve.size();
      const int off = boundary.offset(c);
      for (int j = 0; j < curve.size(); ++j) {
        const CurveNode& src = curve.node(j);
        const Point2 d = x - src.point;
        const double r = norm(d);
        if (r == 0.0) throw ValidationError("evaluation point lies on a boundary node");
        const auto bj = specfun::bessel_jy01(k * r);
        const Complex h0{bj.j0, bj.y0};
        const Complex h1{bj.j1, bj.y1};
        out(p, off + j) =
            w * (0.25 * ik * h1 * dot(right_normal(src.tangent), d) / r + 0.25 * coupling * h0 * src.jacobian);
      }
    }
  });
  return out;
}

Matrix combined_far_field_matrix(const Boundary& boundary, double k, double coupling, std::span<const double> angles) {
  const Complex gamma = specfun::far_field_constant(k);
  Matrix out(static_cast<Eigen::Index>(angles.size()), boundary.size());
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const Point2 xhat = unit_direction(angles[a]);
    for (int c = 0; c < boundary.curve_count(); ++c) {
      const BoundaryCurve& curve = boundary.curve(c);
      const double w = kTwoPi / curve.size();
      const int off = boundary.offset(c);
      for (int j = 0; j < curve.size(); ++j) {
        const CurveNode& src = curve.node(j);
        const Complex kernel = -kI * (k * dot(xhat, right_normal(src.tangent)) + coupling * src.jacobian);
        out(static_cast<Eigen::Index>(a), off + j) =
            gamma * w * kernel * std::exp(-kI * (k * dot(xhat, src.point)));
      }
    }
  }
  return out;
}

Vector combined_potential(const Boundary& boundary, double k, double coupling, const Vector& density,
                          std::span<const Point2> points, const Parallelism& par) {
  if (density.size() != boundary.size()) throw ValidationError("density size does not match boundary");
  return combined_potential_matrix(boundary, k, coupling, points, par) * density;
}

Vector combined_far_field(const Boundary& boundary, double k, double coupling, const Vector& density,
                          std::span<const double> angles) {
  if (density.size() != boundary.size()) throw ValidationError("density size does not match boundary");
  return combined_far_field_matrix(boundary, k, coupling, angles) * density;
}

}  // namespace rtm::nystrom
