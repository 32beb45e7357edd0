#include "rtm/volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "rtm/errors.hpp"
#include "rtm/specfun.hpp"

namespace rtm::volume {
namespace {

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Barycentric Lagrange weights for the given nodes.
std::vector<double> barycentric_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 1.0);
  for (std::size_t l = 0; l < x.size(); ++l) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != l) w[l] /= (x[l] - x[j]);
    }
  }
  return w;
}

// Row of Lagrange basis values at t.
void lagrange_row(const std::vector<double>& x, const std::vector<double>& bw, double t, double* row) {
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (t == x[l]) {
      std::fill(row, row + x.size(), 0.0);
      row[l] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    row[l] = bw[l] / (t - x[l]);
    denom += row[l];
  }
  for (std::size_t l = 0; l < x.size(); ++l) row[l] /= denom;
}

struct BesselTable {
  std::vector<double> j;
  std::vector<double> y;
};

BesselTable bessel_table(int max_order, double x) {
  BesselTable t{std::vector<double>(static_cast<std::size_t>(max_order) + 1),
                std::vector<double>(static_cast<std::size_t>(max_order) + 1)};
  specfun::bessel_jy_sequence(max_order, x, t.j, t.y);
  return t;
}

bool is_circle(const geometry::CurveKind& kind) { return std::holds_alternative<geometry::Circle>(kind); }

}  // namespace

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ValidationError("Gauss-Legendre needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = beta;
    jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    nodes[static_cast<std::size_t>(i)] = a + half * (eig.eigenvalues()(i) + 1.0);
    weights[static_cast<std::size_t>(i)] = half * 2.0 * v0 * v0;
  }
}

LippmannSchwinger::LippmannSchwinger(std::vector<Component> components, double k, const VolumeOptions& options)
    : k_(k), components_(std::move(components)), gmres_(options.gmres) {
  if (!(k > 0.0)) throw ValidationError("wavenumber must be positive");
  const int n_comp = static_cast<int>(components_.size());

  for (const auto& comp : components_) {
    geometry::validate(comp.shape);
    shapes_.emplace_back(comp.shape, 64);
    if (!(comp.index > 0.0)) throw ValidationError("refractive index must be positive");
    PolarGrid grid;
    if (is_circle(comp.shape)) {
      const auto& c = std::get<geometry::Circle>(comp.shape);
      grid.center = c.center;
      grid.radius = c.radius;
    } else {
      const geometry::BoundaryCurve probe(comp.shape, 256);
      grid.center = probe.centroid();
      grid.radius = probe.max_distance_from(grid.center) * (1.0 + 1e-9);
    }
    const double kr = k * std::max(1.0, std::sqrt(comp.index)) * grid.radius;
    int n_radial = options.radial_nodes > 0 ? options.radial_nodes : static_cast<int>(std::ceil(0.5 * kr + 20.0));
    int half_modes = options.angular_nodes > 0 ? options.angular_nodes / 2
                                                : static_cast<int>(std::ceil(kr + 6.0 * std::cbrt(kr) + 10.0));
    if (half_modes + 1 > specfun::kMaxOrder) throw ValidationError("volume grid too fine for the Bessel order limit");
    grid.n_angular = 2 * half_modes + 1;
    gauss_legendre(n_radial, 0.0, grid.radius, grid.radii, grid.radial_weights);
    grid.offset = static_cast<int>(nodes_.size());

    const double dtheta = kTwoPi / grid.n_angular;
    for (int i = 0; i < n_radial; ++i) {
      for (int j = 0; j < grid.n_angular; ++j) {
        const double r = grid.radii[static_cast<std::size_t>(i)];
        nodes_.push_back(grid.center + r * unit_direction(j * dtheta));
        weights_.push_back(grid.radial_weights[static_cast<std::size_t>(i)] * r * dtheta);
      }
    }
    grids_.push_back(std::move(grid));
  }

  for (int a = 0; a < n_comp; ++a) {
    for (int b = a + 1; b < n_comp; ++b) {
      if (distance(grids_[a].center, grids_[b].center) <= grids_[a].radius + grids_[b].radius) {
        throw ValidationError("penetrable components need disjoint bounding disks");
      }
    }
  }

  contrast_.setZero(size());
  for (int g = 0; g < n_comp; ++g) {
    const auto& comp = components_[static_cast<std::size_t>(g)];
    const double value = k * k * (comp.index - 1.0);
    const PolarGrid& grid = grids_[static_cast<std::size_t>(g)];
    if (is_circle(comp.shape)) {
      contrast_.segment(grid.offset, grid.size()).setConstant(value);
    } else {
      const geometry::BoundaryCurve& curve = shapes_[static_cast<std::size_t>(g)];
      for (int p = 0; p < grid.size(); ++p) {
        if (curve.contains(nodes_[static_cast<std::size_t>(grid.offset + p)])) contrast_(grid.offset + p) = value;
      }
    }
  }

  // Radial mode operators.
  modes_.resize(static_cast<std::size_t>(n_comp));
  for (int g = 0; g < n_comp; ++g) {
    const PolarGrid& grid = grids_[static_cast<std::size_t>(g)];
    const int nr = static_cast<int>(grid.radii.size());
    const int max_m = (grid.n_angular - 1) / 2;
    const int nq = nr + static_cast<int>(std::ceil(0.5 * k * grid.radius)) + 10;
    const std::vector<double> bw = barycentric_weights(grid.radii);
    std::vector<double> qx;
    std::vector<double> qw;
    gauss_legendre(nq, 0.0, 1.0, qx, qw);

    auto& ops = modes_[static_cast<std::size_t>(g)];
    ops.assign(static_cast<std::size_t>(max_m) + 1, Matrix::Zero(nr, nr));
    const Complex prefactor = 0.5 * kI * kPi;  // (i/4) * 2 pi

    Eigen::MatrixXd interp(nq, nr);
    Eigen::VectorXcd coef(nq);
    for (int i = 0; i < nr; ++i) {
      const double ri = grid.radii[static_cast<std::size_t>(i)];
      const BesselTable at_target = bessel_table(max_m, k * ri);

      // pass 0: H_m(k r_i) int_0^{r_i} J_m(k r') f_m(r') r' dr'
      // pass 1: J_m(k r_i) int_{r_i}^R H_m(k r') f_m(r') r' dr'
      for (int pass = 0; pass < 2; ++pass) {
        const double lo = pass == 0 ? 0.0 : ri;
        const double hi = pass == 0 ? ri : grid.radius;
        std::vector<BesselTable> tables;
        std::vector<double> rq(static_cast<std::size_t>(nq));
        std::vector<double> wq(static_cast<std::size_t>(nq));
        for (int q = 0; q < nq; ++q) {
          rq[q] = lo + (hi - lo) * qx[q];
          wq[q] = (hi - lo) * qw[q] * rq[q];
          Eigen::RowVectorXd row(nr);
          lagrange_row(grid.radii, bw, rq[q], row.data());
          interp.row(q) = row;
          tables.push_back(bessel_table(max_m, k * rq[q]));
        }
        for (int m = 0; m <= max_m; ++m) {
          const auto um = static_cast<std::size_t>(m);
          const Complex h_target(at_target.j[um], at_target.y[um]);
          for (int q = 0; q < nq; ++q) {
            const BesselTable& t = tables[static_cast<std::size_t>(q)];
            const Complex product = pass == 0 ? h_target * t.j[um] : at_target.j[um] * Complex(t.j[um], t.y[um]);
            coef(q) = finite(product) ? prefactor * wq[q] * product : Complex(0.0);
          }
          ops[um].row(i) += coef.transpose() * interp.cast<Complex>();
        }
      }
    }
  }

  for (const auto& grid : grids_) {
    const int nt = grid.n_angular;
    const int max_m = (nt - 1) / 2;
    Matrix fwd(nt, nt);
    Matrix inv(nt, nt);
    for (int j = 0; j < nt; ++j) {
      for (int mi = 0; mi < nt; ++mi) {
        const double phase = kTwoPi * (mi - max_m) * j / nt;
        fwd(j, mi) = std::exp(-kI * phase) / static_cast<double>(nt);
        inv(mi, j) = std::exp(kI * phase);
      }
    }
    forward_dft_.push_back(std::move(fwd));
    inverse_dft_.push_back(std::move(inv));
  }

  mode_inverses_.resize(grids_.size());
  for (std::size_t g = 0; g < grids_.size(); ++g) {
    const PolarGrid& grid = grids_[g];
    const int nr = static_cast<int>(grid.radii.size());
    Eigen::VectorXcd ring_mean(nr);
    for (int i = 0; i < nr; ++i) {
      ring_mean(i) = contrast_.segment(grid.offset + i * grid.n_angular, grid.n_angular).mean();
    }
    for (const Matrix& op : modes_[g]) {
      Matrix a = -op * ring_mean.asDiagonal();
      a.diagonal().array() += 1.0;
      mode_inverses_[g].emplace_back(a);
    }
  }

  // Interaction between distinct components.
  coupling_.assign(static_cast<std::size_t>(n_comp), std::vector<Matrix>(static_cast<std::size_t>(n_comp)));
  for (int a = 0; a < n_comp; ++a) {
    for (int b = 0; b < n_comp; ++b) {
      if (a == b) continue;
      const PolarGrid& ga = grids_[static_cast<std::size_t>(a)];
      const PolarGrid& gb = grids_[static_cast<std::size_t>(b)];
      Matrix block(ga.size(), gb.size());
      for (int p = 0; p < ga.size(); ++p) {
        for (int q = 0; q < gb.size(); ++q) {
          const auto src = static_cast<std::size_t>(gb.offset + q);
          block(p, q) = weights_[src] * specfun::green(k, nodes_[static_cast<std::size_t>(ga.offset + p)], nodes_[src]);
        }
      }
      coupling_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = std::move(block);
    }
  }
}

void LippmannSchwinger::apply_self(int g, const Vector& f, Vector& out) const {
  const PolarGrid& grid = grids_[static_cast<std::size_t>(g)];
  const int nr = static_cast<int>(grid.radii.size());
  const int nt = grid.n_angular;
  const int max_m = (nt - 1) / 2;
  const auto& ops = modes_[static_cast<std::size_t>(g)];

  Eigen::Map<const RowMajor> values(f.data() + grid.offset, nr, nt);
  Matrix modes = values * forward_dft_[static_cast<std::size_t>(g)];
  for (int mi = 0; mi < nt; ++mi) {
    const int m = std::abs(mi - max_m);
    modes.col(mi) = (ops[static_cast<std::size_t>(m)] * modes.col(mi)).eval();
  }
  Eigen::Map<RowMajor> result(out.data() + grid.offset, nr, nt);
  result = modes * inverse_dft_[static_cast<std::size_t>(g)];
}

void LippmannSchwinger::apply_preconditioner(const Vector& in, Vector& out) const {
  out.resize(size());
  for (std::size_t g = 0; g < grids_.size(); ++g) {
    const PolarGrid& grid = grids_[g];
    const int nr = static_cast<int>(grid.radii.size());
    const int nt = grid.n_angular;
    const int max_m = (nt - 1) / 2;
    Eigen::Map<const RowMajor> values(in.data() + grid.offset, nr, nt);
    Matrix modes = values * forward_dft_[g];
    for (int mi = 0; mi < nt; ++mi) {
      const auto m = static_cast<std::size_t>(std::abs(mi - max_m));
      modes.col(mi) = mode_inverses_[g][m].solve(modes.col(mi));
    }
    Eigen::Map<RowMajor> result(out.data() + grid.offset, nr, nt);
    result = modes * inverse_dft_[g];
  }
}

void LippmannSchwinger::apply_potential(const Vector& f, Vector& out) const {
  out.setZero(size());
  for (int g = 0; g < static_cast<int>(grids_.size()); ++g) apply_self(g, f, out);
  for (std::size_t a = 0; a < grids_.size(); ++a) {
    for (std::size_t b = 0; b < grids_.size(); ++b) {
      if (a == b) continue;
      out.segment(grids_[a].offset, grids_[a].size()) += coupling_[a][b] * f.segment(grids_[b].offset, grids_[b].size());
    }
  }
}

void LippmannSchwinger::apply_system(const Vector& u, Vector& out) const {
  const Vector f = contrast_.cast<Complex>().cwiseProduct(u);
  apply_potential(f, out);
  out = u - out;
}

Vector LippmannSchwinger::solve(const Vector& incident, krylov::GmresResult* info) const {
  if (incident.size() != size()) throw ValidationError("incident field size does not match the volume grid");
  if (trivial()) {
    if (info) *info = {0, 0.0, true};
    return incident;
  }
  Vector y = Vector::Zero(size());
  Vector tmp(size());
  const auto result = krylov::gmres(
      [this, &tmp](const Vector& in, Vector& out) {
        apply_preconditioner(in, tmp);
        apply_system(tmp, out);
      },
      incident, y, gmres_);
  Vector x(size());
  apply_preconditioner(y, x);
  if (info) *info = result;
  if (!result.converged) {
    throw ComputeError("Lippmann-Schwinger GMRES did not converge: relative residual " +
                       std::to_string(result.relative_residual) + " after " + std::to_string(result.iterations) +
                       " iterations");
  }
  return x;
}

Matrix LippmannSchwinger::dense_system() const {
  const int n = size();
  Matrix v = Matrix::Zero(n, n);
  for (std::size_t g = 0; g < grids_.size(); ++g) {
    const PolarGrid& grid = grids_[g];
    const int nr = static_cast<int>(grid.radii.size());
    const int nt = grid.n_angular;
    const int max_m = (nt - 1) / 2;
    const auto& ops = modes_[g];
    // The block depends on the angular offset only: circulant in j - p.
    std::vector<double> cosines(static_cast<std::size_t>(nt) * (static_cast<std::size_t>(max_m) + 1));
    for (int delta = 0; delta < nt; ++delta) {
      for (int m = 0; m <= max_m; ++m) {
        cosines[static_cast<std::size_t>(delta) * (max_m + 1) + m] = std::cos(kTwoPi * m * delta / nt);
      }
    }
    for (int i = 0; i < nr; ++i) {
      for (int l = 0; l < nr; ++l) {
        std::vector<Complex> circ(static_cast<std::size_t>(nt));
        for (int delta = 0; delta < nt; ++delta) {
          Complex sum = ops[0](i, l);
          for (int m = 1; m <= max_m; ++m) {
            sum += 2.0 * ops[static_cast<std::size_t>(m)](i, l) * cosines[static_cast<std::size_t>(delta) * (max_m + 1) + m];
          }
          circ[static_cast<std::size_t>(delta)] = sum / static_cast<double>(nt);
        }
        for (int j = 0; j < nt; ++j) {
          for (int p = 0; p < nt; ++p) {
            v(grid.offset + i * nt + j, grid.offset + l * nt + p) = circ[static_cast<std::size_t>((j - p + nt) % nt)];
          }
        }
      }
    }
    for (std::size_t b = 0; b < grids_.size(); ++b) {
      if (b == g) continue;
      v.block(grid.offset, grids_[b].offset, grid.size(), grids_[b].size()) = coupling_[g][b];
    }
  }
  Matrix a = -v * contrast_.cast<Complex>().asDiagonal();
  a.diagonal().array() += 1.0;
  return a;
}

Vector LippmannSchwinger::scattered_at(const Vector& total, std::span<const Point2> points, const Parallelism& par) const {
  if (total.size() != size()) throw ValidationError("total field size does not match the volume grid");
  const Vector f = contrast_.cast<Complex>().cwiseProduct(total);
  for (const auto& x : points) {
    for (const auto& shape : shapes_) {
      if (shape.contains(x)) {
        throw ValidationError("evaluation point lies inside a penetrable obstacle");
      }
    }
  }
  Vector out(static_cast<Eigen::Index>(points.size()));
  parallel_for(static_cast<int>(points.size()), par, [&](int p) {
    Complex sum = 0.0;
    const Point2 x = points[static_cast<std::size_t>(p)];
    for (int q = 0; q < size(); ++q) {
      if (f(q) == 0.0) continue;
      const auto uq = static_cast<std::size_t>(q);
      sum += weights_[uq] * specfun::green(k_, x, nodes_[uq]) * f(q);
    }
    out(p) = sum;
  });
  return out;
}

Matrix LippmannSchwinger::far_field_matrix(std::span<const double> angles) const {
  const Complex gamma = specfun::far_field_constant(k_);
  Matrix out(static_cast<Eigen::Index>(angles.size()), size());
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const Point2 xhat = unit_direction(angles[a]);
    for (int q = 0; q < size(); ++q) {
      const auto uq = static_cast<std::size_t>(q);
      out(static_cast<Eigen::Index>(a), q) =
          gamma * weights_[uq] * contrast_(q) * std::exp(-kI * (k_ * dot(xhat, nodes_[uq])));
    }
  }
  return out;
}

Vector LippmannSchwinger::far_field(const Vector& total, std::span<const double> angles) const {
  if (total.size() != size()) throw ValidationError("total field size does not match the volume grid");
  return far_field_matrix(angles) * total;
}

}  // namespace rtm::volume
