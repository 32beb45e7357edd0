#pragma once

// Lippmann-Schwinger solver for penetrable obstacles,
//   u = u_i + V[k^2 (n - 1) chi_D u],   V f(x) = int G(x,y) f(y) dy.
//
// Each component lives in a bounding disk discretized by a polar grid
// (Gauss-Legendre in radius, equispaced in angle). Inside a disk the volume
// potential is applied mode by mode through the addition theorem for H0, so
// only a radial kernel with a kink at r' = r has to be integrated. Distinct
// components interact through direct node quadrature and must have disjoint
// bounding disks. For a circular component the disk coincides with the
// obstacle and the scheme converges spectrally.

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rtm/geometry.hpp"
#include "rtm/krylov.hpp"
#include "rtm/parallel.hpp"
#include "rtm/types.hpp"

namespace rtm::volume {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Component {
  geometry::CurveKind shape;
  double index = 1.0;
};

struct VolumeOptions {
  int radial_nodes = 0;   // 0 picks a size from k, n and the disk radius
  int angular_nodes = 0;  // 0 picks a size; always rounded up to odd
  krylov::GmresOptions gmres{};
};

struct PolarGrid {
  Point2 center;
  double radius = 0.0;
  std::vector<double> radii;         // Gauss-Legendre nodes on (0, radius)
  std::vector<double> radial_weights;
  int n_angular = 0;
  int offset = 0;  // first global node index

  int size() const { return static_cast<int>(radii.size()) * n_angular; }
};

/// Gauss-Legendre nodes and weights on (a, b).
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

class LippmannSchwinger {
 public:
  LippmannSchwinger(std::vector<Component> components, double k, const VolumeOptions& options = {});

  double k() const { return k_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  std::span<const PolarGrid> grids() const { return grids_; }
  std::span<const Point2> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// k^2 (n - 1) at each node, zero outside the obstacles.
  const Eigen::VectorXd& contrast() const { return contrast_; }
  bool trivial() const { return contrast_.isZero(0.0); }

  /// out = V f at the grid nodes.
  void apply_potential(const Vector& f, Vector& out) const;
  /// out = u - V[contrast u].
  void apply_system(const Vector& u, Vector& out) const;

  /// Approximate inverse of the system: per angular mode, the exact inverse for
  /// the angular mean of the contrast on each ring. Exact for a disk.
  void apply_preconditioner(const Vector& in, Vector& out) const;

  /// Total field for the given incident values at the nodes (right-preconditioned GMRES).
  Vector solve(const Vector& incident, krylov::GmresResult* info = nullptr) const;
  /// I - V diag(contrast) as a dense matrix.
  Matrix dense_system() const;

  /// Scattered field from the total field at points outside every bounding disk.
  Vector scattered_at(const Vector& total, std::span<const Point2> points, const Parallelism& par = {}) const;
  /// Far-field pattern for angles phi.
  Vector far_field(const Vector& total, std::span<const double> angles) const;
  /// Far-field operator rows exp(-ik xhat.y) * gamma * weight * contrast (angles x nodes).
  Matrix far_field_matrix(std::span<const double> angles) const;

 private:
  void apply_self(int g, const Vector& f, Vector& out) const;

  double k_;
  std::vector<Component> components_;
  krylov::GmresOptions gmres_;
  std::vector<PolarGrid> grids_;
  std::vector<Point2> nodes_;
  std::vector<double> weights_;
  Eigen::VectorXd contrast_;
  // Per grid: radial mode operators for |m| = 0..M, M = (n_angular - 1) / 2.
  std::vector<std::vector<Matrix>> modes_;
  // Dense interaction blocks between distinct grids, indexed [target][source].
  std::vector<std::vector<Matrix>> coupling_;
  // Per grid and |m|: LU of I - K_m diag(mean contrast per ring).
  std::vector<std::vector<Eigen::PartialPivLU<Matrix>>> mode_inverses_;
  // Per grid: forward (node -> mode) and inverse angular DFT matrices.
  std::vector<Matrix> forward_dft_;
  std::vector<Matrix> inverse_dft_;
  std::vector<geometry::BoundaryCurve> shapes_;
};

}  // namespace rtm::volume
