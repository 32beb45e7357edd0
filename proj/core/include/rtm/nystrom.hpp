#pragma once

// Nystrom discretization of the Helmholtz layer operators on a union of closed
// analytic curves. Self-interaction blocks use Kress's logarithmic product
// quadrature; blocks between distinct curves use the plain trapezoid rule.
//
// Operators are principal values without jump terms:
//   S phi(x)  = int G(x,y) phi(y) ds(y)
//   K phi(x)  = int dG(x,y)/dnu(y) phi(y) ds(y)
//   K' phi(x) = int dG(x,y)/dnu(x) phi(y) ds(y)
//   T phi(x)  = d/dnu(x) int dG(x,y)/dnu(y) phi(y) ds(y)    (Maue form)

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rtm/geometry.hpp"
#include "rtm/parallel.hpp"
#include "rtm/types.hpp"

namespace rtm::nystrom {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Curves with their nodes numbered consecutively.
class Boundary {
 public:
  Boundary() = default;
  explicit Boundary(std::vector<geometry::BoundaryCurve> curves);

  std::span<const geometry::BoundaryCurve> curves() const { return curves_; }
  int curve_count() const { return static_cast<int>(curves_.size()); }
  const geometry::BoundaryCurve& curve(int c) const { return curves_[static_cast<std::size_t>(c)]; }
  int offset(int c) const { return offsets_[static_cast<std::size_t>(c)]; }
  int size() const { return offsets_.back(); }
  bool empty() const { return curves_.empty(); }

  /// Global node index -> (curve, local index).
  std::pair<int, int> locate(int global) const;
  const geometry::CurveNode& node(int global) const;
  /// Trapezoid weight 2 pi / n of the curve owning `global`.
  double weight(int global) const;

 private:
  std::vector<geometry::BoundaryCurve> curves_;
  std::vector<int> offsets_{0};
};

enum OperatorMask : unsigned {
  kSingle = 1u,
  kDouble = 2u,
  kAdjoint = 4u,
  kHypersingular = 8u,
  kAllOperators = 15u,
};

/// Dense operator matrices; unrequested members stay empty.
struct LayerMatrices {
  Matrix single;
  Matrix double_layer;
  Matrix adjoint;
  Matrix hypersingular;
};

LayerMatrices assemble(const Boundary& boundary, double k, unsigned mask, const Parallelism& par = {});

/// Rows of the four operators for a target on curve `curve` at an arbitrary
/// parameter `theta` (need not be a node). Used for off-node residuals.
struct OperatorRows {
  Eigen::RowVectorXcd single;
  Eigen::RowVectorXcd double_layer;
  Eigen::RowVectorXcd adjoint;
  Eigen::RowVectorXcd hypersingular;
  /// Trigonometric interpolation weights of the owning curve's nodes, placed globally.
  Eigen::RowVectorXd interpolation;
};
OperatorRows rows_at(const Boundary& boundary, double k, int curve, double theta);

/// Kress weights R_j(t) for 2n equispaced nodes:
/// int_0^{2pi} ln(4 sin^2((t - s)/2)) f(s) ds ~= sum_j R_j(t) f(t_j).
std::vector<double> log_weights(int n_nodes, double t);
/// Weights for (1/4pi) p.v. int cot((s - t)/2) f'(s) ds ~= sum_j w_j(t) f(t_j).
std::vector<double> cot_weights(int n_nodes, double t);
/// Trigonometric interpolation weights at t.
std::vector<double> interpolation_weights(int n_nodes, double t);
/// Spectral differentiation matrix for 2n equispaced nodes.
Eigen::MatrixXd differentiation_matrix(int n_nodes);

/// Matrix mapping a density to the combined potential at `points`.
Matrix combined_potential_matrix(const Boundary& boundary, double k, double coupling, std::span<const Point2> points,
                                 const Parallelism& par = {});
/// Matrix mapping a density to its far-field pattern at angles.
Matrix combined_far_field_matrix(const Boundary& boundary, double k, double coupling, std::span<const double> angles);

/// Combined potential u = D phi - i coupling S phi at points off the boundary.
Vector combined_potential(const Boundary& boundary, double k, double coupling, const Vector& density,
                          std::span<const Point2> points, const Parallelism& par = {});

/// Far-field pattern of the combined potential in directions given by angles,
/// normalized as u(r xhat) = exp(ikr) / sqrt(r) (u_inf(xhat) + O(1/r)).
Vector combined_far_field(const Boundary& boundary, double k, double coupling, const Vector& density,
                          std::span<const double> angles);

}  // namespace rtm::nystrom
