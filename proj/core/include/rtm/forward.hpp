#pragma once

// Forward scattering for sound-soft, impedance (Neumann when eta = 0) and
// penetrable obstacles.
//
// Boundary problems use the combined ansatz u_s = D phi - i k S phi.
//   sound-soft:  (I/2 + K - ikS) phi = -u_i
//   impedance:   T phi + ik(I/2 - K') phi + ik eta (I/2 + K - ikS) phi = -(du_i/dnu + ik eta u_i)
// Penetrable obstacles go through the Lippmann-Schwinger solver, or through the
// exact series when the scene is a single disk.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rtm/disk_series.hpp"
#include "rtm/geometry.hpp"
#include "rtm/krylov.hpp"
#include "rtm/nystrom.hpp"
#include "rtm/parallel.hpp"
#include "rtm/volume.hpp"

namespace rtm::forward {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Dirichlet {};

/// eta >= 0 on the boundary. With `split`, eta_upper applies where x2 lies at or
/// above the curve's reference center and eta_lower below it.
struct Impedance {
  double eta = 0.0;
  bool split = false;
  double eta_upper = 0.0;
  double eta_lower = 0.0;

  double at(const geometry::CurveKind& curve, const Point2& x) const;
};

enum class VolumeMethod { Auto, Series, LippmannSchwinger };

struct Penetrable {
  std::vector<double> index;  // one per curve; a single value applies to every curve
  VolumeMethod method = VolumeMethod::Auto;
  volume::VolumeOptions volume{};

  double index_of(std::size_t curve) const { return index.size() == 1 ? index[0] : index.at(curve); }
};

using Physics = std::variant<Dirichlet, Impedance, Penetrable>;

struct ScattererModel {
  std::vector<geometry::CurveKind> curves;
  Physics physics = Dirichlet{};
  double points_per_wavelength = 10.0;

  void validate() const;
  bool empty() const { return curves.empty(); }
  /// Short physics label: "dirichlet", "impedance" or "penetrable".
  std::string tag() const;
};

/// Reference point used to split an impedance profile into upper and lower parts.
Point2 reference_center(const geometry::CurveKind& curve);

struct IncidentSample {
  Complex value;
  Complex d1;  // gradient components
  Complex d2;
};

/// An incident field: pointwise samples, and optionally regular
/// cylindrical-wave coefficients about a center (used by the disk series).
struct IncidentField {
  std::function<IncidentSample(const Point2&)> sample;
  std::function<std::vector<Complex>(const Point2& center, int max_order)> expansion;
};

/// G(., source).
IncidentField point_source(double k, const Point2& source);
/// Im G(., z) = J0(k|. - z|) / 4.
IncidentField imag_green(double k, const Point2& z);

struct BoundarySolution {
  std::shared_ptr<const nystrom::Boundary> boundary;
  Vector density;
  double k = 0.0;
  double coupling = 0.0;
  double residual = 0.0;  // relative residual of the linear system
};

struct VolumeSolution {
  std::shared_ptr<const volume::LippmannSchwinger> solver;
  Vector total;  // total field at the volume nodes
  krylov::GmresResult info;
};

struct SeriesSolution {
  disk::SeriesField field;
};

struct EmptySolution {
  double k = 0.0;
};

using Solution = std::variant<EmptySolution, BoundarySolution, VolumeSolution, SeriesSolution>;

enum class Method { None, Boundary, Volume, Series };

/// Assembles and factors the discrete operator for one (model, k). solve() is
/// const and may be called concurrently.
class Solver {
 public:
  Solver(ScattererModel model, double k, const Parallelism& par = {});

  const ScattererModel& model() const { return model_; }
  double k() const { return k_; }
  Method method() const { return method_; }
  double coupling() const { return k_; }

  Solution solve(const IncidentField& incident) const;

  // Boundary-method internals, exposed for batched solves and the reference images.
  const std::shared_ptr<const nystrom::Boundary>& boundary() const { return boundary_; }
  const Matrix& system_matrix() const { return system_; }
  const Eigen::PartialPivLU<Matrix>& factorization() const { return lu_; }
  /// Right-hand side of the boundary system for an incident field, with the
  /// same row scaling as system_matrix().
  Vector boundary_rhs(const IncidentField& incident) const;
  /// Impedance values at the boundary nodes (zeros for sound-soft).
  const Eigen::VectorXd& impedance_at_nodes() const { return eta_; }
  /// Matrix giving the boundary trace of the scattered field from the density.
  Matrix trace_matrix() const;

  const std::shared_ptr<const volume::LippmannSchwinger>& volume_solver() const { return volume_; }

 private:
  ScattererModel model_;
  double k_;
  Method method_ = Method::None;
  std::shared_ptr<const nystrom::Boundary> boundary_;
  nystrom::LayerMatrices layers_;
  Matrix system_;
  Eigen::PartialPivLU<Matrix> lu_;
  Eigen::VectorXd eta_;
  Eigen::VectorXd row_scale_;  // impedance rows are equilibrated
  std::shared_ptr<const volume::LippmannSchwinger> volume_;
  disk::Disk disk_{};
};

/// Grading order used for curves carrying a split impedance.
inline constexpr int kSplitGradingOrder = 4;

/// Boundary discretization used for the model at wavenumber k.
nystrom::Boundary discretize(const ScattererModel& model, double k);

BoundarySolution solve_dirichlet(const ScattererModel& model, double k, const Point2& source);
BoundarySolution solve_impedance(const ScattererModel& model, double k, const Point2& source);
Solution solve_penetrable(const ScattererModel& model, double k, const Point2& source);

/// True if x lies inside or on (within `tolerance`) any obstacle.
bool inside_obstacle(const ScattererModel& model, const Point2& x, double tolerance = 1e-9);

Vector scattered_at(const Solution& solution, std::span<const Point2> points, const Parallelism& par = {});
Vector far_field(const Solution& solution, std::span<const double> angles);

/// Scattered field and its outward normal derivative at quadrature parameter
/// `theta` on curve `curve` (see BoundaryCurve::quadrature_parameter), from the
/// boundary representation (nodes not required).
struct BoundaryTrace {
  Complex value;
  Complex normal_derivative;
};
BoundaryTrace boundary_trace(const BoundarySolution& solution, int curve, double theta);

}  // namespace rtm::forward
