#pragma once

// Resolution-analysis oracles: the noise-free limit images predicted for each
// obstacle class, and numerically checkable Helmholtz-Kirchhoff and energy
// identities.
//
// For a sampling point z let psi be the field radiated by the obstacle under
// the incident field Im G(., z) = J0(k|. - z|)/4. The limit images are
//   sound-soft, penetrable:  k int_{S^1} |psi_inf|^2
//   impedance:               k int_{S^1} |psi_inf|^2 + k int_{dD} eta |psi + Im G|^2 ds

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rtm/forward.hpp"
#include "rtm/geometry.hpp"
#include "rtm/imaging.hpp"
#include "rtm/parallel.hpp"

namespace rtm::reference {

enum class Theorem { Penetrable, Impedance, SoundSoft };

Theorem theorem_for(const forward::ScattererModel& model);

struct ReferenceOptions {
  int far_field_nodes = 0;  // 0: max(64, 10 k diam(D)), rounded up to even
  Parallelism par{};
};

int default_far_field_nodes(const forward::ScattererModel& model, double k);

struct TheoremImage {
  geometry::SamplingGrid grid;
  Eigen::MatrixXd values;
  Theorem theorem = Theorem::SoundSoft;
  int far_field_nodes = 0;
  double k = 0.0;

  imaging::Image as_image() const;
};

/// Limit-image values at arbitrary points (not inside an obstacle for the
/// boundary classes). One factorization serves every point.
std::vector<double> theorem_values(const forward::ScattererModel& model, double k, std::span<const Point2> points,
                                   const ReferenceOptions& options = {});

TheoremImage theorem_image(const forward::ScattererModel& model, const geometry::SamplingGrid& grid, double k,
                           const ReferenceOptions& options = {});
TheoremImage theorem_image_sound_soft(const forward::ScattererModel& model, const geometry::SamplingGrid& grid,
                                      double k, const ReferenceOptions& options = {});
TheoremImage theorem_image_impedance(const forward::ScattererModel& model, const geometry::SamplingGrid& grid,
                                     double k, const ReferenceOptions& options = {});
TheoremImage theorem_image_penetrable(const forward::ScattererModel& model, const geometry::SamplingGrid& grid,
                                      double k, const ReferenceOptions& options = {});

enum class Identity { HkBoundary, HkCircleSource, HkCircleReceiver, HkCircleGradient, Energy };

struct IdentityReport {
  Identity identity = Identity::HkBoundary;
  double residual = 0.0;
  double relative_residual = 0.0;
  Complex lhs{};
  Complex rhs{};
  double radius = 0.0;  // transducer circle radius, when applicable
  int nodes = 0;
};

/// Quadrature controls for the Helmholtz-Kirchhoff checks. `green_scale`
/// multiplies every Green function inside the integrals; values other than 1
/// exist only to confirm that the checks detect a wrong kernel.
struct HkOptions {
  int nodes = 0;  // 0: twice the ten-points-per-wavelength count
  double green_scale = 1.0;
};

/// int_{dD} (conj G(xi,x) dG(xi,y)/dnu - conj dG(xi,x)/dnu G(xi,y)) ds = 2i Im G(x,y), x, y inside.
IdentityReport check_hk_boundary(const geometry::CurveKind& curve, double k, const Point2& x, const Point2& y,
                                 const HkOptions& options = {});

/// k int_{|xs|=R} conj G(x,xs) G(xs,z) ds = Im G(x,z) + O(1/R).
IdentityReport check_hk_circle(double radius, double k, int n_nodes, const Point2& x, const Point2& z,
                               const HkOptions& options = {});
/// Same identity differentiated in x: central differences with step h against grad_x Im G.
IdentityReport check_hk_circle_gradient(double radius, double k, int n_nodes, const Point2& x, const Point2& z,
                                        double h = 1e-5, const HkOptions& options = {});

/// For a sound-soft model and w the field scattered from G(., source):
/// -Im int_{dD} w d(conj w)/dnu ds against k int_{S^1} |w_inf|^2.
/// lhs holds the boundary flux, rhs the far-field energy.
IdentityReport check_energy_identity(const forward::ScattererModel& model, double k, const Point2& source,
                                     int far_field_nodes = 0);

}  // namespace rtm::reference
