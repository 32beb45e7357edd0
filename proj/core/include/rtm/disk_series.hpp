#pragma once

// Separation-of-variables solution for scattering by a single disk. Incident
// fields are given by their regular cylindrical-wave coefficients about the
// disk center: u_i = sum_m c_m J_m(k r) exp(i m theta).

#include <span>
#include <variant>
#include <vector>

#include "rtm/types.hpp"

namespace rtm::disk {

struct SoundSoft {};
struct Impedance {
  double eta = 0.0;
};
struct Transmission {
  double index = 1.0;  // refractive index n inside the disk
};
using Condition = std::variant<SoundSoft, Impedance, Transmission>;

struct Disk {
  double radius = 1.0;
  Point2 center{};
  Condition condition = SoundSoft{};
};

/// Order cutoff M for a disk of radius `radius`; coefficients beyond it are below roundoff.
int truncation_order(double k, double radius);

/// Scattering coefficients a_0..a_M so that a regular wave J_m(kr) e^{im theta}
/// scatters into a_|m| H_m(kr) e^{im theta}.
std::vector<Complex> scattering_coefficients(const Disk& disk, double k, int max_order);

/// Coefficients c_{-M..M} (index m + M) of the point source G(., source) about `center`.
/// Valid inside the circle |x - center| < |source - center|.
std::vector<Complex> point_source_coefficients(double k, const Point2& center, const Point2& source, int max_order);
/// Coefficients of Im G(., z) = J0(k|. - z|)/4 about `center`; valid everywhere.
std::vector<Complex> imag_green_coefficients(double k, const Point2& center, const Point2& z, int max_order);

/// Scattered field as an outgoing expansion u_s = sum_m b_m H_m(k r) e^{im theta}.
class SeriesField {
 public:
  SeriesField() = default;
  SeriesField(const Disk& disk, double k, std::span<const Complex> incident_coefficients);

  double k() const { return k_; }
  int max_order() const { return max_order_; }
  const Disk& disk() const { return disk_; }
  std::span<const Complex> coefficients() const { return outgoing_; }

  /// Field at points with |x - center| >= radius.
  Complex value(const Point2& x) const;
  /// Far-field pattern in direction angle `phi` (same normalization as the layer potentials).
  Complex far_field(double phi) const;
  /// k * int_{S^1} |u_inf|^2, exact for the truncated series.
  double far_field_energy() const;

 private:
  Disk disk_{};
  double k_ = 1.0;
  int max_order_ = 0;
  std::vector<Complex> outgoing_;  // b_{-M..M}
};

}  // namespace rtm::disk
