#pragma once

// Disk scattering by separation of variables, built on libstdc++'s Bessel
// functions so it shares no code with the library. Disk centered at the origin.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

inline double jn(int m, double x) { return std::cyl_bessel_j(static_cast<double>(m), x); }
inline double yn(int m, double x) { return std::cyl_neumann(static_cast<double>(m), x); }
inline cplx hn(int m, double x) { return {jn(m, x), yn(m, x)}; }
inline double jn_prime(int m, double x) { return m == 0 ? -jn(1, x) : 0.5 * (jn(m - 1, x) - jn(m + 1, x)); }
inline cplx hn_prime(int m, double x) { return m == 0 ? -hn(1, x) : 0.5 * (hn(m - 1, x) - hn(m + 1, x)); }

inline int order_cutoff(double ka) { return static_cast<int>(ka + 8.0 * std::cbrt(ka) + 30.0); }

/// a_m for |m| = 0..M.
inline std::vector<cplx> sound_soft(double k, double a, int M) {
  std::vector<cplx> c(M + 1);
  for (int m = 0; m <= M; ++m) c[m] = -jn(m, k * a) / hn(m, k * a);
  return c;
}

inline std::vector<cplx> impedance(double k, double a, double eta, int M) {
  std::vector<cplx> c(M + 1);
  const cplx ike = cplx(0, 1) * k * eta;
  for (int m = 0; m <= M; ++m) {
    c[m] = -(k * jn_prime(m, k * a) + ike * jn(m, k * a)) / (k * hn_prime(m, k * a) + ike * hn(m, k * a));
  }
  return c;
}

inline std::vector<cplx> transmission(double k, double a, double n, int M) {
  const double k1 = k * std::sqrt(n);
  std::vector<cplx> c(M + 1);
  for (int m = 0; m <= M; ++m) {
    const cplx num = k1 * jn_prime(m, k1 * a) * jn(m, k * a) - k * jn_prime(m, k * a) * jn(m, k1 * a);
    const cplx den = k * hn_prime(m, k * a) * jn(m, k1 * a) - k1 * jn_prime(m, k1 * a) * hn(m, k * a);
    c[m] = num / den;
  }
  return c;
}

/// Scattered field at x for the point source G(., xs):
/// (i/4) sum_m a_m H_m(k|xs|) H_m(k|x|) exp(i m (theta - theta_s)).
inline cplx point_source_field(const std::vector<cplx>& a, double k, double xs1, double xs2, double x1, double x2) {
  const double rs = std::hypot(xs1, xs2);
  const double r = std::hypot(x1, x2);
  const double dth = std::atan2(x2, x1) - std::atan2(xs2, xs1);
  cplx sum = a[0] * hn(0, k * rs) * hn(0, k * r);
  for (int m = 1; m < static_cast<int>(a.size()); ++m) {
    const cplx t = a[m] * hn(m, k * rs) * hn(m, k * r);
    if (std::isfinite(t.real()) && std::isfinite(t.imag())) sum += 2.0 * t * std::cos(m * dth);
  }
  return cplx(0, 0.25) * sum;
}

/// Far field of the same, normalized as u ~ exp(ikr)/sqrt(r) u_inf.
inline cplx point_source_far_field(const std::vector<cplx>& a, double k, double xs1, double xs2, double phi) {
  const double rs = std::hypot(xs1, xs2);
  const double dth = phi - std::atan2(xs2, xs1);
  cplx sum = a[0] * hn(0, k * rs);
  for (int m = 1; m < static_cast<int>(a.size()); ++m) {
    // H_m(kr) ~ sqrt(2/(pi k r)) exp(i(kr - m pi/2 - pi/4))
    sum += 2.0 * a[m] * hn(m, k * rs) * std::pow(cplx(0, -1), m) * std::cos(m * dth);
  }
  return cplx(0, 0.25) * std::sqrt(2.0 / (pi * k)) * std::exp(cplx(0, -pi / 4)) * sum;
}

/// Closed form of k int |psi_inf|^2 for the scattered field of J0(k|x - z|)/4.
inline double far_field_energy_imag_green(const std::vector<cplx>& a, double k, double rz) {
  double sum = std::norm(a[0]) * std::pow(jn(0, k * rz), 2);
  for (int m = 1; m < static_cast<int>(a.size()); ++m) sum += 2.0 * std::norm(a[m]) * std::pow(jn(m, k * rz), 2);
  return 0.25 * sum;
}

/// Boundary term k int eta |psi + Im G|^2 ds on the impedance disk of radius a.
inline double impedance_boundary_term(const std::vector<cplx>& a, double k, double radius, double eta, double rz) {
  double sum = 0.0;
  for (int m = 0; m < static_cast<int>(a.size()); ++m) {
    const cplx total = jn(m, k * radius) + a[m] * hn(m, k * radius);
    const double term = std::norm(total) * std::pow(jn(m, k * rz), 2);
    sum += (m == 0 ? 1.0 : 2.0) * term;
  }
  // |c_m|^2 = J_m(k rz)^2 / 16, angular integral 2 pi radius.
  return k * eta * 2.0 * pi * radius * sum / 16.0;
}

}  // namespace oracle
