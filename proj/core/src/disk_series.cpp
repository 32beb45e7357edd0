#include "rtm/disk_series.hpp"

#include <cmath>

#include "rtm/errors.hpp"
#include "rtm/specfun.hpp"

namespace rtm::disk {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

struct Sequences {
  std::vector<double> j;
  std::vector<double> y;
};

// J_0..J_{M+1} and Y_0..Y_{M+1} at x.
Sequences sequences(int max_order, double x) {
  Sequences s{std::vector<double>(static_cast<std::size_t>(max_order) + 2),
              std::vector<double>(static_cast<std::size_t>(max_order) + 2)};
  specfun::bessel_jy_sequence(max_order + 1, x, s.j, s.y);
  return s;
}

double derivative(const std::vector<double>& c, int m) {
  if (m == 0) return -c[1];
  return 0.5 * (c[static_cast<std::size_t>(m) - 1] - c[static_cast<std::size_t>(m) + 1]);
}

}  // namespace

int truncation_order(double k, double radius) {
  const double ka = k * radius;
  return static_cast<int>(std::ceil(ka + 6.0 * std::cbrt(ka) + 25.0));
}

std::vector<Complex> scattering_coefficients(const Disk& disk, double k, int max_order) {
  if (!(disk.radius > 0.0)) throw ValidationError("disk radius must be positive");
  if (!(k > 0.0)) throw ValidationError("wavenumber must be positive");
  if (max_order < 0 || max_order + 1 > specfun::kMaxOrder) throw ValidationError("series order out of range");
  const double ka = k * disk.radius;
  const Sequences s = sequences(max_order, ka);
  std::vector<Complex> a(static_cast<std::size_t>(max_order) + 1);

  std::visit(Overloaded{
                 [&](const SoundSoft&) {
                   for (int m = 0; m <= max_order; ++m) {
                     const auto um = static_cast<std::size_t>(m);
                     a[um] = -s.j[um] / Complex(s.j[um], s.y[um]);
                   }
                 },
                 [&](const Impedance& imp) {
                   if (imp.eta < 0.0) throw ValidationError("impedance must be nonnegative");
                   const Complex ike = kI * k * imp.eta;
                   for (int m = 0; m <= max_order; ++m) {
                     const auto um = static_cast<std::size_t>(m);
                     const Complex h(s.j[um], s.y[um]);
                     const Complex dh(derivative(s.j, m), derivative(s.y, m));
                     a[um] = -(k * derivative(s.j, m) + ike * s.j[um]) / (k * dh + ike * h);
                   }
                 },
                 [&](const Transmission& tr) {
                   if (!(tr.index > 0.0)) throw ValidationError("refractive index must be positive");
                   const double k1 = k * std::sqrt(tr.index);
                   const Sequences in = sequences(max_order, k1 * disk.radius);
                   for (int m = 0; m <= max_order; ++m) {
                     const auto um = static_cast<std::size_t>(m);
                     const double j_in = in.j[um];
                     const double dj_in = derivative(in.j, m);
                     const Complex h(s.j[um], s.y[um]);
                     const Complex dh(derivative(s.j, m), derivative(s.y, m));
                     const Complex num = k1 * dj_in * s.j[um] - k * derivative(s.j, m) * j_in;
                     const Complex den = k * dh * j_in - k1 * dj_in * h;
                     a[um] = num / den;
                   }
                 },
             },
             disk.condition);
  for (auto& v : a) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) v = 0.0;
  }
  return a;
}

std::vector<Complex> point_source_coefficients(double k, const Point2& center, const Point2& source, int max_order) {
  const Point2 d = source - center;
  const double rho = norm(d);
  if (rho == 0.0) throw ValidationError("point source at the expansion center");
  const double theta = std::atan2(d.x2, d.x1);
  const Sequences s = sequences(max_order, k * rho);
  std::vector<Complex> c(2 * static_cast<std::size_t>(max_order) + 1);
  for (int m = -max_order; m <= max_order; ++m) {
    const int am = std::abs(m);
    const double sign = m < 0 ? parity(am) : 1.0;
    const Complex h(s.j[static_cast<std::size_t>(am)], s.y[static_cast<std::size_t>(am)]);
    c[static_cast<std::size_t>(m + max_order)] = 0.25 * kI * sign * h * std::exp(-kI * (m * theta));
  }
  return c;
}

std::vector<Complex> imag_green_coefficients(double k, const Point2& center, const Point2& z, int max_order) {
  const Point2 d = z - center;
  const double rho = norm(d);
  const double theta = rho == 0.0 ? 0.0 : std::atan2(d.x2, d.x1);
  std::vector<double> j(static_cast<std::size_t>(max_order) + 1);
  specfun::bessel_j_sequence(max_order, k * rho, j);
  std::vector<Complex> c(2 * static_cast<std::size_t>(max_order) + 1);
  for (int m = -max_order; m <= max_order; ++m) {
    const int am = std::abs(m);
    const double sign = m < 0 ? parity(am) : 1.0;
    c[static_cast<std::size_t>(m + max_order)] = 0.25 * sign * j[static_cast<std::size_t>(am)] * std::exp(-kI * (m * theta));
  }
  return c;
}

SeriesField::SeriesField(const Disk& disk, double k, std::span<const Complex> incident_coefficients)
    : disk_(disk), k_(k) {
  if (incident_coefficients.size() % 2 != 1) throw ValidationError("incident coefficients need 2M+1 entries");
  max_order_ = static_cast<int>(incident_coefficients.size() / 2);
  const std::vector<Complex> a = scattering_coefficients(disk, k, max_order_);
  outgoing_.resize(incident_coefficients.size());
  for (int m = -max_order_; m <= max_order_; ++m) {
    const auto idx = static_cast<std::size_t>(m + max_order_);
    outgoing_[idx] = a[static_cast<std::size_t>(std::abs(m))] * incident_coefficients[idx];
  }
}

Complex SeriesField::value(const Point2& x) const {
  const Point2 d = x - disk_.center;
  const double rho = norm(d);
  if (rho < disk_.radius * (1.0 - 1e-12)) throw ValidationError("series field evaluated inside the disk");
  const double theta = std::atan2(d.x2, d.x1);
  const Sequences s = sequences(max_order_, k_ * rho);
  Complex sum = 0.0;
  for (int m = -max_order_; m <= max_order_; ++m) {
    const int am = std::abs(m);
    const Complex b = outgoing_[static_cast<std::size_t>(m + max_order_)];
    if (b == 0.0) continue;
    const double sign = m < 0 ? parity(am) : 1.0;
    const Complex h(s.j[static_cast<std::size_t>(am)], s.y[static_cast<std::size_t>(am)]);
    const Complex term = b * sign * h * std::exp(kI * (m * theta));
    if (std::isfinite(term.real()) && std::isfinite(term.imag())) sum += term;
  }
  return sum;
}

Complex SeriesField::far_field(double phi) const {
  Complex sum = 0.0;
  Complex minus_i_pow = 1.0;
  // (-i)^m e^{im phi} for m >= 0, and (-i)^{-m} e^{-im phi} = i^m e^{-im phi}.
  for (int m = 0; m <= max_order_; ++m) {
    const Complex phase = std::exp(kI * (m * phi));
    sum += outgoing_[static_cast<std::size_t>(m + max_order_)] * minus_i_pow * phase;
    if (m > 0) sum += outgoing_[static_cast<std::size_t>(max_order_ - m)] * std::conj(minus_i_pow) / phase;
    minus_i_pow *= -kI;
  }
  const Point2 xhat = unit_direction(phi);
  const Complex prefactor = std::sqrt(2.0 / (kPi * k_)) * std::exp(-kI * (kPi / 4.0));
  return prefactor * std::exp(-kI * (k_ * dot(xhat, disk_.center))) * sum;
}

double SeriesField::far_field_energy() const {
  double sum = 0.0;
  for (const auto& b : outgoing_) sum += std::norm(b);
  return 4.0 * sum;
}

}  // namespace rtm::disk
