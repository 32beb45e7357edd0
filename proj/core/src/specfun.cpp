#include "rtm/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtm::specfun {
namespace {

constexpr double kAsymptoticThreshold = 25.0;
constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

void check_order(int order) {
  if (order > kMaxOrder || order < -kMaxOrder) {
    throw std::domain_error("bessel: order " + std::to_string(order) + " exceeds supported maximum " +
                            std::to_string(kMaxOrder));
  }
}

void check_finite(double x, const char* who) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(who) + ": non-finite argument");
  }
}

int miller_start(int max_order, double x) {
  int start = std::max(max_order, static_cast<int>(std::ceil(x))) + 40;
  return start + (start % 2);
}

// Normalized backward recurrence for 0 < x < kAsymptoticThreshold.
// Writes J_0..J_start into j (j.size() >= start + 2) and returns start.
int miller_fill(int max_order, double x, std::span<double> j) {
  const int start = miller_start(max_order, x);
  j[start + 1] = 0.0;
  j[start] = 1.0;
  double sum = 2.0 * j[start];
  for (int n = start; n >= 1; --n) {
    j[n - 1] = (2.0 * n / x) * j[n] - j[n + 1];
    if (std::abs(j[n - 1]) > kRescaleAbove) {
      for (int m = n - 1; m <= start + 1; ++m) j[m] *= kRescaleBy;
      sum *= kRescaleBy;
    }
    if (n - 1 > 0 && (n - 1) % 2 == 0) sum += 2.0 * j[n - 1];
  }
  sum += j[0];
  const double inv = 1.0 / sum;
  for (int m = 0; m <= start; ++m) j[m] *= inv;
  return start;
}

// Neumann series for Y0 and Y1 from a normalized Miller table.
void neumann_y01(double x, std::span<const double> j, int start, double& y0, double& y1) {
  const double log_term = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0;
  double s1 = 0.0;
  double sign = -1.0;
  for (int k = 1; 2 * k + 1 <= start; ++k) {
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
    sign = -sign;
  }
  y0 = (2.0 / kPi) * (log_term * j[0]) - (4.0 / kPi) * s0;
  y1 = (2.0 / kPi) * (log_term * j[1]) - (2.0 / kPi) * j[0] / x + (2.0 / kPi) * s1;
}

// Hankel asymptotic expansion for orders 0 and 1 at large x.
void asymptotic_jy(int nu, double x, double& jv, double& yv) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > prev) break;
    prev = mag;
    // a_k / x^k enters P with sign (-1)^{k/2} for even k and Q with (-1)^{(k-1)/2} for odd k.
    const int r = k % 4;
    if (k % 2 == 0) {
      p += (r == 0) ? term : -term;
    } else {
      q += (r == 1) ? term : -term;
    }
    if (mag < 1e-17 * std::abs(p)) break;
  }
  const double c = std::cos(x);
  const double s = std::sin(x);
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  double cos_chi;
  double sin_chi;
  if (nu == 0) {  // chi = x - pi/4
    cos_chi = (c + s) * kInvSqrt2;
    sin_chi = (s - c) * kInvSqrt2;
  } else {  // chi = x - 3pi/4
    cos_chi = (s - c) * kInvSqrt2;
    sin_chi = -(s + c) * kInvSqrt2;
  }
  const double amp = std::sqrt(2.0 / (kPi * x));
  jv = amp * (p * cos_chi - q * sin_chi);
  yv = amp * (p * sin_chi + q * cos_chi);
}

// J_0..J_max_order for x >= kAsymptoticThreshold: backward recurrence from well
// past the turning point, scaled to match the asymptotic J0 and J1.
void large_x_j(int max_order, double x, std::span<double> out, double j0, double j1) {
  const int start = std::max(max_order, static_cast<int>(std::ceil(x))) + 20 +
                    static_cast<int>(std::ceil(15.0 * std::cbrt(x)));
  std::vector<double> m(start + 2, 0.0);
  m[start] = 1.0;
  for (int n = start; n >= 1; --n) {
    m[n - 1] = (2.0 * n / x) * m[n] - m[n + 1];
    if (std::abs(m[n - 1]) > kRescaleAbove) {
      for (int i = n - 1; i <= start + 1; ++i) m[i] *= kRescaleBy;
    }
  }
  const double big = std::max(std::abs(m[0]), std::abs(m[1]));
  const double m0 = m[0] / big;
  const double m1 = m[1] / big;
  const double scale = (j0 * m0 + j1 * m1) / (m0 * m0 + m1 * m1) / big;
  for (int n = 0; n <= max_order; ++n) out[n] = scale * m[n];
}

void upward_y(int max_order, double x, std::span<double> out, double y0, double y1) {
  out[0] = y0;
  if (max_order == 0) return;
  out[1] = y1;
  for (int n = 1; n < max_order; ++n) out[n + 1] = (2.0 * n / x) * out[n] - out[n - 1];
}

void jy_impl(int max_order, double x, std::span<double> j, std::span<double> y) {
  if (x < kAsymptoticThreshold) {
    std::vector<double> table(miller_start(max_order, x) + 2);
    const int start = miller_fill(max_order, x, table);
    if (!j.empty()) std::copy_n(table.begin(), max_order + 1, j.begin());
    if (!y.empty()) {
      double y0;
      double y1;
      neumann_y01(x, table, start, y0, y1);
      upward_y(max_order, x, y, y0, y1);
    }
    return;
  }
  double j0, y0, j1, y1;
  asymptotic_jy(0, x, j0, y0);
  asymptotic_jy(1, x, j1, y1);
  if (!j.empty()) large_x_j(max_order, x, j, j0, j1);
  if (!y.empty()) upward_y(max_order, x, y, y0, y1);
}

void check_sequence_args(int max_order, std::span<double> out, const char* who) {
  if (max_order < 0) throw std::domain_error(std::string(who) + ": negative max order");
  check_order(max_order);
  if (out.size() < static_cast<std::size_t>(max_order) + 1) {
    throw std::invalid_argument(std::string(who) + ": output span too small");
  }
}

}  // namespace

void bessel_j_sequence(int max_order, double x, std::span<double> out) {
  check_sequence_args(max_order, out, "bessel_j_sequence");
  check_finite(x, "bessel_j_sequence");
  if (x < 0.0) throw std::domain_error("bessel_j_sequence: negative argument");
  if (x == 0.0) {
    std::fill_n(out.begin(), max_order + 1, 0.0);
    out[0] = 1.0;
    return;
  }
  jy_impl(max_order, x, out, {});
}

void bessel_y_sequence(int max_order, double x, std::span<double> out) {
  check_sequence_args(max_order, out, "bessel_y_sequence");
  check_finite(x, "bessel_y_sequence");
  if (x <= 0.0) throw std::domain_error("bessel_y_sequence: argument must be positive");
  jy_impl(max_order, x, {}, out);
}

void bessel_jy_sequence(int max_order, double x, std::span<double> j, std::span<double> y) {
  check_sequence_args(max_order, j, "bessel_jy_sequence");
  check_sequence_args(max_order, y, "bessel_jy_sequence");
  check_finite(x, "bessel_jy_sequence");
  if (x <= 0.0) throw std::domain_error("bessel_jy_sequence: argument must be positive");
  jy_impl(max_order, x, j, y);
}

double bessel_j(int order, double x) {
  check_order(order);
  const int n = std::abs(order);
  std::vector<double> seq(n + 1);
  bessel_j_sequence(n, x, seq);
  const double v = seq[n];
  return (order < 0 && (n % 2) == 1) ? -v : v;
}

double bessel_y(int order, double x) {
  check_order(order);
  const int n = std::abs(order);
  std::vector<double> seq(n + 1);
  bessel_y_sequence(n, x, seq);
  const double v = seq[n];
  return (order < 0 && (n % 2) == 1) ? -v : v;
}

Complex hankel1(int order, double x) {
  check_order(order);
  check_finite(x, "hankel1");
  if (x <= 0.0) throw std::domain_error("hankel1: argument must be positive");
  const int n = std::abs(order);
  std::vector<double> j(n + 1);
  std::vector<double> y(n + 1);
  jy_impl(n, x, j, y);
  const Complex h{j[n], y[n]};
  return (order < 0 && (n % 2) == 1) ? -h : h;
}

Bessel01 bessel_jy01(double x) {
  check_finite(x, "bessel_jy01");
  if (x <= 0.0) throw std::domain_error("bessel_jy01: argument must be positive");
  Bessel01 r{};
  if (x < kAsymptoticThreshold) {
    std::array<double, 72> table{};
    const int start = miller_fill(1, x, table);
    r.j0 = table[0];
    r.j1 = table[1];
    neumann_y01(x, table, start, r.y0, r.y1);
  } else {
    asymptotic_jy(0, x, r.j0, r.y0);
    asymptotic_jy(1, x, r.j1, r.y1);
  }
  return r;
}

Complex green(double k, const Point2& x, const Point2& y) {
  if (!(k > 0.0)) throw std::domain_error("green: wavenumber must be positive");
  const double r = distance(x, y);
  if (r == 0.0) throw std::domain_error("green: coincident points");
  const Bessel01 b = bessel_jy01(k * r);
  return {-0.25 * b.y0, 0.25 * b.j0};
}

GreenWithGradient green_with_gradient(double k, const Point2& x, const Point2& y) {
  if (!(k > 0.0)) throw std::domain_error("green_gradient: wavenumber must be positive");
  const Point2 d = x - y;
  const double r = norm(d);
  if (r == 0.0) throw std::domain_error("green_gradient: coincident points");
  const Bessel01 b = bessel_jy01(k * r);
  // -(ik/4) H1(kr) / r
  const Complex factor = Complex{0.0, -0.25 * k} * Complex{b.j1, b.y1} / r;
  return {{-0.25 * b.y0, 0.25 * b.j0}, {factor * d.x1, factor * d.x2}};
}

GreenGradient green_gradient(double k, const Point2& x, const Point2& y) {
  return green_with_gradient(k, x, y).grad;
}

double green_imag(double k, const Point2& x, const Point2& z) {
  const double r = distance(x, z);
  if (r == 0.0) return 0.25;
  return 0.25 * bessel_jy01(k * r).j0;
}

Complex far_field_constant(double k) {
  return std::exp(Complex{0.0, 0.25 * kPi}) / std::sqrt(8.0 * kPi * k);
}

}  // namespace rtm::specfun
