#pragma once

// Integer-order Bessel and Hankel functions of real argument, and the
// two-dimensional Helmholtz fundamental solution G(x,y) = (i/4) H0(k|x-y|).
//
// J is evaluated by Miller's normalized backward recurrence for x < 25 and by
// the Hankel asymptotic expansion (orders 0,1) plus recurrence above that.
// Y0/Y1 come from Neumann series in the Miller regime; higher orders of Y use
// forward recurrence, which is stable for the dominant solution.
//
// All functions are pure and thread-safe. Invalid input throws std::domain_error.

#include <span>

#include "rtm/types.hpp"

namespace rtm::specfun {

inline constexpr int kMaxOrder = 1000;

double bessel_j(int order, double x);
double bessel_y(int order, double x);
Complex hankel1(int order, double x);

/// J_0..J_max_order at x. `out` must hold at least max_order + 1 values.
void bessel_j_sequence(int max_order, double x, std::span<double> out);
/// Y_0..Y_max_order at x > 0. Entries overflow to -inf for tiny x and large order.
void bessel_y_sequence(int max_order, double x, std::span<double> out);
/// Fills both sequences with one shared Miller pass.
void bessel_jy_sequence(int max_order, double x, std::span<double> j, std::span<double> y);

struct Bessel01 {
  double j0, j1, y0, y1;
};
/// J0, J1, Y0, Y1 together; the hot path for Green kernels.
Bessel01 bessel_jy01(double x);

Complex green(double k, const Point2& x, const Point2& y);

struct GreenGradient {
  Complex d1;
  Complex d2;
};
/// Gradient of G(x,y) with respect to x. The gradient in y is its negative.
GreenGradient green_gradient(double k, const Point2& x, const Point2& y);

/// G(x,y) and grad_x G(x,y) sharing one Bessel evaluation.
struct GreenWithGradient {
  Complex value;
  GreenGradient grad;
};
GreenWithGradient green_with_gradient(double k, const Point2& x, const Point2& y);

/// Im G(x,z) = J0(k|x-z|)/4, regular at x = z.
double green_imag(double k, const Point2& x, const Point2& z);

/// Constant in front of exp(-i k xhat.y) in the far field of G(., y):
/// exp(i pi/4) / sqrt(8 pi k).
Complex far_field_constant(double k);

}  // namespace rtm::specfun
