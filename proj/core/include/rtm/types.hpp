#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace rtm {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr Complex kI{0.0, 1.0};

/// Point or vector in the plane.
struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Point2& operator+=(const Point2& o) {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  constexpr Point2& operator-=(const Point2& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  friend constexpr Point2 operator+(Point2 a, const Point2& b) { return a += b; }
  friend constexpr Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
  friend constexpr Point2 operator*(double s, const Point2& a) { return {s * a.x1, s * a.x2}; }
  friend constexpr Point2 operator*(const Point2& a, double s) { return {s * a.x1, s * a.x2}; }
  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

constexpr double dot(const Point2& a, const Point2& b) { return a.x1 * b.x1 + a.x2 * b.x2; }
constexpr double cross(const Point2& a, const Point2& b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(const Point2& a) { return std::hypot(a.x1, a.x2); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

/// Rotation by +90 degrees reversed: for a counterclockwise tangent this is the outward normal.
constexpr Point2 right_normal(const Point2& t) { return {t.x2, -t.x1}; }

inline Point2 unit_direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace rtm
