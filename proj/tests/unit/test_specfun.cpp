#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles/series.hpp"
#include "rtm/specfun.hpp"

using namespace rtm;
namespace sf = rtm::specfun;

TEST_CASE("bessel values at the origin") {
  CHECK(sf::bessel_j(0, 0.0) == 1.0);
  CHECK(sf::bessel_j(1, 0.0) == 0.0);
  CHECK(sf::bessel_j(7, 0.0) == 0.0);
}

TEST_CASE("bessel J0 and Y0 at 1 match the power series") {
  const double j0 = static_cast<double>(oracle::j_series(0, 1.0L, 30));
  const double y0 = static_cast<double>(oracle::y0_series(1.0L));
  CHECK(j0 == doctest::Approx(0.76519768655796655).epsilon(1e-16));
  CHECK(y0 == doctest::Approx(0.08825696421567696).epsilon(1e-14));
  CHECK(std::abs(sf::bessel_j(0, 1.0) - j0) < 1e-15);
  CHECK(std::abs(sf::bessel_y(0, 1.0) - y0) < 1e-15);
}

TEST_CASE("bessel J matches the series on [0, 12] for orders up to 30") {
  double worst = 0.0;
  for (int n = 0; n <= 30; ++n) {
    for (double x = 0.0; x <= 12.0; x += 0.37) {
      worst = std::max(worst, std::abs(sf::bessel_j(n, x) - static_cast<double>(oracle::j_series(n, x, 90))));
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("bessel J and Y against the standard library up to x = 200") {
  double worst_j = 0.0;
  double worst_y = 0.0;
  for (int n : {0, 1, 2, 5, 10, 30, 60, 100}) {
    for (double x = 0.05; x <= 200.0; x *= 1.13) {
      worst_j = std::max(worst_j, std::abs(sf::bessel_j(n, x) - std::cyl_bessel_j(double(n), x)));
      const double y_ref = std::cyl_neumann(double(n), x);
      if (std::abs(y_ref) < 1e3) worst_y = std::max(worst_y, std::abs(sf::bessel_y(n, x) - y_ref));
    }
  }
  CHECK(worst_j < 1e-12);
  CHECK(worst_y < 1e-12);
}

TEST_CASE("bessel Y0 absolute accuracy near zero and log singularity") {
  for (double x : {1e-8, 1e-6, 1e-3, 0.1}) {
    CHECK(std::abs(sf::bessel_y(0, x) - static_cast<double>(oracle::y0_series(x))) < 1e-12);
  }
  const double a = sf::bessel_y(0, 1e-8);
  const double b = sf::bessel_y(0, 1e-10);
  CHECK(b < a);
  CHECK((b - a) == doctest::Approx(2.0 / kPi * std::log(1e-2)).epsilon(1e-6));
}

TEST_CASE("wronskian on [0.1, 100] for orders 0..20") {
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n) {
    for (double x = 0.1; x <= 100.0; x *= 1.07) {
      // J_n Y_n' - J_n' Y_n = J_{n+1} Y_n - J_n Y_{n+1}
      const double w = sf::bessel_j(n + 1, x) * sf::bessel_y(n, x) - sf::bessel_j(n, x) * sf::bessel_y(n + 1, x);
      worst = std::max(worst, std::abs(w / (2.0 / (kPi * x)) - 1.0));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("three-term recurrence holds for J and Y") {
  double worst = 0.0;
  for (int n = 1; n <= 25; ++n) {
    for (double x : {0.7, 3.0, 9.5, 17.0, 48.0, 120.0}) {
      const double jl = sf::bessel_j(n - 1, x) + sf::bessel_j(n + 1, x);
      const double jr = 2.0 * n / x * sf::bessel_j(n, x);
      const double yl = sf::bessel_y(n - 1, x) + sf::bessel_y(n + 1, x);
      const double yr = 2.0 * n / x * sf::bessel_y(n, x);
      worst = std::max(worst, std::abs(jl - jr) / std::max({std::abs(jr), std::abs(sf::bessel_j(n, x)), 1e-300}));
      worst = std::max(worst, std::abs(yl - yr) / std::max(std::abs(yr), 1e-300));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("sequences agree with single evaluations") {
  std::vector<double> j(41);
  std::vector<double> y(41);
  for (double x : {0.3, 5.0, 30.0, 150.0}) {
    sf::bessel_jy_sequence(40, x, j, y);
    for (int n = 0; n <= 40; ++n) {
      CHECK(j[n] == doctest::Approx(sf::bessel_j(n, x)).epsilon(1e-12).scale(1e-14));
      if (std::isfinite(y[n]) && std::abs(y[n]) < 1e100) CHECK(y[n] == doctest::Approx(sf::bessel_y(n, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("hankel function") {
  const Complex h = sf::hankel1(0, 1.0);
  CHECK(h.real() == doctest::Approx(0.7651976866).epsilon(1e-10));
  CHECK(h.imag() == doctest::Approx(0.0882569642).epsilon(1e-9));
  const Complex h2 = sf::hankel1(0, 2.0);
  CHECK(h2.real() == sf::bessel_j(0, 2.0));
  CHECK(h2.imag() == sf::bessel_y(0, 2.0));
  CHECK(std::abs(std::abs(sf::hankel1(0, 100.0)) / std::sqrt(2.0 / (kPi * 100.0)) - 1.0) <= 2e-3);
  const double x = 1e-6;
  CHECK(sf::hankel1(1, x).imag() == doctest::Approx(-2.0 / (kPi * x)).epsilon(1e-9));
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(sf::bessel_j(0, -1.0), std::domain_error);
  CHECK(sf::bessel_j(-3, 1.7) == -sf::bessel_j(3, 1.7));
  CHECK(sf::bessel_y(-2, 1.7) == sf::bessel_y(2, 1.7));
  CHECK_THROWS_AS(sf::bessel_j(sf::kMaxOrder + 1, 1.0), std::domain_error);
  CHECK_THROWS_AS(sf::bessel_y(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(sf::bessel_y(0, -2.0), std::domain_error);
  CHECK_THROWS_AS(sf::green(1.0, {1.0, 1.0}, {1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(sf::green_gradient(1.0, {1.0, 1.0}, {1.0, 1.0}), std::domain_error);
}

TEST_CASE("green function values") {
  const Complex g = sf::green(1.0, {0.0, 0.0}, {1.0, 0.0});
  const double j0 = static_cast<double>(oracle::j_series(0, 1.0L));
  const double y0 = static_cast<double>(oracle::y0_series(1.0L));
  CHECK(g.real() == doctest::Approx(-y0 / 4.0).epsilon(1e-14));
  CHECK(g.imag() == doctest::Approx(j0 / 4.0).epsilon(1e-14));
  CHECK(g.real() == doctest::Approx(-0.0220642411).epsilon(1e-9));
  CHECK(g.imag() == doctest::Approx(0.1912994216).epsilon(1e-9));
  CHECK(sf::green(kTwoPi, {0.0, 0.0}, {1e-9, 0.0}).imag() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sf::green_imag(kTwoPi, {0.3, 0.3}, {0.3, 0.3}) == 0.25);
}

TEST_CASE("green function symmetry for random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const Point2 x{u(rng), u(rng)};
    const Point2 y{u(rng), u(rng)};
    CHECK(sf::green(3.0, x, y) == sf::green(3.0, y, x));
  }
}

TEST_CASE("green gradient: finite differences and antisymmetry") {
  const double k = kTwoPi;
  const Point2 y{0.2, -0.4};
  const Point2 x = y + Point2{1.2, 0.9};  // |x - y| = 1.5
  const auto g = sf::green_gradient(k, x, y);
  const double h = 1e-6;
  const Complex d1 = (sf::green(k, x + Point2{h, 0}, y) - sf::green(k, x - Point2{h, 0}, y)) / (2 * h);
  const Complex d2 = (sf::green(k, x + Point2{0, h}, y) - sf::green(k, x - Point2{0, h}, y)) / (2 * h);
  CHECK(std::abs(d1 - g.d1) / std::abs(g.d1) < 1e-6);
  CHECK(std::abs(d2 - g.d2) / std::abs(g.d2) < 1e-6);
  const auto gy = sf::green_gradient(k, y, x);
  CHECK(std::abs(gy.d1 + g.d1) < 1e-15);
  CHECK(std::abs(gy.d2 + g.d2) < 1e-15);
  const auto both = sf::green_with_gradient(k, x, y);
  CHECK(both.value == sf::green(k, x, y));
  CHECK(both.grad.d1 == g.d1);
}

TEST_CASE("green function radiation condition") {
  const double k = kTwoPi;
  const Point2 y{0.5, -0.25};
  const Point2 dir = unit_direction(0.7);
  const auto sommerfeld = [&](double r) {
    const Point2 x = r * dir;
    const auto gg = sf::green_with_gradient(k, x, y);
    const Complex dr = gg.grad.d1 * dir.x1 + gg.grad.d2 * dir.x2;
    return std::abs(dr - kI * k * gg.value);
  };
  CHECK(sommerfeld(1e4) < 1e-5);
  const double a = std::sqrt(10.0) * sommerfeld(10.0);
  const double b = std::sqrt(100.0) * sommerfeld(100.0);
  const double c = std::sqrt(1000.0) * sommerfeld(1000.0);
  CHECK(b < a);
  CHECK(c < b);
}

TEST_CASE("far field constant") {
  const double k = 3.0;
  const Complex c = sf::far_field_constant(k);
  CHECK(std::abs(c - std::exp(kI * kPi / 4.0) / std::sqrt(8.0 * kPi * k)) < 1e-16);
  // G(r xhat, 0) sqrt(r) exp(-ikr) -> c
  const double r = 1e6;
  const Complex g = sf::green(k, {r, 0.0}, {0.0, 0.0}) * std::sqrt(r) * std::exp(-kI * k * r);
  CHECK(std::abs(g - c) < 1e-6);
}
