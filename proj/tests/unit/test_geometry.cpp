#include <doctest.h>

#include <cmath>

#include "rtm/errors.hpp"
#include "rtm/geometry.hpp"

using namespace rtm;
using namespace rtm::geometry;

TEST_CASE("circle nodes") {
  const BoundaryCurve c(Circle{2.0, {}}, 64);
  const auto& n0 = c.node(0);
  CHECK(n0.point.x1 == doctest::Approx(2.0));
  CHECK(std::abs(n0.point.x2) < 1e-15);
  CHECK(std::abs(n0.tangent.x1) < 1e-15);
  CHECK(n0.tangent.x2 == doctest::Approx(2.0));
  CHECK(n0.normal.x1 == doctest::Approx(1.0));
  CHECK(n0.jacobian == doctest::Approx(2.0));
  CHECK(c.node(16).theta == doctest::Approx(kPi / 2));
}

TEST_CASE("kite and p-leaf reference points") {
  const BoundaryCurve kite(Kite{}, 32);
  CHECK(kite.node(0).point.x1 == doctest::Approx(1.0));
  CHECK(std::abs(kite.node(0).point.x2) < 1e-15);
  const BoundaryCurve leaf(PLeaf{8, {}, 1.0}, 32);
  CHECK(leaf.node(0).point.x1 == doctest::Approx(1.2));
  CHECK(std::abs(leaf.node(0).point.x2) < 1e-15);
  const BoundaryCurve shifted(Kite{{-4.0, 3.0}, 2.0}, 32);
  CHECK(shifted.node(0).point.x1 == doctest::Approx(-2.0));
  CHECK(shifted.node(0).point.x2 == doctest::Approx(3.0));
}

TEST_CASE("derivatives match finite differences for every family") {
  for (const CurveKind& kind : {CurveKind{Circle{1.5, {0.3, 0.2}}}, CurveKind{Kite{{1, -1}, 1.7}},
                                CurveKind{PLeaf{5, {0.5, 0.5}, 0.8}}}) {
    for (double t : {0.1, 1.3, 2.9, 4.4, 6.0}) {
      const double h = 1e-5;
      const CurveSample s = evaluate(kind, t);
      const CurveSample a = evaluate(kind, t + h);
      const CurveSample b = evaluate(kind, t - h);
      CHECK(std::abs((a.point.x1 - b.point.x1) / (2 * h) - s.d1.x1) < 1e-8);
      CHECK(std::abs((a.point.x2 - b.point.x2) / (2 * h) - s.d1.x2) < 1e-8);
      CHECK(std::abs((a.d1.x1 - b.d1.x1) / (2 * h) - s.d2.x1) < 1e-7);
      CHECK(std::abs((a.d1.x2 - b.d1.x2) / (2 * h) - s.d2.x2) < 1e-7);
    }
  }
}

TEST_CASE("normals are unit, orthogonal to tangents and outward") {
  for (const CurveKind& kind : {CurveKind{Circle{2.0, {1.0, -1.0}}}, CurveKind{Kite{{0, 0}, 2.0}},
                                CurveKind{PLeaf{8, {4.0, -3.0}, 2.0}}}) {
    const BoundaryCurve c(kind, 128);
    const Point2 centroid = c.centroid();
    for (const auto& n : c.nodes()) {
      CHECK(std::abs(norm(n.normal) - 1.0) < 1e-14);
      CHECK(std::abs(dot(n.normal, n.tangent)) < 1e-13);
      CHECK(n.jacobian > 0.0);
      CHECK(c.contains(n.point + 1e-3 * n.normal) == false);
      CHECK(c.contains(n.point - 1e-3 * n.normal) == true);
    }
    if (std::holds_alternative<Circle>(kind)) {
      for (const auto& n : c.nodes()) CHECK(dot(n.normal, n.point - centroid) > 0.0);
    }
  }
}

TEST_CASE("circle arclength is exact for every even node count") {
  for (int n = 16; n <= 200; n += 14) {
    CHECK(std::abs(BoundaryCurve(Circle{3.0, {}}, n).arclength() - 6.0 * kPi) < 1e-12);
  }
  CHECK(arclength(Circle{2.0, {}}) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
}

TEST_CASE("node sets nest under doubling") {
  const BoundaryCurve a(Kite{{0.5, 0.0}, 1.3}, 40);
  const BoundaryCurve b = a.resampled(80);
  for (int j = 0; j < 40; ++j) {
    CHECK(a.node(j).point == b.node(2 * j).point);
    CHECK(a.node(j).normal == b.node(2 * j).normal);
  }
}

TEST_CASE("points per wavelength") {
  CHECK(points_per_wavelength(Circle{2.0, {}}, kTwoPi) == 126);
  CHECK(points_per_wavelength(Circle{2.0, {}}, kTwoPi / 0.25) == 504);
  CHECK(points_per_wavelength(Circle{2.0, {}}, 1e-3) == 16);
  CHECK(points_per_wavelength(Circle{2.0, {}}, kTwoPi, 20.0) == 252);
  const int n = points_per_wavelength(Kite{}, kTwoPi);
  CHECK(n % 2 == 0);
  CHECK(arclength(Kite{}) / n <= 0.1);
  CHECK(arclength(Kite{}) / (n - 2) > 0.1);
}

TEST_CASE("invalid curves are rejected") {
  CHECK_THROWS_AS(BoundaryCurve(Circle{0.0, {}}, 32), ValidationError);
  CHECK_THROWS_AS(BoundaryCurve(Circle{1.0, {}}, 33), ValidationError);
  CHECK_THROWS_AS(BoundaryCurve(Circle{1.0, {}}, 8), ValidationError);
  CHECK_THROWS_AS(BoundaryCurve(PLeaf{0, {}, 1.0}, 32), ValidationError);
  CHECK_THROWS_AS(BoundaryCurve(Kite{{}, -1.0}, 32), ValidationError);
}

TEST_CASE("acquisition geometry") {
  const AcquisitionGeometry acq{10.0, 12.0, 64, 32, {1.0, 0.0}};
  CHECK_NOTHROW(acq.validate());
  // x_s for s = 1 sits at angle 2 pi / Ns
  const Point2 s0 = acq.source(0);
  CHECK(s0.x1 == doctest::Approx(1.0 + 10.0 * std::cos(kTwoPi / 64)));
  CHECK(s0.x2 == doctest::Approx(10.0 * std::sin(kTwoPi / 64)));
  const Point2 last = acq.receiver(31);
  CHECK(last.x1 == doctest::Approx(13.0));
  CHECK(std::abs(last.x2) < 1e-12);
  CHECK(acq.sources().size() == 64);
  CHECK(acq.source_weight() == doctest::Approx(kTwoPi * 10.0 / 64));
  CHECK_FALSE(acq.coincident());
  CHECK(AcquisitionGeometry{10.0, 10.0, 64, 64, {}}.coincident());
  CHECK_THROWS_AS((AcquisitionGeometry{-1.0, 10.0, 64, 64, {}}.validate()), ValidationError);
  CHECK_THROWS_AS((AcquisitionGeometry{10.0, 10.0, 0, 64, {}}.validate()), ValidationError);
}

TEST_CASE("sampling grid") {
  const SamplingGrid g{-3.0, 3.0, -2.0, 2.0, 7, 5};
  CHECK_NOTHROW(g.validate());
  CHECK(g.node(0, 0) == Point2{-3.0, -2.0});
  CHECK(g.node(6, 4).x1 == doctest::Approx(3.0));
  CHECK(g.node(6, 4).x2 == doctest::Approx(2.0));
  CHECK(g.spacing1() == doctest::Approx(1.0));
  CHECK(g.index(1, 2) == 7);
  CHECK_THROWS_AS((SamplingGrid{0.0, 1.0, 0.0, 1.0, 1, 5}.validate()), ValidationError);
  CHECK_THROWS_AS((SamplingGrid{1.0, 0.0, 0.0, 1.0, 5, 5}.validate()), ValidationError);
}

TEST_CASE("diameter and containment helpers") {
  const std::vector<BoundaryCurve> two{BoundaryCurve(Circle{1.0, {-3.0, 0.0}}, 64),
                                      BoundaryCurve(Circle{1.0, {3.0, 0.0}}, 64)};
  CHECK(diameter(two) == doctest::Approx(8.0).epsilon(1e-3));
  const BoundaryCurve c(Circle{2.0, {}}, 64);
  CHECK(c.contains({0.0, 0.0}));
  CHECK_FALSE(c.contains({2.5, 0.0}));
  CHECK(c.distance_to({3.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(c.max_distance_from({0.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("graded curves") {
  const CurveKind kite = Kite{{0.5, -0.5}, 2.0};
  const BoundaryCurve g(kite, 96, 4);
  CHECK(g.grading_order() == 4);
  SUBCASE("nodes avoid the flat points and keep positive jacobians") {
    for (const auto& n : g.nodes()) {
      CHECK(n.jacobian > 0.0);
      CHECK(std::abs(n.point.x2 - (-0.5)) > 1e-6);
      CHECK(std::abs(norm(n.normal) - 1.0) < 1e-14);
    }
  }
  SUBCASE("map is monotone, periodic and flat at 0 and pi") {
    double prev = -1.0;
    for (int i = 0; i < 400; ++i) {
      const double s = kTwoPi * i / 400;
      const double t = g.geometric_parameter(s + kPi / 96);
      if (i > 0) CHECK(t > prev);
      prev = t;
    }
    const double h = 1e-3;
    const double s0 = kPi / 96;  // maps to theta = 0
    CHECK(std::abs(g.geometric_parameter(s0)) < 1e-12);
    CHECK(std::abs(g.geometric_parameter(s0 + kPi) - kPi) < 1e-12);
    CHECK(std::abs(g.geometric_parameter(s0 + h) - g.geometric_parameter(s0)) < 1e-6);
  }
  SUBCASE("derivatives match finite differences") {
    for (double s : {0.3, 1.1, 2.0, 3.5, 5.9}) {
      const double h = 1e-5;
      const auto c = g.evaluate(s);
      const auto a = g.evaluate(s + h);
      const auto b = g.evaluate(s - h);
      CHECK(std::abs((a.point.x1 - b.point.x1) / (2 * h) - c.d1.x1) < 1e-7);
      CHECK(std::abs((a.point.x2 - b.point.x2) / (2 * h) - c.d1.x2) < 1e-7);
      CHECK(std::abs((a.d1.x1 - b.d1.x1) / (2 * h) - c.d2.x1) < 1e-6);
      CHECK(std::abs((a.d1.x2 - b.d1.x2) / (2 * h) - c.d2.x2) < 1e-6);
    }
  }
  SUBCASE("inverse parameter and invariant geometry") {
    for (double t : {0.0, 0.4, 3.1, kPi, 5.0}) {
      const double s = g.quadrature_parameter(t);
      CHECK(std::abs(std::remainder(g.geometric_parameter(s) - t, kTwoPi)) < 1e-10);
    }
    const double e1 = std::abs(g.arclength() - arclength(kite));
    const double e2 = std::abs(g.resampled(384).arclength() - arclength(kite));
    CHECK(e1 < 1e-3);
    CHECK(e2 < e1 / 50.0);
    CHECK(g.contains(Point2{0.5, -0.5}));
  }
  CHECK(Grading::max_speed(0) == 1.0);
  CHECK(Grading::max_speed(4) > 1.0);
  CHECK_THROWS_AS(BoundaryCurve(kite, 96, 1), ValidationError);
}
