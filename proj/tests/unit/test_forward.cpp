#include <doctest.h>

#include <cmath>

#include "oracles/mie.hpp"
#include "rtm/errors.hpp"
#include "rtm/forward.hpp"
#include "rtm/specfun.hpp"

using namespace rtm;
using forward::ScattererModel;

namespace {

ScattererModel disk_model(forward::Physics physics, double radius = 2.0) {
  ScattererModel m;
  m.curves = {geometry::Circle{radius, {}}};
  m.physics = std::move(physics);
  return m;
}

std::vector<Point2> ring(double radius, int count) {
  std::vector<Point2> pts;
  for (int r = 0; r < count; ++r) pts.push_back(radius * unit_direction(kTwoPi * (r + 1) / count));
  return pts;
}

// Max over receivers of |computed - oracle| / max |oracle|.
double worst_relative(const forward::Vector& got, const std::vector<oracle::cplx>& a, double k, const Point2& source,
                      const std::vector<Point2>& receivers) {
  double scale = 0.0;
  double worst = 0.0;
  std::vector<oracle::cplx> ref;
  for (const auto& x : receivers) {
    ref.push_back(oracle::point_source_field(a, k, source.x1, source.x2, x.x1, x.x2));
    scale = std::max(scale, std::abs(ref.back()));
  }
  for (std::size_t r = 0; r < receivers.size(); ++r) {
    worst = std::max(worst, std::abs(got(static_cast<Eigen::Index>(r)) - ref[r]));
  }
  return worst / scale;
}

Point2 unit_normal(const geometry::CurveKind& curve, double theta) {
  const auto s = geometry::evaluate(curve, theta);
  const Point2 n = right_normal(s.d1);
  return (1.0 / norm(n)) * n;
}

}  // namespace

TEST_CASE("sound-soft disk matches the series oracle at 64 receivers") {
  for (double lambda : {1.0, 0.25}) {
    const double k = kTwoPi / lambda;
    const Point2 source{10.0, 0.0};
    const auto receivers = ring(10.0, 64);
    const forward::Solver solver(disk_model(forward::Dirichlet{}), k);
    const auto sol = solver.solve(forward::point_source(k, source));
    const auto a = oracle::sound_soft(k, 2.0, oracle::order_cutoff(2 * k));
    CHECK(worst_relative(forward::scattered_at(sol, receivers), a, k, source, receivers) < 1e-8);
    CHECK(std::get<forward::BoundarySolution>(sol).residual <= 1e-10);
  }
}

TEST_CASE("single receiver value at (0, 10)") {
  const double k = kTwoPi;
  const auto sol = forward::solve_dirichlet(disk_model(forward::Dirichlet{}), k, {10.0, 0.0});
  const std::vector<Point2> at{{0.0, 10.0}};
  const auto a = oracle::sound_soft(k, 2.0, 60);
  const auto ref = oracle::point_source_field(a, k, 10.0, 0.0, 0.0, 10.0);
  CHECK(std::abs(forward::scattered_at(forward::Solution{sol}, at)(0) - ref) / std::abs(ref) < 1e-8);
}

TEST_CASE("impedance and Neumann disks match the series oracle") {
  for (double lambda : {1.0, 0.25}) {
    const double k = kTwoPi / lambda;
    const Point2 source{0.0, -10.0};
    const auto receivers = ring(10.0, 64);
    for (double eta : {0.0, 1.0}) {
      const auto sol = forward::Solver(disk_model(forward::Impedance{eta}), k).solve(forward::point_source(k, source));
      const auto a = oracle::impedance(k, 2.0, eta, oracle::order_cutoff(2 * k));
      CHECK(worst_relative(forward::scattered_at(sol, receivers), a, k, source, receivers) < 1e-7);
    }
  }
}

TEST_CASE("sound-soft boundary condition holds between nodes") {
  const double k = kTwoPi;
  const geometry::CurveKind kite = geometry::Kite{{0.0, 0.0}, 2.0};
  ScattererModel m;
  m.curves = {kite};
  const Point2 source{7.0, 3.0};
  const auto sol = forward::solve_dirichlet(m, k, source);
  double worst = 0.0;
  for (double t = 0.013; t < kTwoPi; t += 0.21) {
    const Point2 x = geometry::evaluate(kite, t).point;
    const auto tr = forward::boundary_trace(sol, 0, t);
    worst = std::max(worst, std::abs(tr.value + specfun::green(k, x, source)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("impedance boundary conditions hold between nodes") {
  const double k = kTwoPi;
  const geometry::CurveKind kite = geometry::Kite{{0.0, 0.0}, 2.0};
  const Point2 source{-8.0, 2.0};
  SUBCASE("Neumann") {
    ScattererModel m;
    m.curves = {kite};
    m.physics = forward::Impedance{0.0};
    const auto sol = forward::solve_impedance(m, k, source);
    double worst = 0.0;
    double scale = 0.0;
    for (double t = 0.02; t < kTwoPi; t += 0.17) {
      const Point2 x = geometry::evaluate(kite, t).point;
      const Point2 n = unit_normal(kite, t);
      const auto g = specfun::green_gradient(k, x, source);
      const Complex dui = g.d1 * n.x1 + g.d2 * n.x2;
      const auto tr = forward::boundary_trace(sol, 0, t);
      worst = std::max(worst, std::abs(tr.normal_derivative + dui));
      scale = std::max(scale, std::abs(dui));
    }
    CHECK(worst / scale < 1e-7);
  }
  SUBCASE("coated: eta 1000 above, 1 below") {
    // Graded nodes; checked at doubled density, as for the other convergence self-checks.
    ScattererModel m;
    m.curves = {kite};
    m.points_per_wavelength = 20.0;
    forward::Impedance imp;
    imp.split = true;
    imp.eta_upper = 1000.0;
    imp.eta_lower = 1.0;
    m.physics = imp;
    const auto sol = forward::solve_impedance(m, k, source);
    double worst = 0.0;
    double scale = 0.0;
    const auto& curve = sol.boundary->curve(0);
    CHECK(curve.grading_order() == forward::kSplitGradingOrder);
    for (double t = 0.02; t < kTwoPi; t += 0.17) {
      const double s = curve.quadrature_parameter(t);
      const auto sample = curve.evaluate(s);
      const Point2 x = sample.point;
      CHECK(distance(x, geometry::evaluate(kite, t).point) < 1e-12);
      const Point2 n = (1.0 / norm(sample.d1)) * right_normal(sample.d1);
      const double eta = imp.at(kite, x);
      const auto gg = specfun::green_with_gradient(k, x, source);
      const Complex dui = gg.grad.d1 * n.x1 + gg.grad.d2 * n.x2;
      const auto tr = forward::boundary_trace(sol, 0, s);
      const Complex total = tr.value + gg.value;
      const Complex dtotal = tr.normal_derivative + dui;
      worst = std::max(worst, std::abs(dtotal + kI * k * eta * total));
      scale = std::max(scale, std::abs(dui) + k * eta * std::abs(gg.value));
    }
    CHECK(worst / scale < 1e-6);
  }
}

TEST_CASE("coated obstacle data converge under refinement") {
  const double k = kTwoPi;
  ScattererModel m;
  m.curves = {geometry::Kite{{}, 2.0}};
  forward::Impedance imp;
  imp.split = true;
  imp.eta_upper = 1000.0;
  imp.eta_lower = 1.0;
  m.physics = imp;
  const auto receivers = ring(10.0, 16);
  const auto coarse = forward::scattered_at(forward::Solver(m, k).solve(forward::point_source(k, {-8.0, 2.0})), receivers);
  m.points_per_wavelength = 20.0;
  const auto fine = forward::scattered_at(forward::Solver(m, k).solve(forward::point_source(k, {-8.0, 2.0})), receivers);
  CHECK((coarse - fine).cwiseAbs().maxCoeff() / fine.cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("split impedance profile uses the reference center") {
  forward::Impedance imp;
  imp.split = true;
  imp.eta_upper = 5.0;
  imp.eta_lower = 2.0;
  const geometry::CurveKind c = geometry::Circle{1.0, {0.0, 3.0}};
  CHECK(imp.at(c, {0.0, 3.5}) == 5.0);
  CHECK(imp.at(c, {0.0, 2.5}) == 2.0);
  CHECK(forward::Impedance{0.7}.at(c, {0.0, 0.0}) == 0.7);
}

TEST_CASE("penetrable disk via Lippmann-Schwinger matches the transmission series") {
  const double k = kTwoPi;
  forward::Penetrable p;
  p.index = {0.25};
  p.method = forward::VolumeMethod::LippmannSchwinger;
  const auto model = disk_model(p);
  const forward::Solver solver(model, k);
  CHECK(solver.method() == forward::Method::Volume);
  const Point2 source{10.0, 0.0};
  const auto sol = solver.solve(forward::point_source(k, source));
  const auto& vs = std::get<forward::VolumeSolution>(sol);
  CHECK(vs.info.converged);
  CHECK(vs.info.relative_residual <= 1e-10);
  const auto receivers = ring(10.0, 64);
  const auto a = oracle::transmission(k, 2.0, 0.25, oracle::order_cutoff(2 * k));
  CHECK(worst_relative(forward::scattered_at(sol, receivers), a, k, source, receivers) < 1e-4);
}

TEST_CASE("penetrable disk uses the series by default") {
  forward::Penetrable p;
  p.index = {0.25};
  const double k = kTwoPi;
  const forward::Solver solver(disk_model(p), k);
  CHECK(solver.method() == forward::Method::Series);
  const Point2 source{0.0, 10.0};
  const auto receivers = ring(10.0, 32);
  const auto a = oracle::transmission(k, 2.0, 0.25, oracle::order_cutoff(2 * k));
  CHECK(worst_relative(forward::scattered_at(solver.solve(forward::point_source(k, source)), receivers), a, k, source,
                       receivers) < 1e-10);
}

TEST_CASE("unit index scatters nothing") {
  forward::Penetrable p;
  p.index = {1.0};
  p.method = forward::VolumeMethod::LippmannSchwinger;
  ScattererModel m;
  m.curves = {geometry::Kite{{}, 1.5}};
  m.physics = p;
  const double k = kTwoPi;
  const auto sol = forward::Solver(m, k).solve(forward::point_source(k, {10.0, 0.0}));
  CHECK(forward::scattered_at(sol, ring(10.0, 8)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("weak contrast agrees with the Born approximation") {
  const double k = kTwoPi;
  const double eps = 1e-3;
  forward::Penetrable p;
  p.index = {1.0 + eps};
  p.method = forward::VolumeMethod::LippmannSchwinger;
  const auto model = disk_model(p, 1.0);
  const Point2 source{10.0, 0.0};
  const Point2 x{-3.0, 8.0};
  const std::vector<Point2> at{x};
  const Complex got = forward::scattered_at(forward::Solver(model, k).solve(forward::point_source(k, source)), at)(0);
  // k^2 eps int_D G(x,y) G(y,source) dy by Simpson in r and trapezoid in angle
  const int nr = 400;
  const int nt = 256;
  Complex born{0.0, 0.0};
  for (int i = 0; i <= nr; ++i) {
    const double r = static_cast<double>(i) / nr;
    const double w = (i == 0 || i == nr) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    for (int j = 0; j < nt; ++j) {
      const Point2 y = r * unit_direction(kTwoPi * j / nt);
      if (r == 0.0 && j > 0) continue;
      const double wt = (r == 0.0) ? 0.0 : w / (3.0 * nr) * kTwoPi / nt * r;
      if (wt == 0.0) continue;
      born += wt * specfun::green(k, x, y) * specfun::green(k, y, source);
    }
  }
  born *= k * k * eps;
  CHECK(std::abs(got - born) / std::abs(born) < 0.01);
}

TEST_CASE("reciprocity of point-source scattering") {
  const double k = kTwoPi;
  ScattererModel m;
  m.curves = {geometry::Kite{{-1.0, 0.5}, 1.5}, geometry::PLeaf{5, {2.5, -1.0}, 1.0}};
  const Point2 a{9.0, 2.0};
  const Point2 b{-4.0, -8.5};
  for (auto physics : {forward::Physics{forward::Dirichlet{}}, forward::Physics{forward::Impedance{0.5}}}) {
    m.physics = physics;
    const forward::Solver solver(m, k);
    const std::vector<Point2> pa{a};
    const std::vector<Point2> pb{b};
    const Complex ab = forward::scattered_at(solver.solve(forward::point_source(k, a)), pb)(0);
    const Complex ba = forward::scattered_at(solver.solve(forward::point_source(k, b)), pa)(0);
    CHECK(std::abs(ab - ba) / std::abs(ab) < 1e-8);
  }
}

TEST_CASE("node doubling changes receiver values by less than 1e-9") {
  const double k = kTwoPi;
  ScattererModel m;
  m.curves = {geometry::Kite{{}, 2.0}};
  const auto receivers = ring(10.0, 16);
  const auto coarse = forward::scattered_at(
      forward::Solver(m, k).solve(forward::point_source(k, {10.0, 0.0})), receivers);
  m.points_per_wavelength = 20.0;
  const auto fine = forward::scattered_at(
      forward::Solver(m, k).solve(forward::point_source(k, {10.0, 0.0})), receivers);
  CHECK((coarse - fine).cwiseAbs().maxCoeff() / fine.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("scattered field decay and radiation condition") {
  const double k = kTwoPi;
  const auto sol = forward::Solution{forward::solve_dirichlet(disk_model(forward::Dirichlet{}), k, {10.0, 0.0})};
  const Point2 dir = unit_direction(2.0);
  const std::vector<Point2> far{100.0 * dir, 200.0 * dir};
  const auto u = forward::scattered_at(sol, far);
  CHECK(std::abs(u(1)) / std::abs(u(0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
  const double r = 1e3;
  const double h = 1e-4;
  const std::vector<Point2> pts{(r - h) * dir, r * dir, (r + h) * dir};
  const auto v = forward::scattered_at(sol, pts);
  const Complex dr = (v(2) - v(0)) / (2 * h);
  CHECK(std::sqrt(r) * std::abs(dr - kI * k * v(1)) < 1e-3 * std::abs(v(1)) * std::sqrt(r));
}

TEST_CASE("far field matches the series and the asymptotic field") {
  const double k = kTwoPi;
  const Point2 source{10.0, 0.0};
  const auto sol = forward::Solution{forward::solve_dirichlet(disk_model(forward::Dirichlet{}), k, source)};
  std::vector<double> angles;
  for (int i = 0; i < 24; ++i) angles.push_back(kTwoPi * i / 24);
  const auto ff = forward::far_field(sol, angles);
  const auto a = oracle::sound_soft(k, 2.0, oracle::order_cutoff(2 * k));
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const auto ref = oracle::point_source_far_field(a, k, source.x1, source.x2, angles[i]);
    worst = std::max(worst, std::abs(ff(static_cast<Eigen::Index>(i)) - ref));
    scale = std::max(scale, std::abs(ref));
  }
  CHECK(worst / scale < 1e-8);
  const auto gap = [&](double r) {
    const Point2 x = r * unit_direction(angles[5]);
    const std::vector<Point2> at{x};
    return std::abs(forward::scattered_at(sol, at)(0) * std::sqrt(r) * std::exp(-kI * k * r) - ff(5));
  };
  const double c1 = gap(1e3) * 1e3;
  const double c2 = gap(2e3) * 2e3;
  CHECK(c2 / c1 == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("Dirichlet solve is robust at an interior Dirichlet eigenvalue") {
  const double j01 = 2.404825557695773;
  const double k = j01 / 2.0;
  const auto sol = forward::solve_dirichlet(disk_model(forward::Dirichlet{}), k, {10.0, 0.0});
  CHECK(sol.residual <= 1e-10);
  const auto receivers = ring(10.0, 16);
  const auto a = oracle::sound_soft(k, 2.0, 40);
  CHECK(worst_relative(forward::scattered_at(forward::Solution{sol}, receivers), a, k, {10.0, 0.0}, receivers) < 1e-8);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(forward::solve_dirichlet(disk_model(forward::Dirichlet{}), kTwoPi, {1.0, 0.0}), ValidationError);
  ScattererModel bad = disk_model(forward::Impedance{-1.0});
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  forward::Penetrable p;
  p.index = {-0.5};
  CHECK_THROWS_AS(disk_model(p).validate(), ValidationError);
  const auto sol = forward::Solution{forward::solve_dirichlet(disk_model(forward::Dirichlet{}), kTwoPi, {10.0, 0.0})};
  const std::vector<Point2> inside{{0.5, 0.5}};
  CHECK_THROWS_AS(forward::scattered_at(sol, inside), ValidationError);
  CHECK(forward::inside_obstacle(disk_model(forward::Dirichlet{}), {2.0, 0.0}));
  CHECK_FALSE(forward::inside_obstacle(disk_model(forward::Dirichlet{}), {2.1, 0.0}));
}
