#include <doctest.h>

#include "oracles/mie.hpp"
#include "rtm/errors.hpp"
#include "rtm/metrics.hpp"
#include "rtm/reference.hpp"
#include "rtm/specfun.hpp"

using namespace rtm;

namespace {

const geometry::SamplingGrid kGrid{-3.0, 3.0, -3.0, 3.0, 41, 41};

forward::ScattererModel disk_with(forward::Physics physics) {
  forward::ScattererModel m;
  m.curves = {geometry::Circle{2.0, {}}};
  m.physics = std::move(physics);
  return m;
}

// Worst relative deviation of a theorem image from a radial closed form.
template <class ClosedForm>
double deviation_from(const reference::TheoremImage& img, ClosedForm&& closed) {
  double worst = 0.0;
  double peak = 0.0;
  for (int i = 0; i < img.grid.n1; ++i) {
    for (int j = 0; j < img.grid.n2; ++j) {
      const double expected = closed(norm(img.grid.node(i, j)));
      peak = std::max(peak, expected);
      worst = std::max(worst, std::abs(img.values(i, j) - expected));
    }
  }
  return worst / peak;
}

}  // namespace

TEST_CASE("sound-soft limit image of a disk matches the series") {
  const double k = kTwoPi;
  const auto img = reference::theorem_image_sound_soft(disk_with(forward::Dirichlet{}), kGrid, k);
  CHECK(img.theorem == reference::Theorem::SoundSoft);
  const auto a = oracle::sound_soft(k, 2.0, oracle::order_cutoff(k * 5.0));
  CHECK(deviation_from(img, [&](double rz) { return oracle::far_field_energy_imag_green(a, k, rz); }) < 1e-6);
  CHECK(img.as_image().kind == imaging::ImageKind::Reference);
}

TEST_CASE("impedance limit image of a disk matches the series") {
  const double k = kTwoPi;
  const auto img = reference::theorem_image_impedance(disk_with(forward::Impedance{1.0}), kGrid, k);
  const auto a = oracle::impedance(k, 2.0, 1.0, oracle::order_cutoff(k * 5.0));
  CHECK(deviation_from(img, [&](double rz) {
          return oracle::far_field_energy_imag_green(a, k, rz) + oracle::impedance_boundary_term(a, k, 2.0, 1.0, rz);
        }) < 1e-6);
}

TEST_CASE("zero impedance drops the boundary term") {
  const double k = kTwoPi;
  const auto img = reference::theorem_image_impedance(disk_with(forward::Impedance{0.0}), kGrid, k);
  const auto a = oracle::impedance(k, 2.0, 0.0, oracle::order_cutoff(k * 5.0));
  CHECK(oracle::impedance_boundary_term(a, k, 2.0, 0.0, 1.0) == 0.0);
  CHECK(deviation_from(img, [&](double rz) { return oracle::far_field_energy_imag_green(a, k, rz); }) < 1e-6);
}

TEST_CASE("large impedance approaches the sound-soft limit image") {
  const double k = 2.0 * kTwoPi;
  const auto soft = reference::theorem_image(disk_with(forward::Dirichlet{}), kGrid, k).as_image();
  const auto hard = reference::theorem_image(disk_with(forward::Impedance{1000.0}), kGrid, k).as_image();
  CHECK(metrics::relative_sup_difference(hard, soft) < 0.05);
}

TEST_CASE("penetrable limit image of a disk matches the transmission series") {
  const double k = kTwoPi;
  const auto a = oracle::transmission(k, 2.0, 0.25, oracle::order_cutoff(k * 5.0));
  const auto closed = [&](double rz) { return oracle::far_field_energy_imag_green(a, k, rz); };
  forward::Penetrable pen;
  pen.index = {0.25};
  pen.method = forward::VolumeMethod::LippmannSchwinger;
  const geometry::SamplingGrid coarse{-3.0, 3.0, -3.0, 3.0, 21, 21};
  const auto ls = reference::theorem_image_penetrable(disk_with(pen), coarse, k);
  CHECK(ls.theorem == reference::Theorem::Penetrable);
  CHECK(deviation_from(ls, closed) < 1e-4);
  pen.method = forward::VolumeMethod::Auto;
  CHECK(deviation_from(reference::theorem_image_penetrable(disk_with(pen), kGrid, k), closed) < 1e-8);
}

TEST_CASE("unit index gives a zero limit image") {
  forward::Penetrable pen;
  pen.index = {1.0};
  for (auto method : {forward::VolumeMethod::Auto, forward::VolumeMethod::LippmannSchwinger}) {
    pen.method = method;
    const auto img = reference::theorem_image(disk_with(pen), kGrid, kTwoPi);
    CHECK(img.values.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("limit images are nonnegative and converge in the far-field node count") {
  forward::ScattererModel kite;
  kite.curves = {geometry::Kite{{}, 1.0}};
  forward::ScattererModel coated = kite;
  coated.physics = forward::Impedance{0.0, true, 1000.0, 1.0};
  forward::Penetrable pen;
  pen.index = {0.25};
  forward::ScattererModel soft_kite = kite;
  soft_kite.physics = pen;
  const geometry::SamplingGrid grid{-3.0, 3.0, -3.0, 3.0, 21, 21};
  for (const auto& model : {kite, coated, soft_kite}) {
    const int floor_count = reference::default_far_field_nodes(model, kTwoPi);
    const auto a = reference::theorem_image(model, grid, kTwoPi);
    const auto b = reference::theorem_image(model, grid, kTwoPi, {2 * floor_count, {}});
    CHECK(a.far_field_nodes == floor_count);
    CHECK(b.far_field_nodes == 2 * floor_count);
    const double peak = a.values.maxCoeff();
    CHECK(peak > 0.0);
    CHECK(a.values.minCoeff() >= -1e-12 * peak);
    CHECK(metrics::relative_sup_difference(b.as_image(), a.as_image()) < 1e-8);
  }
}

TEST_CASE("far-field node floor") {
  CHECK(reference::default_far_field_nodes(disk_with(forward::Dirichlet{}), 0.5) == 64);
  const int n = reference::default_far_field_nodes(disk_with(forward::Dirichlet{}), kTwoPi);
  CHECK(n == 252);  // ceil(10 * 2 pi * 4), rounded up to even
  CHECK_THROWS_AS(reference::theorem_image(disk_with(forward::Dirichlet{}), kGrid, kTwoPi, {4, {}}), ValidationError);
}

TEST_CASE("limit image decays away from the obstacle") {
  const std::vector<Point2> points{{2.0, 0.0}, {22.0, 0.0}};
  const auto v = reference::theorem_values(disk_with(forward::Dirichlet{}), kTwoPi, points);
  CHECK(v[1] < 0.1 * v[0]);
}

TEST_CASE("wrong physics for a named limit image") {
  CHECK_THROWS_AS(reference::theorem_image_impedance(disk_with(forward::Dirichlet{}), kGrid, kTwoPi), ValidationError);
  CHECK_THROWS_AS(reference::theorem_image_sound_soft(disk_with(forward::Impedance{1.0}), kGrid, kTwoPi),
                  ValidationError);
  CHECK_THROWS_AS(reference::theorem_image_penetrable(disk_with(forward::Dirichlet{}), kGrid, kTwoPi), ValidationError);
}

TEST_CASE("boundary Helmholtz-Kirchhoff identity") {
  const double k = kTwoPi;
  const Point2 x{0.3, 0.1};
  const Point2 y{-0.5, 0.4};
  const auto circle = reference::check_hk_boundary(geometry::Circle{2.0, {}}, k, x, y);
  CHECK(circle.nodes == 252);
  CHECK(circle.residual <= 1e-10);
  CHECK(circle.rhs == Complex{0.0, 2.0 * specfun::green_imag(k, x, y)});
  CHECK(reference::check_hk_boundary(geometry::Kite{{}, 1.0}, k, x, y).residual <= 1e-10);
  CHECK(reference::check_hk_boundary(geometry::PLeaf{8, {}, 2.0}, k, x, y).residual <= 1e-9);

  const auto same = reference::check_hk_boundary(geometry::Circle{2.0, {}}, k, x, x);
  CHECK(same.lhs.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(same.lhs.imag() == doctest::Approx(0.5).epsilon(1e-12));

  // spectral: each added 16 nodes buys orders of magnitude until roundoff
  std::vector<double> res;
  for (int n : {16, 32, 48, 64}) res.push_back(reference::check_hk_boundary(geometry::Kite{{}, 1.0}, k, x, y, {n}).residual);
  CHECK(res[1] < 1e-2 * res[0]);
  CHECK(res[2] < 1e-2 * res[1]);
  CHECK(res[3] < 1e-2 * res[2]);

  CHECK(reference::check_hk_boundary(geometry::Circle{2.0, {}}, k, x, y, {0, 1.001}).residual > 1e-6);
  CHECK_THROWS_AS(reference::check_hk_boundary(geometry::Circle{2.0, {}}, k, {3.0, 0.0}, y), ValidationError);
}

TEST_CASE("circle Helmholtz-Kirchhoff identity") {
  const double k = kTwoPi;
  std::vector<double> value, gradient;
  for (double radius : {10.0, 20.0}) {
    const int n = static_cast<int>(51.2 * radius);
    const auto same = reference::check_hk_circle(radius, k, n, {0.2, -0.1}, {0.2, -0.1});
    CHECK(same.lhs.real() == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(same.radius == radius);
    value.push_back(reference::check_hk_circle(radius, k, n, {0.3, 0.1}, {-0.5, 0.4}).residual);
    gradient.push_back(reference::check_hk_circle_gradient(radius, k, n, {0.3, 0.1}, {-0.5, 0.4}).residual);
  }
  // at least first order in 1/R
  CHECK(value[0] / value[1] >= 1.6);
  CHECK(gradient[0] / gradient[1] >= 1.6);
  CHECK(value[0] < 1e-3);
  CHECK_THROWS_AS(reference::check_hk_circle(1.0, k, 64, {2.0, 0.0}, {0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(reference::check_hk_circle(10.0, k, 4, {0.0, 0.0}, {0.0, 0.0}), ValidationError);
}

TEST_CASE("energy identity") {
  const double k = kTwoPi;
  forward::ScattererModel disk = disk_with(forward::Dirichlet{});
  forward::ScattererModel kite;
  kite.curves = {geometry::Kite{{}, 1.0}};
  const auto d = reference::check_energy_identity(disk, k, {5.0, 3.0});
  const auto q = reference::check_energy_identity(kite, k, {5.0, 3.0});
  CHECK(d.relative_residual <= 1e-6);
  CHECK(q.relative_residual <= 1e-5);
  for (const auto& r : {d, q}) {
    CHECK(r.lhs.real() > 0.0);
    CHECK(r.rhs.real() > 0.0);
    CHECK(r.residual >= 0.0);
  }
  CHECK_THROWS_AS(reference::check_energy_identity(disk_with(forward::Impedance{1.0}), k, {5.0, 3.0}),
                  ValidationError);
}
