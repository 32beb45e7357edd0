#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "rtm/disk_series.hpp"
#include "rtm/metrics.hpp"
#include "rtm/reference.hpp"
#include "rtm/specfun.hpp"

namespace rtm::cli {
namespace {

struct Check {
  std::string name;
  std::function<double()> measure;  // returns the quantity compared with the limit
  double lo;
  double hi;
};

// Worst relative deviation between a boundary or volume solve and the disk series at 16 receivers.
double disk_deviation(const forward::Physics& physics, const disk::Condition& condition, double wavelength,
                      const Parallelism& par) {
  const double k = kTwoPi / wavelength;
  forward::ScattererModel model;
  model.curves = {geometry::Circle{2.0, {0.0, 0.0}}};
  model.physics = physics;
  const Point2 source{10.0, 0.0};
  const forward::Solver solver(model, k, par);
  const forward::Solution sol = solver.solve(forward::point_source(k, source));
  const disk::Disk d{2.0, {0.0, 0.0}, condition};
  const int order = disk::truncation_order(k, 2.0);
  const disk::SeriesField exact(d, k, disk::point_source_coefficients(k, d.center, source, order));
  std::vector<Point2> receivers;
  for (int r = 0; r < 16; ++r) receivers.push_back(10.0 * unit_direction(kTwoPi * (r + 0.5) / 16));
  const forward::Vector got = forward::scattered_at(sol, receivers, par);
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t r = 0; r < receivers.size(); ++r) scale = std::max(scale, std::abs(exact.value(receivers[r])));
  for (std::size_t r = 0; r < receivers.size(); ++r) {
    worst = std::max(worst, std::abs(got(static_cast<Eigen::Index>(r)) - exact.value(receivers[r])) / scale);
  }
  return worst;
}

}  // namespace

bool cmd_selftest(const SelftestOptions& options, std::ostream& out) {
  const double k = kTwoPi;
  const reference::HkOptions hk{0, options.green_scale};
  const auto par = options.par;
  const std::vector<Check> checks = {
      {"bessel_j0_at_1", [] { return std::abs(specfun::bessel_j(0, 1.0) - 0.76519768655796655); }, 0.0, 1e-13},
      {"bessel_y0_at_1", [] { return std::abs(specfun::bessel_y(0, 1.0) - 0.088256964215676958); }, 0.0, 1e-13},
      {"wronskian",
       [] {
         double worst = 0.0;
         for (double x : {0.1, 1.0, 10.0, 50.0, 100.0}) {
           for (int n : {0, 5, 20}) {
             const double w = specfun::bessel_j(n + 1, x) * specfun::bessel_y(n, x) -
                              specfun::bessel_j(n, x) * specfun::bessel_y(n + 1, x);
             worst = std::max(worst, std::abs(w * kPi * x / 2.0 - 1.0));
           }
         }
         return worst;
       },
       0.0, 1e-10},
      {"sound_soft_disk_vs_series",
       [&] { return disk_deviation(forward::Dirichlet{}, disk::SoundSoft{}, 1.0, par); }, 0.0, 1e-8},
      {"neumann_disk_vs_series",
       [&] { return disk_deviation(forward::Impedance{}, disk::Impedance{0.0}, 1.0, par); }, 0.0, 1e-8},
      {"impedance_disk_vs_series",
       [&] { return disk_deviation(forward::Impedance{1.0}, disk::Impedance{1.0}, 1.0, par); }, 0.0, 1e-8},
      {"penetrable_disk_volume_vs_series",
       [&] {
         forward::Penetrable p;
         p.index = {0.25};
         p.method = forward::VolumeMethod::LippmannSchwinger;
         return disk_deviation(p, disk::Transmission{0.25}, 1.0, par);
       },
       0.0, 1e-3},
      {"hk_boundary_circle",
       [&] { return reference::check_hk_boundary(geometry::Circle{2.0, {}}, k, {0.3, 0.1}, {-0.5, 0.4}, hk).residual; },
       0.0, 1e-9},
      {"hk_boundary_kite",
       [&] { return reference::check_hk_boundary(geometry::Kite{}, k, {0.1, 0.2}, {-0.4, -0.3}, hk).residual; }, 0.0,
       1e-9},
      {"hk_circle_decay_at_least_first_order",
       [&] {
         const Point2 x{0.3, 0.1};
         const Point2 z{-0.5, 0.4};
         return reference::check_hk_circle(10.0, k, 512, x, z, hk).residual /
                reference::check_hk_circle(20.0, k, 1024, x, z, hk).residual;
       },
       1.6, std::numeric_limits<double>::infinity()},
      {"energy_identity_disk",
       [&] {
         forward::ScattererModel model;
         model.curves = {geometry::Circle{2.0, {}}};
         return reference::check_energy_identity(model, k, {10.0, 0.0}).relative_residual;
       },
       0.0, 1e-5},
      {"limit_image_vs_rtm_correlation",
       [&] {
         forward::ScattererModel model;
         model.curves = {geometry::Circle{2.0, {}}};
         const geometry::AcquisitionGeometry acq{10.0, 10.0, 64, 64, {}};
         const geometry::SamplingGrid grid{-3.0, 3.0, -3.0, 3.0, 41, 41};
         const auto rtm_img = imaging::rtm_image(msr::synthesize_msr(model, acq, k, par), grid, par);
         reference::ReferenceOptions ro;
         ro.par = par;
         const auto limit = reference::theorem_image(model, grid, k, ro).as_image();
         return metrics::normalized_cross_correlation(rtm_img, limit);
       },
       0.95, 1.0},
  };

  bool all = true;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& c : checks) {
    double value = std::nan("");
    std::string error;
    try {
      value = c.measure();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const bool pass = error.empty() && value >= c.lo && value <= c.hi;
    all = all && pass;
    char line[256];
    std::snprintf(line, sizeof line, "%s %s value=%.3e range=[%.3g, %.3g]", pass ? "PASS" : "FAIL", c.name.c_str(),
                  value, c.lo, c.hi);
    out << line;
    if (!error.empty()) out << " error=" << error;
    out << '\n';
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char tail[96];
  std::snprintf(tail, sizeof tail, "%s selftest in %.1f s\n", all ? "PASS" : "FAIL", seconds);
  out << tail;
  return all;
}

}  // namespace rtm::cli
