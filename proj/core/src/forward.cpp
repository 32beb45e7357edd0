#include "rtm/forward.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "rtm/errors.hpp"
#include "rtm/specfun.hpp"

namespace rtm::forward {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool single_circle(const ScattererModel& model) {
  return model.curves.size() == 1 && std::holds_alternative<geometry::Circle>(model.curves[0]);
}

}  // namespace

double Impedance::at(const geometry::CurveKind& curve, const Point2& x) const {
  if (!split) return eta;
  return x.x2 >= reference_center(curve).x2 ? eta_upper : eta_lower;
}

Point2 reference_center(const geometry::CurveKind& curve) {
  return std::visit(Overloaded{
                        [](const geometry::Circle& c) { return c.center; },
                        [](const geometry::Kite& k) { return k.center; },
                        [](const geometry::PLeaf& l) { return l.center; },
                    },
                    curve);
}

void ScattererModel::validate() const {
  if (!(points_per_wavelength > 0.0)) throw ValidationError("points per wavelength must be positive");
  for (const auto& c : curves) geometry::validate(c);
  std::visit(Overloaded{
                 [](const Dirichlet&) {},
                 [](const Impedance& imp) {
                   if (imp.eta < 0.0 || imp.eta_upper < 0.0 || imp.eta_lower < 0.0) {
                     throw ValidationError("impedance must be nonnegative");
                   }
                   if (!std::isfinite(imp.eta) || !std::isfinite(imp.eta_upper) || !std::isfinite(imp.eta_lower)) {
                     throw ValidationError("impedance must be bounded");
                   }
                 },
                 [this](const Penetrable& p) {
                   if (p.index.empty()) throw ValidationError("penetrable model needs a refractive index");
                   if (p.index.size() != 1 && p.index.size() != curves.size()) {
                     throw ValidationError("need one refractive index per curve or a single shared value");
                   }
                   for (double n : p.index) {
                     if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("refractive index must be positive");
                   }
                   if (p.method == VolumeMethod::Series && !single_circle(*this)) {
                     throw ValidationError("series solver requires a single circular obstacle");
                   }
                 },
             },
             physics);
  // Obstacles must not overlap.
  std::vector<geometry::BoundaryCurve> probes;
  for (const auto& c : curves) probes.emplace_back(c, 64);
  for (std::size_t a = 0; a < probes.size(); ++a) {
    for (std::size_t b = 0; b < probes.size(); ++b) {
      if (a == b) continue;
      for (const auto& nd : probes[a].nodes()) {
        if (probes[b].contains(nd.point)) throw ValidationError("obstacles overlap");
      }
    }
  }
}

std::string ScattererModel::tag() const {
  return std::visit(Overloaded{
                        [](const Dirichlet&) { return std::string("dirichlet"); },
                        [](const Impedance&) { return std::string("impedance"); },
                        [](const Penetrable&) { return std::string("penetrable"); },
                    },
                    physics);
}

IncidentField point_source(double k, const Point2& source) {
  IncidentField f;
  f.sample = [k, source](const Point2& x) {
    const auto g = specfun::green_with_gradient(k, x, source);
    return IncidentSample{g.value, g.grad.d1, g.grad.d2};
  };
  f.expansion = [k, source](const Point2& center, int max_order) {
    return disk::point_source_coefficients(k, center, source, max_order);
  };
  return f;
}

IncidentField imag_green(double k, const Point2& z) {
  IncidentField f;
  f.sample = [k, z](const Point2& x) {
    const Point2 d = x - z;
    const double r = norm(d);
    if (r == 0.0) return IncidentSample{0.25, 0.0, 0.0};
    const auto b = specfun::bessel_jy01(k * r);
    const double g = -0.25 * k * b.j1 / r;
    return IncidentSample{0.25 * b.j0, g * d.x1, g * d.x2};
  };
  f.expansion = [k, z](const Point2& center, int max_order) {
    return disk::imag_green_coefficients(k, center, z, max_order);
  };
  return f;
}

nystrom::Boundary discretize(const ScattererModel& model, double k) {
  // A split impedance jumps where x2 crosses the reference center, which is at
  // theta = 0 and pi for every curve family; those curves get graded nodes,
  // with the count raised so the sparsest region keeps the requested density.
  const auto* imp = std::get_if<Impedance>(&model.physics);
  const int grading = (imp != nullptr && imp->split && imp->eta_upper != imp->eta_lower) ? kSplitGradingOrder : 0;
  const double stretch = geometry::Grading::max_speed(grading);
  std::vector<geometry::BoundaryCurve> curves;
  for (const auto& c : model.curves) {
    int n = geometry::points_per_wavelength(c, k, model.points_per_wavelength);
    if (grading > 0) n = 2 * static_cast<int>(std::ceil(0.5 * n * stretch));
    curves.emplace_back(c, n, grading);
  }
  return nystrom::Boundary(std::move(curves));
}

bool inside_obstacle(const ScattererModel& model, const Point2& x, double tolerance) {
  for (const auto& c : model.curves) {
    const geometry::BoundaryCurve probe(c, 64);
    if (probe.contains(x) || probe.distance_to(x) <= tolerance) return true;
  }
  return false;
}

Solver::Solver(ScattererModel model, double k, const Parallelism& par) : model_(std::move(model)), k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("wavenumber must be positive");
  model_.validate();
  if (model_.empty()) return;

  const int n_curves = static_cast<int>(model_.curves.size());
  std::visit(
      Overloaded{
          [&](const Dirichlet&) {
            method_ = Method::Boundary;
            boundary_ = std::make_shared<const nystrom::Boundary>(discretize(model_, k_));
            layers_ = nystrom::assemble(*boundary_, k_, nystrom::kSingle | nystrom::kDouble, par);
            eta_.setZero(boundary_->size());
            system_ = layers_.double_layer - kI * coupling() * layers_.single;
            system_.diagonal().array() += 0.5;
          },
          [&](const Impedance& imp) {
            method_ = Method::Boundary;
            boundary_ = std::make_shared<const nystrom::Boundary>(discretize(model_, k_));
            layers_ = nystrom::assemble(*boundary_, k_, nystrom::kAllOperators, par);
            const int n = boundary_->size();
            eta_.resize(n);
            for (int c = 0; c < n_curves; ++c) {
              for (int j = 0; j < boundary_->curve(c).size(); ++j) {
                eta_(boundary_->offset(c) + j) = imp.at(model_.curves[static_cast<std::size_t>(c)],
                                                        boundary_->curve(c).node(j).point);
              }
            }
            const Complex ik = kI * k_;
            Matrix trace = layers_.double_layer - kI * coupling() * layers_.single;
            trace.diagonal().array() += 0.5;
            Matrix flux = -layers_.adjoint;
            flux.diagonal().array() += 0.5;
            system_ = layers_.hypersingular + kI * coupling() * flux +
                      (ik * eta_.cast<Complex>()).asDiagonal() * trace;
            // Rows next to graded flat points carry 1/jacobian factors; equilibrate
            // so the residual test measures backward error, not row scaling.
            row_scale_ = system_.cwiseAbs().rowwise().maxCoeff().cwiseInverse();
            system_ = row_scale_.cast<Complex>().asDiagonal() * system_;
          },
          [&](const Penetrable& p) {
            const bool series = p.method == VolumeMethod::Series ||
                                (p.method == VolumeMethod::Auto && single_circle(model_));
            if (series) {
              method_ = Method::Series;
              const auto& c = std::get<geometry::Circle>(model_.curves[0]);
              disk_ = disk::Disk{c.radius, c.center, disk::Transmission{p.index_of(0)}};
              return;
            }
            method_ = Method::Volume;
            std::vector<volume::Component> comps;
            for (int c = 0; c < n_curves; ++c) {
              comps.push_back({model_.curves[static_cast<std::size_t>(c)], p.index_of(static_cast<std::size_t>(c))});
            }
            volume_ = std::make_shared<const volume::LippmannSchwinger>(std::move(comps), k_, p.volume);
          },
      },
      model_.physics);

  if (method_ == Method::Boundary) {
    lu_.compute(system_);
    // PartialPivLU does not flag singular systems; check the pivots.
    const auto& diag = lu_.matrixLU().diagonal();
    const double scale = system_.cwiseAbs().maxCoeff();
    if (!(diag.cwiseAbs().minCoeff() > 1e-14 * scale)) throw ComputeError("boundary system is numerically singular");
  }
}

Vector Solver::boundary_rhs(const IncidentField& incident) const {
  if (method_ != Method::Boundary) throw ValidationError("boundary right-hand side requested for a non-boundary model");
  const int n = boundary_->size();
  Vector rhs(n);
  const bool dirichlet = std::holds_alternative<Dirichlet>(model_.physics);
  for (int i = 0; i < n; ++i) {
    const auto& nd = boundary_->node(i);
    const IncidentSample s = incident.sample(nd.point);
    if (dirichlet) {
      rhs(i) = -s.value;
    } else {
      const Complex dn = s.d1 * nd.normal.x1 + s.d2 * nd.normal.x2;
      rhs(i) = -(dn + kI * k_ * eta_(i) * s.value) * row_scale_(i);
    }
  }
  return rhs;
}

Matrix Solver::trace_matrix() const {
  if (method_ != Method::Boundary) throw ValidationError("trace matrix requested for a non-boundary model");
  Matrix trace = layers_.double_layer - kI * coupling() * layers_.single;
  trace.diagonal().array() += 0.5;
  return trace;
}

Solution Solver::solve(const IncidentField& incident) const {
  switch (method_) {
    case Method::None:
      return EmptySolution{k_};
    case Method::Boundary: {
      const Vector rhs = boundary_rhs(incident);
      BoundarySolution sol;
      sol.boundary = boundary_;
      sol.k = k_;
      sol.coupling = coupling();
      sol.density = lu_.solve(rhs);
      const double rhs_norm = rhs.norm();
      sol.residual = rhs_norm > 0.0 ? (system_ * sol.density - rhs).norm() / rhs_norm : 0.0;
      if (!(sol.residual <= 1e-10)) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "boundary solve residual %.3e exceeds 1e-10", sol.residual);
        throw ComputeError(msg);
      }
      return sol;
    }
    case Method::Volume: {
      Vector inc(volume_->size());
      const auto nodes = volume_->nodes();
      for (int i = 0; i < volume_->size(); ++i) inc(i) = incident.sample(nodes[static_cast<std::size_t>(i)]).value;
      VolumeSolution sol;
      sol.solver = volume_;
      sol.total = volume_->solve(inc, &sol.info);
      return sol;
    }
    case Method::Series: {
      if (!incident.expansion) throw ValidationError("series solver needs an incident field with a wave expansion");
      const int order = disk::truncation_order(k_, disk_.radius);
      const std::vector<Complex> coeffs = incident.expansion(disk_.center, order);
      return SeriesSolution{disk::SeriesField(disk_, k_, coeffs)};
    }
  }
  throw ComputeError("unknown solver method");
}

namespace {

Solution solve_point_source(const ScattererModel& model, double k, const Point2& source) {
  if (inside_obstacle(model, source)) throw ValidationError("source lies inside or on an obstacle");
  const Solver solver(model, k);
  return solver.solve(point_source(k, source));
}

}  // namespace

BoundarySolution solve_dirichlet(const ScattererModel& model, double k, const Point2& source) {
  if (!std::holds_alternative<Dirichlet>(model.physics)) throw ValidationError("solve_dirichlet needs Dirichlet physics");
  if (model.empty()) throw ValidationError("model has no obstacles");
  return std::get<BoundarySolution>(solve_point_source(model, k, source));
}

BoundarySolution solve_impedance(const ScattererModel& model, double k, const Point2& source) {
  if (!std::holds_alternative<Impedance>(model.physics)) throw ValidationError("solve_impedance needs impedance physics");
  if (model.empty()) throw ValidationError("model has no obstacles");
  return std::get<BoundarySolution>(solve_point_source(model, k, source));
}

Solution solve_penetrable(const ScattererModel& model, double k, const Point2& source) {
  if (!std::holds_alternative<Penetrable>(model.physics)) throw ValidationError("solve_penetrable needs penetrable physics");
  return solve_point_source(model, k, source);
}

Vector scattered_at(const Solution& solution, std::span<const Point2> points, const Parallelism& par) {
  return std::visit(
      Overloaded{
          [&](const EmptySolution&) -> Vector { return Vector::Zero(static_cast<Eigen::Index>(points.size())); },
          [&](const BoundarySolution& s) -> Vector {
            for (const auto& x : points) {
              for (const auto& c : s.boundary->curves()) {
                if (c.contains(x) || c.distance_to(x) <= 1e-9) {
                  throw ValidationError("evaluation point lies inside or on an obstacle");
                }
              }
            }
            return nystrom::combined_potential(*s.boundary, s.k, s.coupling, s.density, points, par);
          },
          [&](const VolumeSolution& s) -> Vector { return s.solver->scattered_at(s.total, points, par); },
          [&](const SeriesSolution& s) -> Vector {
            Vector out(static_cast<Eigen::Index>(points.size()));
            parallel_for(static_cast<int>(points.size()), par,
                         [&](int i) { out(i) = s.field.value(points[static_cast<std::size_t>(i)]); });
            return out;
          },
      },
      solution);
}

Vector far_field(const Solution& solution, std::span<const double> angles) {
  return std::visit(
      Overloaded{
          [&](const EmptySolution&) -> Vector { return Vector::Zero(static_cast<Eigen::Index>(angles.size())); },
          [&](const BoundarySolution& s) -> Vector {
            return nystrom::combined_far_field(*s.boundary, s.k, s.coupling, s.density, angles);
          },
          [&](const VolumeSolution& s) -> Vector { return s.solver->far_field(s.total, angles); },
          [&](const SeriesSolution& s) -> Vector {
            Vector out(static_cast<Eigen::Index>(angles.size()));
            for (std::size_t a = 0; a < angles.size(); ++a) out(static_cast<Eigen::Index>(a)) = s.field.far_field(angles[a]);
            return out;
          },
      },
      solution);
}

BoundaryTrace boundary_trace(const BoundarySolution& solution, int curve, double theta) {
  const nystrom::OperatorRows rows = nystrom::rows_at(*solution.boundary, solution.k, curve, theta);
  const Complex interp = (rows.interpolation.cast<Complex>() * solution.density)(0);
  const Complex ic = kI * solution.coupling;
  const Complex value = 0.5 * interp + (rows.double_layer * solution.density)(0) - ic * (rows.single * solution.density)(0);
  const Complex dn =
      (rows.hypersingular * solution.density)(0) + ic * (0.5 * interp - (rows.adjoint * solution.density)(0));
  return {value, dn};
}

}  // namespace rtm::forward
