#include "cli/config.hpp"

#include <cmath>
#include <fstream>

#include "rtm/errors.hpp"

namespace rtm::cli {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

Point2 point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("points are written as [x1, x2]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json point_json(const Point2& p) { return json::array({p.x1, p.x2}); }

geometry::CurveKind curve_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "circle") {
    return geometry::Circle{j.at("radius").get<double>(), point_from(j.value("center", json::array({0.0, 0.0})))};
  }
  if (type == "kite") {
    return geometry::Kite{point_from(j.value("center", json::array({0.0, 0.0}))), j.value("scale", 1.0)};
  }
  if (type == "pleaf") {
    return geometry::PLeaf{j.at("p").get<int>(), point_from(j.value("center", json::array({0.0, 0.0}))),
                           j.value("scale", 1.0)};
  }
  throw ValidationError("unknown curve type '" + type + "'");
}

json curve_json(const geometry::CurveKind& c) {
  return std::visit(Overloaded{
                        [](const geometry::Circle& x) -> json {
                          return {{"type", "circle"}, {"radius", x.radius}, {"center", point_json(x.center)}};
                        },
                        [](const geometry::Kite& x) -> json {
                          return {{"type", "kite"}, {"center", point_json(x.center)}, {"scale", x.scale}};
                        },
                        [](const geometry::PLeaf& x) -> json {
                          return {{"type", "pleaf"}, {"p", x.p}, {"center", point_json(x.center)}, {"scale", x.scale}};
                        },
                    },
                    c);
}

forward::VolumeMethod method_from(const std::string& s) {
  if (s == "auto") return forward::VolumeMethod::Auto;
  if (s == "series") return forward::VolumeMethod::Series;
  if (s == "lippmann-schwinger") return forward::VolumeMethod::LippmannSchwinger;
  throw ValidationError("unknown penetrable method '" + s + "'");
}

std::string method_name(forward::VolumeMethod m) {
  switch (m) {
    case forward::VolumeMethod::Auto:
      return "auto";
    case forward::VolumeMethod::Series:
      return "series";
    case forward::VolumeMethod::LippmannSchwinger:
      return "lippmann-schwinger";
  }
  return "auto";
}

forward::Physics physics_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "dirichlet") return forward::Dirichlet{};
  if (type == "neumann") return forward::Impedance{};
  if (type == "impedance") {
    forward::Impedance imp;
    if (j.contains("eta_upper") || j.contains("eta_lower")) {
      imp.split = true;
      imp.eta_upper = j.at("eta_upper").get<double>();
      imp.eta_lower = j.at("eta_lower").get<double>();
    } else {
      imp.eta = j.at("eta").get<double>();
    }
    return imp;
  }
  if (type == "penetrable") {
    forward::Penetrable p;
    const json& idx = j.at("index");
    p.index = idx.is_array() ? idx.get<std::vector<double>>() : std::vector<double>{idx.get<double>()};
    p.method = method_from(j.value("method", std::string("auto")));
    p.volume.radial_nodes = j.value("radial_nodes", 0);
    p.volume.angular_nodes = j.value("angular_nodes", 0);
    return p;
  }
  throw ValidationError("unknown physics type '" + type + "'");
}

json physics_json(const forward::Physics& physics) {
  return std::visit(Overloaded{
                        [](const forward::Dirichlet&) -> json { return {{"type", "dirichlet"}}; },
                        [](const forward::Impedance& imp) -> json {
                          if (imp.split) {
                            return {{"type", "impedance"}, {"eta_upper", imp.eta_upper}, {"eta_lower", imp.eta_lower}};
                          }
                          return {{"type", "impedance"}, {"eta", imp.eta}};
                        },
                        [](const forward::Penetrable& p) -> json {
                          json out = {{"type", "penetrable"}, {"index", p.index}, {"method", method_name(p.method)}};
                          if (p.volume.radial_nodes > 0) out["radial_nodes"] = p.volume.radial_nodes;
                          if (p.volume.angular_nodes > 0) out["angular_nodes"] = p.volume.angular_nodes;
                          return out;
                        },
                    },
                    physics);
}

imaging::Axis axis_from(const std::string& s) {
  if (s == "x1") return imaging::Axis::X1;
  if (s == "x2") return imaging::Axis::X2;
  throw ValidationError("section axis must be 'x1' or 'x2'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (name.empty()) throw ValidationError("experiment name must not be empty");
  scene.validate();
  acquisition.validate();
  grid.validate();
  if (wavelengths.empty()) throw ValidationError("at least one wavelength is required");
  for (double w : wavelengths) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("wavelengths must be positive");
  }
  imaging::check_grid(grid, acquisition);
  for (const auto& c : scene.curves) {
    const geometry::BoundaryCurve probe(c, 256);
    for (const auto& nd : probe.nodes()) {
      if (!grid.contains(nd.point)) throw ValidationError("obstacle extends outside the sampling domain");
    }
  }
  if (noise) noise->validate();
  for (double mu : noise_levels) {
    if (!(mu >= 0.0)) throw ValidationError("noise levels must be nonnegative");
  }
  for (const auto& s : sections) {
    const bool inside = s.axis == imaging::Axis::X1 ? (s.coordinate >= grid.x1_min && s.coordinate <= grid.x1_max)
                                                    : (s.coordinate >= grid.x2_min && s.coordinate <= grid.x2_max);
    if (!inside) throw ValidationError("cross-section coordinate outside the sampling domain");
  }
}

double ExperimentConfig::wavenumber(std::size_t index) const { return kTwoPi / wavelengths.at(index); }

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    const json& scene = j.at("scene");
    for (const auto& cj : scene.at("curves")) c.scene.curves.push_back(curve_from(cj));
    c.scene.physics = physics_from(scene.at("physics"));
    c.scene.points_per_wavelength = scene.value("points_per_wavelength", 10.0);

    const json& acq = j.at("acquisition");
    const double radius = acq.value("radius", 10.0);
    const int count = acq.value("count", 64);
    c.acquisition.source_radius = acq.value("source_radius", radius);
    c.acquisition.receiver_radius = acq.value("receiver_radius", radius);
    c.acquisition.n_sources = acq.value("n_sources", count);
    c.acquisition.n_receivers = acq.value("n_receivers", count);
    c.acquisition.center = point_from(acq.value("center", json::array({0.0, 0.0})));

    c.wavelengths = j.at("wavelengths").get<std::vector<double>>();

    const json& g = j.at("grid");
    c.grid = {g.at("x1_min").get<double>(), g.at("x1_max").get<double>(), g.at("x2_min").get<double>(),
              g.at("x2_max").get<double>(), g.at("n1").get<int>(), g.at("n2").get<int>()};

    if (j.contains("noise") && !j["noise"].is_null()) {
      c.noise = msr::NoiseSpec{j["noise"].at("mu").get<double>(), j["noise"].value("seed", std::uint64_t{0})};
    }
    c.noise_levels = j.value("noise_levels", c.noise_levels);

    if (j.contains("modes")) {
      const json& m = j["modes"];
      c.modes.imag = m.value("imag", true);
      c.modes.real = m.value("real", false);
      c.modes.reference = m.value("reference", false);
      c.modes.multifrequency = m.value("multifrequency", false);
    }
    for (const auto& s : j.value("sections", json::array())) {
      c.sections.push_back({axis_from(s.at("axis").get<std::string>()), s.at("coordinate").get<double>()});
    }
    if (j.contains("outputs")) {
      c.output_directory = j["outputs"].value("directory", c.output_directory);
      c.csv = j["outputs"].value("csv", false);
    }
    c.notes = j.value("notes", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

json to_json(const ExperimentConfig& c) {
  json curves = json::array();
  for (const auto& cv : c.scene.curves) curves.push_back(curve_json(cv));
  json sections = json::array();
  for (const auto& s : c.sections) {
    sections.push_back({{"axis", s.axis == imaging::Axis::X1 ? "x1" : "x2"}, {"coordinate", s.coordinate}});
  }
  json out = {
      {"name", c.name},
      {"scene",
       {{"curves", curves},
        {"physics", physics_json(c.scene.physics)},
        {"points_per_wavelength", c.scene.points_per_wavelength}}},
      {"acquisition",
       {{"source_radius", c.acquisition.source_radius},
        {"receiver_radius", c.acquisition.receiver_radius},
        {"n_sources", c.acquisition.n_sources},
        {"n_receivers", c.acquisition.n_receivers},
        {"center", point_json(c.acquisition.center)}}},
      {"wavelengths", c.wavelengths},
      {"grid",
       {{"x1_min", c.grid.x1_min},
        {"x1_max", c.grid.x1_max},
        {"x2_min", c.grid.x2_min},
        {"x2_max", c.grid.x2_max},
        {"n1", c.grid.n1},
        {"n2", c.grid.n2}}},
      {"noise_levels", c.noise_levels},
      {"modes",
       {{"imag", c.modes.imag},
        {"real", c.modes.real},
        {"reference", c.modes.reference},
        {"multifrequency", c.modes.multifrequency}}},
      {"sections", sections},
      {"outputs", {{"directory", c.output_directory}, {"csv", c.csv}}},
      {"notes", c.notes},
  };
  out["noise"] = c.noise ? json{{"mu", c.noise->mu}, {"seed", c.noise->seed}} : json(nullptr);
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open configuration '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("configuration '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

std::string canonical_text(const ExperimentConfig& config) { return to_json(config).dump(); }

}  // namespace rtm::cli
