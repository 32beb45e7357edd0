#pragma once

// Experiment configuration: one JSON document per experiment.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtm/forward.hpp"
#include "rtm/geometry.hpp"
#include "rtm/imaging.hpp"
#include "rtm/msr.hpp"

namespace rtm::cli {

struct Modes {
  bool imag = true;
  bool real = false;
  bool reference = false;
  bool multifrequency = false;

  friend bool operator==(const Modes&, const Modes&) = default;
};

struct SectionSpec {
  imaging::Axis axis = imaging::Axis::X1;
  double coordinate = 0.0;

  friend bool operator==(const SectionSpec&, const SectionSpec&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  forward::ScattererModel scene;
  geometry::AcquisitionGeometry acquisition;
  std::vector<double> wavelengths;
  geometry::SamplingGrid grid;
  std::optional<msr::NoiseSpec> noise;
  std::vector<double> noise_levels{0.1, 0.2, 0.4, 0.6};  // rows of the noise table
  Modes modes;
  std::vector<SectionSpec> sections;
  std::string output_directory = "out";
  bool csv = false;
  /// Free-form notes recording choices for parameters the source experiment leaves open.
  std::vector<std::string> notes;

  /// Obstacles inside the grid, grid strictly inside both transducer circles, wavelengths positive.
  void validate() const;
  double wavenumber(std::size_t index) const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

/// Canonical serialized form; its CRC32 identifies the configuration in manifests.
std::string canonical_text(const ExperimentConfig& config);

}  // namespace rtm::cli
