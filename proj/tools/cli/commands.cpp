#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <zlib.h>

#include "rtm/errors.hpp"
#include "rtm/metrics.hpp"
#include "rtm/msr.hpp"
#include "rtm/reference.hpp"
#include "rtm/specfun.hpp"

namespace rtm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint32_t crc_of(const std::string& bytes) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

fs::path output_dir(const ExperimentConfig& config, const RunOptions& options) {
  fs::path dir = options.out_dir.empty() ? fs::path(config.output_directory) : options.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json file_entry(const fs::path& path) {
  return {{"file", path.filename().string()}, {"crc32", file_crc32(path)}};
}

std::string format_coordinate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Writes the image, its optional CSV and requested cross-sections; returns the written paths.
std::vector<fs::path> emit_image(const imaging::Image& image, const fs::path& dir, const std::string& stem,
                                 const ExperimentConfig& config, bool csv) {
  std::vector<fs::path> written;
  const fs::path file = dir / (stem + ".rtmi");
  imaging::save_image(image, file);
  written.push_back(file);
  if (csv) {
    const fs::path csv_file = dir / (stem + ".csv");
    imaging::write_csv(image, csv_file);
    written.push_back(csv_file);
  }
  for (const auto& s : config.sections) {
    const std::string axis = s.axis == imaging::Axis::X1 ? "x1" : "x2";
    const fs::path section_file = dir / ("section_" + stem + "_" + axis + "_" + format_coordinate(s.coordinate) + ".csv");
    imaging::write_section_csv(imaging::cross_section(image, s.axis, s.coordinate), section_file);
    written.push_back(section_file);
  }
  return written;
}

json manifest_base(const ExperimentConfig& config) {
  return {{"experiment", config.name}, {"config_crc32", crc_of(canonical_text(config))}};
}

std::vector<fs::path> inputs_from_manifest(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.json";
  std::ifstream in(manifest);
  if (!in) throw IoError("no data files given and no manifest at '" + manifest.string() + "'");
  std::vector<fs::path> files;
  try {
    const json j = json::parse(in);
    for (const auto& f : j.at("files")) files.push_back(dir / f.at("file").get<std::string>());
  } catch (const json::exception& e) {
    throw IoError("malformed manifest '" + manifest.string() + "': " + e.what());
  }
  return files;
}

}  // namespace

std::uint32_t file_crc32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return crc_of(bytes);
}

std::vector<fs::path> cmd_synth(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const fs::path dir = output_dir(config, options);
  json manifest = manifest_base(config);
  manifest["files"] = json::array();
  std::vector<fs::path> written;
  for (std::size_t i = 0; i < config.wavelengths.size(); ++i) {
    const double k = config.wavenumber(i);
    msr::MsrMatrix data = msr::synthesize_msr(config.scene, config.acquisition, k, options.par);
    json entry;
    if (config.noise) {
      msr::NoiseSpec spec = *config.noise;
      if (options.seed) spec.seed = *options.seed;
      spec.seed += i;  // distinct draws per wavelength
      data = msr::add_noise(data, spec);
      entry["noise"] = {{"mu", spec.mu}, {"seed", spec.seed}};
    }
    const fs::path file = dir / ("msr_" + std::to_string(i) + ".rtmd");
    msr::save_msr(data, file);
    entry.update(file_entry(file));
    entry["wavelength"] = config.wavelengths[i];
    entry["k"] = k;
    manifest["files"].push_back(entry);
    written.push_back(file);
  }
  const fs::path manifest_file = dir / "manifest.json";
  write_text(manifest_file, manifest.dump(2) + "\n");
  written.push_back(manifest_file);
  return written;
}

std::vector<fs::path> cmd_image(const ExperimentConfig& config, std::vector<fs::path> inputs,
                                const RunOptions& options) {
  config.validate();
  const fs::path dir = output_dir(config, options);
  if (inputs.empty()) inputs = inputs_from_manifest(dir);
  const bool csv = options.csv || config.csv;

  json manifest = manifest_base(config);
  manifest["images"] = json::array();
  std::vector<fs::path> written;
  std::vector<imaging::Image> imag_images;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const msr::MsrMatrix data = msr::load_msr(inputs[i]);
    if (!(data.acquisition == config.acquisition)) {
      throw ValidationError("'" + inputs[i].string() + "' was recorded with a different acquisition geometry");
    }
    const imaging::Correlation corr = imaging::correlate(data, config.grid, options.par);
    const std::string index = std::to_string(i);
    if (config.modes.imag || config.modes.multifrequency) {
      imaging::Image img = imaging::imaginary_image(corr);
      if (config.modes.imag) {
        for (auto& p : emit_image(img, dir, "image_imag_" + index, config, csv)) written.push_back(p);
      }
      imag_images.push_back(std::move(img));
    }
    if (config.modes.real) {
      for (auto& p : emit_image(imaging::real_image(corr), dir, "image_real_" + index, config, csv)) {
        written.push_back(p);
      }
    }
  }
  if (config.modes.multifrequency && imag_images.size() > 1) {
    for (auto& p : emit_image(imaging::multi_frequency_image(imag_images), dir, "image_multifrequency", config, csv)) {
      written.push_back(p);
    }
  }
  for (const auto& p : written) manifest["images"].push_back(file_entry(p));
  const fs::path manifest_file = dir / "image_manifest.json";
  write_text(manifest_file, manifest.dump(2) + "\n");
  written.push_back(manifest_file);
  return written;
}

std::vector<fs::path> cmd_reference(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  if (config.scene.empty()) throw ValidationError("limit images need at least one obstacle");
  const fs::path dir = output_dir(config, options);
  const bool csv = options.csv || config.csv;
  json manifest = manifest_base(config);
  manifest["images"] = json::array();
  std::vector<fs::path> written;
  for (std::size_t i = 0; i < config.wavelengths.size(); ++i) {
    reference::ReferenceOptions ro;
    ro.par = options.par;
    const auto img = reference::theorem_image(config.scene, config.grid, config.wavenumber(i), ro);
    for (auto& p : emit_image(img.as_image(), dir, "reference_" + std::to_string(i), config, csv)) {
      written.push_back(p);
    }
  }
  for (const auto& p : written) manifest["images"].push_back(file_entry(p));
  const fs::path manifest_file = dir / "reference_manifest.json";
  write_text(manifest_file, manifest.dump(2) + "\n");
  written.push_back(manifest_file);
  return written;
}

std::string cmd_compare(const fs::path& a_path, const fs::path& b_path, const CompareOptions& options) {
  const imaging::Image a = imaging::load_image(a_path);
  const imaging::Image b = imaging::load_image(b_path);
  if (!(a.grid == b.grid)) throw ValidationError("images are on different grids");
  const auto peak_json = [](const metrics::Peak& p) {
    return json{{"x1", p.location.x1}, {"x2", p.location.x2}, {"value", p.value}};
  };
  json report = {
      {"a", a_path.string()},
      {"b", b_path.string()},
      {"sup_difference", metrics::sup_difference(a, b)},
      {"relative_sup_difference", metrics::relative_sup_difference(a, b)},
      {"normalized_cross_correlation", metrics::normalized_cross_correlation(a, b)},
      {"peak_a", peak_json(metrics::peak(a))},
      {"peak_b", peak_json(metrics::peak(b))},
  };
  if (options.section) {
    const auto sa = imaging::cross_section(a, options.section->axis, options.section->coordinate);
    const auto sb = imaging::cross_section(b, options.section->axis, options.section->coordinate);
    const auto width = [&](const std::vector<imaging::SectionPoint>& s) -> json {
      try {
        return metrics::fwhm(s, options.window_lo, options.window_hi);
      } catch (const ComputeError&) {
        return nullptr;  // no resolvable half-maximum width
      }
    };
    report["section"] = {
        {"axis", options.section->axis == imaging::Axis::X1 ? "x1" : "x2"},
        {"coordinate", options.section->coordinate},
        {"peak_position_a", metrics::section_peak(sa, options.window_lo, options.window_hi)},
        {"peak_position_b", metrics::section_peak(sb, options.window_lo, options.window_hi)},
        {"fwhm_a", width(sa)},
        {"fwhm_b", width(sb)},
    };
  }
  return report.dump(2);
}

std::string cmd_noise_table(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const std::uint64_t base_seed = options.seed ? *options.seed : (config.noise ? config.noise->seed : 0);
  std::vector<msr::MsrMatrix> clean;
  for (std::size_t i = 0; i < config.wavelengths.size(); ++i) {
    clean.push_back(msr::synthesize_msr(config.scene, config.acquisition, config.wavenumber(i), options.par));
  }
  const double n = static_cast<double>(clean.size());
  std::ostringstream table;
  std::ostringstream csv;
  table << "mu\tsigma\t||u_s||\t||nu||\n";
  csv << "mu,sigma,l2_signal,l2_noise\n";
  char line[160];
  for (double mu : config.noise_levels) {
    double sigma = 0.0;
    double signal = 0.0;
    double noise = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      const msr::MsrMatrix noisy = msr::add_noise(clean[i], {mu, base_seed + i});
      const msr::NoiseStats st = msr::noise_stats(clean[i], noisy, mu);
      sigma += st.table_sigma / n;
      signal += st.l2_signal / n;
      noise += st.l2_noise / n;
    }
    std::snprintf(line, sizeof line, "%.1f\t%.6f\t%.6f\t%.6f\n", mu, sigma, signal, noise);
    table << line;
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", mu, sigma, signal, noise);
    csv << line;
  }
  if (!options.out_dir.empty()) {
    write_text(output_dir(config, options) / "noise_table.csv", csv.str());
  }
  return table.str();
}

}  // namespace rtm::cli
