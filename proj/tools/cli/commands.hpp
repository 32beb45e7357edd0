#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "rtm/parallel.hpp"

namespace rtm::cli {

struct RunOptions {
  std::filesystem::path out_dir;
  Parallelism par{};
  std::optional<std::uint64_t> seed;  // overrides the configured noise seed
  bool csv = false;
};

/// One .rtmd file per wavelength plus manifest.json. Returns the written paths.
std::vector<std::filesystem::path> cmd_synth(const ExperimentConfig& config, const RunOptions& options);

/// Images for the given data files (default: those listed in the synth manifest).
std::vector<std::filesystem::path> cmd_image(const ExperimentConfig& config, std::vector<std::filesystem::path> inputs,
                                             const RunOptions& options);

std::vector<std::filesystem::path> cmd_reference(const ExperimentConfig& config, const RunOptions& options);

struct CompareOptions {
  std::optional<SectionSpec> section;
  double window_lo = -1e300;
  double window_hi = 1e300;
};
/// Report JSON text comparing image a against image b.
std::string cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b, const CompareOptions& options);

/// One row per noise level: mu, sigma (mu max|u_s|), ||u_s||, ||nu||, averaged over the configured wavelengths.
std::string cmd_noise_table(const ExperimentConfig& config, const RunOptions& options);

struct SelftestOptions {
  double green_scale = 1.0;  // test hook: values other than 1 must make the identity checks fail
  Parallelism par{};
};
/// Prints one line per check to `out`; returns true when every check passes.
bool cmd_selftest(const SelftestOptions& options, std::ostream& out);

/// CRC32 of a file's bytes.
std::uint32_t file_crc32(const std::filesystem::path& path);

}  // namespace rtm::cli
