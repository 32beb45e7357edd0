#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/commands.hpp"
#include "rtm/errors.hpp"

namespace {

int report_error(const char* kind, const std::string& message, int code) {
  const nlohmann::json err = {{"error", {{"type", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << '\n';
  return code;
}

rtm::cli::SectionSpec parse_section(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw rtm::ValidationError("section must look like x1=0");
  const std::string axis = text.substr(0, eq);
  if (axis != "x1" && axis != "x2") throw rtm::ValidationError("section axis must be x1 or x2");
  try {
    return {axis == "x1" ? rtm::imaging::Axis::X1 : rtm::imaging::Axis::X2, std::stod(text.substr(eq + 1))};
  } catch (const std::logic_error&) {
    throw rtm::ValidationError("section coordinate is not a number");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic reverse-time-migration imaging: data synthesis, imaging, limit images, checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  bool csv = false;
  std::vector<std::string> inputs;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "Experiment JSON");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "Output directory (default: the config's outputs.directory)");
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  };

  auto* synth = app.add_subcommand("synth", "Synthesize MSR data files, one per wavelength");
  add_common(synth, true);
  synth->add_option("--seed", seed, "Noise seed (overrides the config)");

  auto* image = app.add_subcommand("image", "RTM images from MSR data files");
  add_common(image, true);
  image->add_option("inputs", inputs, "Data files (default: those in the synth manifest)");
  image->add_flag("--csv", csv, "Also write CSV grids");

  auto* reference = app.add_subcommand("reference", "Limit (noise-free, infinite-aperture) images");
  add_common(reference, true);
  reference->add_flag("--csv", csv, "Also write CSV grids");

  std::string image_a;
  std::string image_b;
  std::string section;
  double window_lo = -1e300;
  double window_hi = 1e300;
  auto* compare = app.add_subcommand("compare", "Compare two images on one grid");
  compare->add_option("a", image_a, "Image file")->required();
  compare->add_option("b", image_b, "Reference image file")->required();
  compare->add_option("--section", section, "Cross-section line, e.g. x1=0");
  compare->add_option("--window-lo", window_lo, "Lower end of the peak window along the section");
  compare->add_option("--window-hi", window_hi, "Upper end of the peak window along the section");
  compare->add_option("--out", out_dir, "Also write compare.json here");

  auto* noise_table = app.add_subcommand("noise-table", "Noise statistics table over the configured noise levels");
  add_common(noise_table, true);
  noise_table->add_option("--seed", seed, "Noise seed (overrides the config)");

  double green_scale = 1.0;
  auto* selftest = app.add_subcommand("selftest", "Identity and series-oracle battery at small sizes");
  selftest->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  selftest->add_option("--perturb-green", green_scale, "Test hook: scale the Green function in the identity checks")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("validation", e.what(), 2);
  }

  try {
    rtm::cli::RunOptions run;
    run.out_dir = out_dir;
    run.par.threads = threads;
    run.csv = csv;
    if (synth->parsed() && synth->count("--seed") > 0) run.seed = seed;
    if (noise_table->parsed() && noise_table->count("--seed") > 0) run.seed = seed;

    if (selftest->parsed()) {
      const bool ok = rtm::cli::cmd_selftest({green_scale, run.par}, std::cout);
      return ok ? 0 : report_error("compute", "selftest failed", 3);
    }
    if (compare->parsed()) {
      rtm::cli::CompareOptions co;
      if (!section.empty()) co.section = parse_section(section);
      co.window_lo = window_lo;
      co.window_hi = window_hi;
      const std::string report = rtm::cli::cmd_compare(image_a, image_b, co);
      std::cout << report << '\n';
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(std::filesystem::path(out_dir) / "compare.json") << report << '\n';
      }
      return 0;
    }

    const rtm::cli::ExperimentConfig config = rtm::cli::load_config(config_path);
    std::vector<std::filesystem::path> written;
    if (synth->parsed()) written = rtm::cli::cmd_synth(config, run);
    if (image->parsed()) written = rtm::cli::cmd_image(config, {inputs.begin(), inputs.end()}, run);
    if (reference->parsed()) written = rtm::cli::cmd_reference(config, run);
    if (noise_table->parsed()) std::cout << rtm::cli::cmd_noise_table(config, run);
    for (const auto& p : written) std::cout << p.string() << '\n';
    return 0;
  } catch (const rtm::ValidationError& e) {
    return report_error("validation", e.what(), 2);
  } catch (const rtm::ComputeError& e) {
    return report_error("compute", e.what(), 3);
  } catch (const rtm::IoError& e) {
    return report_error("io", e.what(), 4);
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error("io", e.what(), 4);
  } catch (const std::domain_error& e) {
    return report_error("validation", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("compute", e.what(), 3);
  }
}
