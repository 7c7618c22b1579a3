// hgt: run one experiment described by a JSON config and write a JSON report.

#include <cstdint>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "hgt/commands.hpp"
#include "hgt/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Transport, extraction and action checks for higher gauge fields"};
  std::string config_path, out_path;
  std::uint64_t seed = 0;
  int steps = 0;
  app.add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "report path (default stdout)");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* steps_opt = app.add_option("--steps", steps, "override every integrator step count")->check(CLI::Range(8, 1 << 20));
  app.set_version_flag("--version", hgt::kVersion);
  CLI11_PARSE(app, argc, argv);

  try {
    hgt::ExperimentConfig cfg = hgt::ExperimentConfig::from_file(config_path);
    if (*seed_opt) cfg.override_seed(seed);
    if (*steps_opt) cfg.override_steps(steps);
    const hgt::Json report = hgt::run_command(cfg);
    const std::string text = hgt::dump_report(report);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "hgt: cannot write " << out_path << "\n";
        return 2;
      }
      out << text;
    }
    return hgt::all_pass(report) ? 0 : 1;
  } catch (const hgt::ConfigError& e) {
    std::cerr << "hgt: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hgt: " << e.what() << "\n";
    return 3;
  }
}
