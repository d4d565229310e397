// rotvec run <config.json> [--jobs N] [--out DIR] | list | validate <config.json>
// Exit codes: 0 all thresholds passed, 1 a threshold failed, 2 execution error.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rotvec/errors.hpp"
#include "rotvec/experiments.hpp"
#include "rotvec/parallel.hpp"

namespace {

void apply_seed_override(rotvec::ExperimentConfig& cfg) {
  const char* env = std::getenv("ROTVEC_SEED");
  if (env == nullptr || *env == '\0') return;
  std::size_t used = 0;
  unsigned long long seed = 0;
  try {
    seed = std::stoull(env, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string(env).size()) throw rotvec::ConfigError("/seed", "ROTVEC_SEED is not a non-negative integer");
  cfg.seed = seed;
  cfg.params["seed"] = seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation vectors, Poisson bracket invariants and chords of Hamiltonian flows on tori"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t jobs = 0;
  auto* run = app.add_subcommand("run", "run an experiment");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--jobs", jobs, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "output directory");

  auto* list = app.add_subcommand("list", "list builtin experiments");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", validate_path, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      std::cout << rotvec::format_catalog();
      return 0;
    }
    if (*validate) {
      rotvec::ExperimentConfig cfg = rotvec::load_config(validate_path);
      apply_seed_override(cfg);
      std::cout << "ok: " << cfg.experiment << " (seed " << cfg.seed << ")\n";
      return 0;
    }
    rotvec::ExperimentConfig cfg = rotvec::load_config(config_path);
    apply_seed_override(cfg);
    if (jobs == 0 && cfg.jobs) jobs = *cfg.jobs;
    if (jobs > 0) rotvec::set_default_jobs(jobs);
    if (out_dir.empty()) out_dir = cfg.output.value_or("rotvec_out/" + cfg.experiment);

    const rotvec::Report report = rotvec::run_experiment(cfg, out_dir);
    for (const auto& c : report.checks) {
      std::cout << (c.passed() ? "PASS " : "FAIL ") << c.describe() << "  [" << c.module << "]\n";
    }
    for (const auto& n : report.notes) std::cout << "note: " << n << "\n";
    std::cout << report.experiment << ": " << (report.passed() ? "passed" : "FAILED") << " in "
              << report.runtime_seconds << " s, report in " << out_dir << "/report.json\n";
    return report.passed() ? 0 : 1;
  } catch (const rotvec::ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
