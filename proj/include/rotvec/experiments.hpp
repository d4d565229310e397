#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rotvec/config.hpp"

namespace rotvec {

// One thresholded number of a report.
struct Check {
  enum class Kind { approx, at_most, at_least, within };

  std::string name;
  double value = 0.0;
  Kind kind = Kind::at_most;
  double threshold = 0.0;  // target for approx, bound otherwise, lower end for within
  double upper = 0.0;      // within only
  double tolerance = 0.0;
  std::string module;

  bool passed() const;
  std::string describe() const;
  json to_json() const;
};

Check check_approx(std::string name, double value, double target, double tol, std::string module);
Check check_at_most(std::string name, double value, double bound, double tol, std::string module);
Check check_at_least(std::string name, double value, double bound, double tol, std::string module);
Check check_within(std::string name, double value, double lo, double hi, std::string module);

struct Report {
  std::string experiment;
  std::uint64_t seed = 0;
  json config;
  json results = json::object();
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::vector<std::string> artifacts;  // relative to the output directory
  double runtime_seconds = 0.0;

  bool passed() const;
  const Check* find(const std::string& name) const;
  json to_json() const;
};

// Runs the experiment, writing report.json and the data files into out_dir
// (created if needed). Results depend only on the config, its seed and never
// on the worker count.
Report run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct CatalogEntry {
  std::string name;
  std::string anchor;
  std::string expected;
};

const std::vector<CatalogEntry>& experiment_catalog();
std::string format_catalog();

// Invariance defect of μ_{x,T} for the orbit at p1 of sin²(π p1) (any ω with
// a constant q1-speed c on that orbit), H = cos(2π q1), shift s = 1/(2c).
// The horizon T0 = (299 + 1/3)/c makes the exact defect halve when T doubles.
struct DefectHalving {
  double speed = 0.0;
  double shift = 0.0;
  double horizon = 0.0;
  double defect_t = 0.0;
  double defect_2t = 0.0;
  double bound_t = 0.0;

  double ratio() const { return defect_2t / defect_t; }
};

DefectHalving defect_halving(const PhaseSpace& space, double p1, double h, const IntegrateOptions& options = {});

}  // namespace rotvec
