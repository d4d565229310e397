#pragma once

#include <cstddef>
#include <optional>

#include "rotvec/integrator.hpp"
#include "rotvec/region.hpp"

namespace rotvec {

struct Chord {
  PhasePoint start;
  PhasePoint end;
  double time = 0.0;
  std::size_t seed = 0;
};

struct ChordOptions {
  double t_max = 10.0;
  double h = 1e-2;
  double time_tol = 1e-9;   // bisection width for the crossing time
  double level_tol = 1e-6;  // the remaining levels of X' must hold this well
  IntegrateOptions integrate;
  std::size_t jobs = 0;
};

struct ChordResult {
  std::optional<Chord> chord;  // empty means NotFound
  std::size_t seeds = 0;
  std::size_t seeds_with_chord = 0;
  std::vector<double> seed_times;  // +inf where no chord was found

  bool found() const { return chord.has_value(); }
  nlohmann::json to_json() const;
};

// Flows every X grid point along sgrad α and locates, by bisection, the first
// time the first fixed level of X' is crossed (mod 1 on periodic
// coordinates) with the other levels of X' also met. Minimal time wins, ties
// go to the lowest seed index. X' must be a level region.
ChordResult chord_search(const ClosedOneForm& alpha, const PhaseSpace& space, const RegionSpec& x,
                         const RegionSpec& x_prime, const ChordOptions& options = {});

}  // namespace rotvec
