#pragma once

#include <cstddef>
#include <vector>

#include "rotvec/geometry.hpp"
#include "rotvec/integrator.hpp"

namespace rotvec {

struct OrbitSearchOptions {
  double T0 = 100.0;
  double T_max = 1e5;
  double h = 1e-2;
  double tol = 1e-4;
  IntegrateOptions integrate;
  std::size_t jobs = 0;
};

// Best |pairing| at each horizon T0, 2 T0, ... and the change between
// consecutive horizons.
struct ConvergenceReport {
  double tolerance = 0.0;
  std::vector<double> horizons;
  std::vector<double> best_values;
  std::vector<double> diffs;
  bool converged = false;

  nlohmann::json to_json() const;
};

struct OrbitSearchResult {
  std::size_t best_seed = 0;
  PhasePoint best_x0;
  double best_value = 0.0;              // signed pairing of the winner
  std::vector<double> seed_values;      // signed pairings at the final horizon
  ConvergenceReport report;

  double best_abs() const;
  nlohmann::json to_json() const;
};

// Maximizes |∫ α(sgrad F) dμ_{x,T}| over the seeds, doubling T until the best
// value moves by at most `tol` or T_max is reached. Orbits are continued,
// not restarted, when T doubles. Ties go to the lowest seed index.
OrbitSearchResult extremal_orbit_search(const HamiltonianSpec& f, const ClosedOneForm& alpha,
                                        const PhaseSpace& space, const std::vector<PhasePoint>& seeds,
                                        const OrbitSearchOptions& options = {});

// per_dim^n points with p on [lo, hi) and q = 0.
std::vector<PhasePoint> momentum_seed_grid(const PhaseSpace& space, std::size_t per_dim, double lo = 0.0,
                                           double hi = 1.0);
// per_dim^{2n} points; momenta of T*T^n sampled on [lo, hi).
std::vector<PhasePoint> full_seed_grid(const PhaseSpace& space, std::size_t per_dim, double lo = 0.0,
                                       double hi = 1.0);

}  // namespace rotvec
