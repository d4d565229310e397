#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rotvec {

struct NelderMeadOptions {
  std::size_t max_evaluations = 2000;
  double f_tol = 1e-13;  // spread of simplex values
  double x_tol = 1e-13;  // simplex diameter (max-norm)
  // Dimension-dependent coefficients (Gao & Han); helps past ~10 parameters.
  bool adaptive = false;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Minimizes f starting from the simplex {x0, x0 + step_i e_i}. The objective
// may return +inf to mark infeasible points.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, std::span<const double> step,
                             const NelderMeadOptions& options = {});

struct RestartOptions {
  std::size_t restarts = 8;
  std::size_t max_evaluations = 2000;  // per restart
  double perturbation = 0.05;          // relative to `scale`
  std::uint64_t seed = 0;
  bool adaptive = true;
};

struct RestartResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> restart_values;  // best value after each restart
  std::size_t evaluations = 0;
};

// Chained restarts: restart 0 starts at x0, restart r > 0 at the best point so
// far plus a Gaussian kick of size perturbation * scale_j (generator seeded
// with seed + r). Sequential on purpose, so the result never depends on the
// worker count.
RestartResult minimize_with_restarts(const Objective& f, std::vector<double> x0, std::span<const double> scale,
                                     const RestartOptions& options = {});

}  // namespace rotvec
