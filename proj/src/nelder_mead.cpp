#include "rotvec/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "rotvec/errors.hpp"

namespace rotvec {

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, std::span<const double> step,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (step.size() != n) throw DimensionError("simplex step size mismatch");

  NelderMeadResult result;
  if (n == 0) {
    result.value = f(x0);
    result.evaluations = 1;
    result.x = std::move(x0);
    result.converged = true;
    return result;
  }

  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = options.adaptive ? 1.0 + 2.0 / dn : 2.0;
  const double rho = options.adaptive ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
  const double sigma = options.adaptive ? 1.0 - 1.0 / dn : 0.5;

  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto point = [&](double t, const std::vector<double>& from, std::vector<double>& out) {
    // out = centroid + t (from - centroid)
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (from[j] - centroid[j]);
  };

  while (evals < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[best][j]));
    }
    if (std::isfinite(values[worst]) && values[worst] - values[best] <= options.f_tol && diameter <= options.x_tol) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = simplex[order[i]];
      for (std::size_t j = 0; j < n; ++j) centroid[j] += v[j] / dn;
    }

    point(-alpha, simplex[worst], xr);
    const double fr = eval(xr);
    if (fr < values[best]) {
      point(-alpha * gamma, simplex[worst], xe);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    if (fr < values[worst]) {
      point(-alpha * rho, simplex[worst], xc);  // outside contraction
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[worst] = xc;
        values[worst] = fc;
        continue;
      }
    } else {
      point(rho, simplex[worst], xc);  // inside contraction
      const double fc = eval(xc);
      if (fc < values[worst]) {
        simplex[worst] = xc;
        values[worst] = fc;
        continue;
      }
    }
    // shrink towards the best vertex
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
      if (evals >= options.max_evaluations) break;
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_idx = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best_idx];
  result.value = *best_it;
  result.evaluations = evals;
  return result;
}

}  // namespace rotvec

namespace rotvec {

RestartResult minimize_with_restarts(const Objective& f, std::vector<double> x0, std::span<const double> scale,
                                     const RestartOptions& options) {
  if (scale.size() != x0.size()) throw DimensionError("restart scale size mismatch");
  RestartResult out;
  out.x = x0;
  out.value = std::numeric_limits<double>::infinity();
  NelderMeadOptions nm;
  nm.max_evaluations = options.max_evaluations;
  nm.adaptive = options.adaptive;
  std::vector<double> step(x0.size());
  for (std::size_t j = 0; j < step.size(); ++j) step[j] = options.perturbation * scale[j];

  for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
    std::vector<double> start = out.x;
    if (r > 0) {
      std::mt19937_64 gen(options.seed + r);
      std::normal_distribution<double> normal;
      for (std::size_t j = 0; j < start.size(); ++j) start[j] += step[j] * normal(gen);
    }
    const NelderMeadResult res = nelder_mead(f, std::move(start), step, nm);
    out.evaluations += res.evaluations;
    if (res.value < out.value) {
      out.value = res.value;
      out.x = res.x;
    }
    out.restart_values.push_back(out.value);
  }
  return out;
}

}  // namespace rotvec
