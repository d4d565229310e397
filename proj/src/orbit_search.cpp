#include "rotvec/orbit_search.hpp"

#include <cmath>

#include "rotvec/errors.hpp"
#include "rotvec/parallel.hpp"

namespace rotvec {

nlohmann::json ConvergenceReport::to_json() const {
  return {{"horizons", horizons}, {"best_values", best_values}, {"diffs", diffs},
          {"tolerance", tolerance}, {"converged", converged}};
}

double OrbitSearchResult::best_abs() const { return std::abs(best_value); }

nlohmann::json OrbitSearchResult::to_json() const {
  nlohmann::json j = report.to_json();
  j["best_seed"] = best_seed;
  j["best_x0"] = best_x0.lift;
  j["best_value"] = best_value;
  return j;
}

namespace {

// Running trapezoid integral of α(v) along one orbit on the grid t = k h.
struct SeedState {
  std::vector<double> x;
  std::size_t steps = 0;
  double integral = 0.0;
  double last = 0.0;  // integrand at the current node
};

double integrand(const VectorField& field, const ClosedOneForm& alpha, std::span<const double> x, double t) {
  thread_local std::vector<double> v, a;
  v.resize(x.size());
  a.resize(x.size());
  field.eval(x, t, v);
  alpha.coefficients(x, a);
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += a[j] * v[j];
  return s;
}

std::vector<PhasePoint> product_grid(const PhaseSpace& space, std::size_t dims, std::size_t per_dim, double lo,
                                     double hi) {
  if (per_dim == 0) throw InvalidArgument("seed grid needs at least one point per dimension");
  std::size_t total = 1;
  for (std::size_t i = 0; i < dims; ++i) total *= per_dim;
  std::vector<PhasePoint> seeds;
  seeds.reserve(total);
  std::vector<std::size_t> idx(dims, 0);
  const std::size_t n = space.half_dim();
  for (std::size_t g = 0; g < total; ++g) {
    std::vector<double> x(space.dim(), 0.0);
    for (std::size_t i = 0; i < dims; ++i) {
      const double u = static_cast<double>(idx[i]) / static_cast<double>(per_dim);
      const bool momentum = i < n;
      x[i] = momentum ? lo + (hi - lo) * u : u;
    }
    seeds.push_back(wrap(x, space));
    for (std::size_t i = dims; i-- > 0;) {
      if (++idx[i] < per_dim) break;
      idx[i] = 0;
    }
  }
  return seeds;
}

}  // namespace

OrbitSearchResult extremal_orbit_search(const HamiltonianSpec& f, const ClosedOneForm& alpha,
                                        const PhaseSpace& space, const std::vector<PhasePoint>& seeds,
                                        const OrbitSearchOptions& options) {
  if (seeds.empty()) throw InvalidArgument("orbit search needs at least one seed");
  if (!(options.T0 > 0.0) || !(options.h > 0.0) || options.T_max < options.T0) {
    throw InvalidArgument("orbit search needs 0 < T0 <= T_max and h > 0");
  }
  const VectorField field = VectorField::hamiltonian(space, f);
  const double t0 = options.integrate.start_time;
  const double h = options.h;

  std::vector<SeedState> states(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i].dim() != space.dim()) throw DimensionError("seed has wrong dimension");
    states[i].x = seeds[i].lift;
    states[i].last = integrand(field, alpha, states[i].x, t0);
  }

  OrbitSearchResult result;
  result.report.tolerance = options.tol;
  std::vector<double> values(seeds.size());
  for (double T = options.T0; T <= options.T_max * (1.0 + 1e-12); T *= 2.0) {
    const std::size_t full = static_cast<std::size_t>(std::floor(T / h * (1.0 + 1e-12)));
    parallel_for(seeds.size(), options.jobs, [&](std::size_t i) {
      SeedState& st = states[i];
      FlowStepper stepper(field, options.integrate);
      for (; st.steps < full; ++st.steps) {
        const double t = t0 + static_cast<double>(st.steps) * h;
        stepper.step(st.x, t, h);
        const double next = integrand(field, alpha, st.x, t + h);
        st.integral += 0.5 * h * (st.last + next);
        st.last = next;
      }
      double integral = st.integral;
      const double rest = T - static_cast<double>(full) * h;
      if (rest > 1e-12 * T) {
        std::vector<double> y = st.x;
        const double t = t0 + static_cast<double>(full) * h;
        stepper.step(y, t, rest);
        integral += 0.5 * rest * (st.last + integrand(field, alpha, y, t + rest));
      }
      values[i] = integral / T;
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (std::abs(values[i]) > std::abs(values[best])) best = i;
    }
    result.best_seed = best;
    result.best_value = values[best];
    auto& rep = result.report;
    rep.horizons.push_back(T);
    rep.best_values.push_back(std::abs(values[best]));
    if (rep.best_values.size() > 1) {
      rep.diffs.push_back(std::abs(rep.best_values.back() - rep.best_values[rep.best_values.size() - 2]));
      if (rep.diffs.back() <= options.tol) {
        rep.converged = true;
        break;
      }
    }
  }
  result.best_x0 = seeds[result.best_seed];
  result.seed_values = values;
  return result;
}

std::vector<PhasePoint> momentum_seed_grid(const PhaseSpace& space, std::size_t per_dim, double lo, double hi) {
  return product_grid(space, space.half_dim(), per_dim, lo, hi);
}

std::vector<PhasePoint> full_seed_grid(const PhaseSpace& space, std::size_t per_dim, double lo, double hi) {
  return product_grid(space, space.dim(), per_dim, lo, hi);
}

}  // namespace rotvec
