#include "rotvec/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "rotvec/errors.hpp"
#include "rotvec/parallel.hpp"

namespace rotvec {

ExtendedPoint make_extended(std::span<const double> x, double r, double s, const PhaseSpace& space) {
  if (!std::isfinite(r) || !std::isfinite(s)) throw InvalidPoint("non-finite r or s");
  return {wrap(x, space), r, s};
}

SuspendedHamiltonian::SuspendedHamiltonian(PhaseSpace space, HamiltonianSpec f)
    : space_(std::move(space)), f_(std::move(f)) {
  if (f_.half_dim() != space_.half_dim()) throw DimensionError("F lives on a different space");
}

std::string ExtendedRegion::name() const { return base_.name() + " x {r=0}"; }

bool ExtendedRegion::contains(const ExtendedPoint& z, double tol) const {
  return std::abs(z.r) <= tol && base_.contains(z.base, tol);
}

std::vector<ExtendedPoint> ExtendedRegion::grid(const PhaseSpace& space, std::size_t s_per_dim) const {
  if (s_per_dim == 0) throw InvalidArgument("stab grid needs at least one s phase");
  std::vector<ExtendedPoint> out;
  out.reserve(base_.grid().size() * s_per_dim);
  for (const auto& p : base_.grid()) {
    for (std::size_t j = 0; j < s_per_dim; ++j) {
      out.push_back(make_extended(p.lift, 0.0, static_cast<double>(j) / static_cast<double>(s_per_dim), space));
    }
  }
  return out;
}

ExtendedRegion stab(const RegionSpec& x) { return ExtendedRegion(x); }

ExtendedPoint ExtendedTrajectory::at(std::size_t i, const PhaseSpace& space) const {
  return make_extended(point(i), r[i], s[i], space);
}

EmpiricalMeasure ExtendedTrajectory::projected_measure() const {
  if (size() == 0) throw EmptyTrajectory("projected measure of an empty trajectory");
  Trajectory base;
  base.dim = dim;
  base.times = times;
  base.lifts = lifts;
  base.h = times.size() > 1 ? times[1] - times[0] : 0.0;
  EmpiricalMeasure sigma = empirical_measure(base, "suspension g_t");
  sigma.times = s;
  sigma.provenance.start_time = s.front();
  return sigma;
}

void ExtendedTrajectory::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  const std::size_t n = dim / 2;
  out << "t";
  for (std::size_t i = 0; i < dim; ++i) out << "," << (i < n ? "p" : "q") << (i % n) + 1;
  out << ",r,s,H\n" << std::setprecision(17);
  for (std::size_t k = 0; k < size(); ++k) {
    out << times[k];
    for (double v : point(k)) out << "," << v;
    out << "," << r[k] << "," << s[k] << "," << energy[k] << "\n";
  }
}

ExtendedTrajectory suspension_flow(const SuspendedHamiltonian& h, const ExtendedPoint& z0, double T, double step,
                                   const IntegrateOptions& options) {
  if (!(T > 0.0) || !(step > 0.0)) throw InvalidArgument("suspension flow needs T > 0 and h > 0");
  const PhaseSpace& space = h.space();
  if (z0.base.dim() != space.dim()) throw DimensionError("extended point has wrong dimension");
  const HamiltonianSpec& f = h.f();
  const VectorField field = VectorField::hamiltonian(space, f);
  FlowStepper stepper(field, options);
  const std::size_t d = space.dim();
  const std::size_t steps = step_count(T, step);

  // Gauss-Legendre, 3 nodes on [0, 1].
  const double gl_off = 0.5 * std::sqrt(0.6);
  const double nodes[3] = {0.5 - gl_off, 0.5, 0.5 + gl_off};
  const double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  ExtendedTrajectory out;
  out.dim = d;
  out.times.reserve(steps + 1);
  out.lifts.reserve((steps + 1) * d);
  std::vector<double> x = z0.base.lift, prev(d), mid(d), scratch(d);
  double r = z0.r;
  auto record = [&](double t) {
    const double s = z0.s + t;
    const double e = f.eval(x, s) + r;
    out.times.push_back(t);
    out.lifts.insert(out.lifts.end(), x.begin(), x.end());
    out.r.push_back(r);
    out.s.push_back(s);
    out.energy.push_back(e);
    out.max_drift = std::max(out.max_drift, std::abs(e - out.energy.front()));
    out.max_abs_r = std::max(out.max_abs_r, std::abs(r));
  };
  record(0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * step;
    const double t_next = k + 1 == steps ? T : static_cast<double>(k + 1) * step;
    const double dt = t_next - t;
    prev = x;
    stepper.step(x, z0.s + t, dt);
    double integral = 0.0;
    for (int q = 0; q < 3; ++q) {
      for (std::size_t i = 0; i < d; ++i) mid[i] = prev[i] + nodes[q] * (x[i] - prev[i]);
      double dfds = 0.0;
      f.differential(mid, z0.s + t + nodes[q] * dt, scratch, &dfds);
      integral += weights[q] * dfds;
    }
    r -= dt * integral;
    if (!std::isfinite(r)) throw BlowUp("non-finite r at t = " + std::to_string(t_next));
    record(t_next);
  }
  return out;
}

double shift_equivariance_check(const SuspendedHamiltonian& h, const ExtendedPoint& z0, double c, double T,
                                double step, const IntegrateOptions& options) {
  ExtendedPoint shifted = z0;
  shifted.r += c;
  const ExtendedTrajectory a = suspension_flow(h, shifted, T, step, options);
  const ExtendedTrajectory b = suspension_flow(h, z0, T, step, options);
  const std::size_t last = a.size() - 1;
  double dist = std::abs(a.r[last] - (b.r[last] + c));
  dist = std::max(dist, std::abs(a.s[last] - b.s[last]));
  for (std::size_t i = 0; i < a.dim; ++i) dist = std::max(dist, std::abs(a.point(last)[i] - b.point(last)[i]));
  return dist;
}

nlohmann::json TimeOnePairing::to_json() const {
  return {{"loop", loop},
          {"double_integral", double_integral},
          {"discrepancy", discrepancy},
          {"quadrature_warning", quadrature_warning}};
}

namespace {

double period_steps(double h) {
  if (!(h > 0.0) || h > 1.0) throw InvalidArgument("time-one computations need 0 < h <= 1");
  const double m = std::round(1.0 / h);
  if (std::abs(m * h - 1.0) > 1e-12) throw InvalidArgument("time-one computations need h = 1/m");
  return m;
}

double form_on_field(const VectorField& field, const ClosedOneForm& alpha, std::span<const double> x, double t) {
  thread_local std::vector<double> v, a;
  v.resize(x.size());
  a.resize(x.size());
  field.eval(x, t, v);
  alpha.coefficients(x, a);
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += a[j] * v[j];
  return s;
}

// ∫_γ α along the lift path from x0 to x1 (closed form: class part plus potential).
double path_integral(const ClosedOneForm& alpha, std::span<const double> x0, std::span<const double> x1) {
  double s = 0.0;
  for (std::size_t j = 0; j < x0.size(); ++j) s += alpha.cls.coeffs[j] * (x1[j] - x0[j]);
  if (alpha.potential) s += alpha.potential_value(x1) - alpha.potential_value(x0);
  return s;
}

// Advances x over `periods` whole periods from time t0, accumulating the
// trapezoid integral of α(v).
double advance_periods(FlowStepper& stepper, const VectorField& field, const ClosedOneForm& alpha,
                       std::vector<double>& x, double t0, std::size_t periods, std::size_t m, double& last) {
  const double h = 1.0 / static_cast<double>(m);
  double integral = 0.0;
  for (std::size_t p = 0; p < periods; ++p) {
    for (std::size_t k = 0; k < m; ++k) {
      const double t = t0 + static_cast<double>(p) + static_cast<double>(k) * h;
      const double t_next = k + 1 == m ? t0 + static_cast<double>(p + 1) : t + h;
      stepper.step(x, t, t_next - t);
      const double next = form_on_field(field, alpha, x, t_next);
      integral += 0.5 * (t_next - t) * (last + next);
      last = next;
    }
  }
  return integral;
}

}  // namespace

TimeOnePairing rotation_pairing_time_one(const EmpiricalMeasure& mu, const HamiltonianSpec& f,
                                         const PhaseSpace& space, const ClosedOneForm& alpha, double h,
                                         const IntegrateOptions& options) {
  const auto m = static_cast<std::size_t>(period_steps(h));
  if (mu.dim != space.dim() || alpha.dim() != space.dim()) throw DimensionError("time-one pairing dimension mismatch");
  const VectorField field = VectorField::hamiltonian(space, f);
  FlowStepper stepper(field, options);
  TimeOnePairing out;
  std::vector<double> x(mu.dim);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::copy(mu.point(i).begin(), mu.point(i).end(), x.begin());
    const double t0 = mu.times[i];
    double last = form_on_field(field, alpha, x, t0);
    const double dbl = advance_periods(stepper, field, alpha, x, t0, 1, m, last);
    out.double_integral += mu.weights[i] * dbl;
    out.loop += mu.weights[i] * path_integral(alpha, mu.point(i), x);
  }
  out.discrepancy = std::abs(out.loop - out.double_integral);
  out.quadrature_warning = out.discrepancy > 1e-4;
  return out;
}

nlohmann::json TimeOneSearchResult::to_json() const {
  nlohmann::json j = report.to_json();
  j["best_seed"] = best_seed;
  j["best_x0"] = best_x0.lift;
  j["best_value"] = best_value;
  j["best_double_integral"] = best_double_integral;
  j["iterates"] = iterates;
  return j;
}

TimeOneSearchResult time_one_orbit_search(const HamiltonianSpec& f, const ClosedOneForm& alpha,
                                          const PhaseSpace& space, const std::vector<PhasePoint>& seeds,
                                          const TimeOneSearchOptions& options) {
  if (seeds.empty()) throw InvalidArgument("time-one search needs at least one seed");
  if (options.n0 == 0 || options.n_max < options.n0) throw InvalidArgument("time-one search needs 0 < n0 <= n_max");
  const auto m = static_cast<std::size_t>(period_steps(options.h));
  const VectorField field = VectorField::hamiltonian(space, f);

  struct State {
    std::vector<double> x;
    std::size_t periods = 0;
    double integral = 0.0;
    double last = 0.0;
  };
  std::vector<State> states(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i].dim() != space.dim()) throw DimensionError("seed has wrong dimension");
    states[i].x = seeds[i].lift;
    states[i].last = form_on_field(field, alpha, states[i].x, 0.0);
  }

  TimeOneSearchResult result;
  result.report.tolerance = options.tol;
  std::vector<double> loops(seeds.size()), doubles(seeds.size());
  for (std::size_t n = options.n0; n <= options.n_max; n *= 2) {
    parallel_for(seeds.size(), options.jobs, [&](std::size_t i) {
      State& st = states[i];
      FlowStepper stepper(field, options.integrate);
      st.integral += advance_periods(stepper, field, alpha, st.x, static_cast<double>(st.periods), n - st.periods, m,
                                     st.last);
      st.periods = n;
      loops[i] = path_integral(alpha, seeds[i].lift, st.x) / static_cast<double>(n);
      doubles[i] = st.integral / static_cast<double>(n);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < loops.size(); ++i) {
      if (std::abs(loops[i]) > std::abs(loops[best])) best = i;
    }
    result.best_seed = best;
    result.best_value = loops[best];
    result.best_double_integral = doubles[best];
    result.iterates = n;
    auto& rep = result.report;
    rep.horizons.push_back(static_cast<double>(n));
    rep.best_values.push_back(std::abs(loops[best]));
    if (rep.best_values.size() > 1) {
      rep.diffs.push_back(std::abs(rep.best_values.back() - rep.best_values[rep.best_values.size() - 2]));
      if (rep.diffs.back() <= options.tol) {
        rep.converged = true;
        break;
      }
    }
  }
  result.best_x0 = seeds[result.best_seed];
  result.seed_values = loops;

  // μ_N of the winner: its first N iterates, equal weights, sample time = k.
  EmpiricalMeasure& mu = result.measure;
  const std::size_t n = result.iterates;
  mu.dim = space.dim();
  mu.weights.assign(n, 1.0 / static_cast<double>(n));
  mu.times.resize(n);
  mu.lifts.reserve(n * mu.dim);
  mu.provenance.x0 = result.best_x0.lift;
  mu.provenance.T = static_cast<double>(n);
  mu.provenance.h = options.h;
  mu.provenance.field_id = "iterates of the time-one map";
  FlowStepper stepper(field, options.integrate);
  std::vector<double> x = result.best_x0.lift;
  double last = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mu.times[k] = static_cast<double>(k);
    mu.lifts.insert(mu.lifts.end(), x.begin(), x.end());
    advance_periods(stepper, field, alpha, x, static_cast<double>(k), 1, m, last);
  }
  return result;
}

double step7_correspondence_check(const EmpiricalMeasure& sigma, const EmpiricalMeasure& mu,
                                  const HamiltonianSpec& f, const PhaseSpace& space,
                                  const std::vector<ExtendedObservable>& observables, double h,
                                  const IntegrateOptions& options) {
  const auto m = static_cast<std::size_t>(period_steps(h));
  if (sigma.dim != space.dim() || mu.dim != space.dim()) throw DimensionError("correspondence check dimension mismatch");
  const VectorField field = VectorField::hamiltonian(space, f);
  FlowStepper stepper(field, options);

  // Arcs s -> φ_s x for every μ sample, s in [0, 1] on the grid k/m.
  std::vector<std::vector<double>> arcs(mu.size());
  std::vector<double> x(mu.dim);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::copy(mu.point(i).begin(), mu.point(i).end(), x.begin());
    arcs[i].insert(arcs[i].end(), x.begin(), x.end());
    for (std::size_t k = 0; k < m; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(m);
      const double t_next = k + 1 == m ? 1.0 : static_cast<double>(k + 1) / static_cast<double>(m);
      stepper.step(x, t, t_next - t);
      arcs[i].insert(arcs[i].end(), x.begin(), x.end());
    }
  }

  double worst = 0.0;
  for (const auto& g : observables) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) lhs += sigma.weights[j] * g(sigma.point(j), sigma.times[j]);
    double rhs = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      double inner = 0.0;
      for (std::size_t k = 0; k <= m; ++k) {
        const double w = (k == 0 || k == m) ? 0.5 : 1.0;
        const double s = k == m ? 1.0 : static_cast<double>(k) / static_cast<double>(m);
        inner += w * g(std::span<const double>(arcs[i].data() + k * mu.dim, mu.dim), s);
      }
      rhs += mu.weights[i] * inner / static_cast<double>(m);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace rotvec
