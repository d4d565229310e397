#include "rotvec/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotvec/errors.hpp"

namespace rotvec {

double EmpiricalMeasure::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

EmpiricalMeasure EmpiricalMeasure::point_mass(std::span<const double> x, double t) {
  EmpiricalMeasure mu;
  mu.dim = x.size();
  mu.lifts.assign(x.begin(), x.end());
  mu.times = {t};
  mu.weights = {1.0};
  mu.provenance.x0 = mu.lifts;
  mu.provenance.start_time = t;
  mu.provenance.field_id = "point mass";
  return mu;
}

nlohmann::json EmpiricalMeasure::summary() const {
  return {{"x0", provenance.x0},     {"T", provenance.T},         {"h", provenance.h},
          {"samples", size()},       {"start_time", provenance.start_time},
          {"field", provenance.field_id}};
}

EmpiricalMeasure empirical_measure(const Trajectory& traj, std::string field_id) {
  if (traj.empty()) throw EmptyTrajectory("empirical measure of an empty trajectory");
  EmpiricalMeasure mu;
  mu.dim = traj.dim;
  mu.lifts = traj.lifts;
  mu.times = traj.times;
  const std::size_t n = traj.size();
  mu.provenance.x0.assign(traj.front().begin(), traj.front().end());
  mu.provenance.h = traj.h;
  mu.provenance.start_time = traj.times.front();
  mu.provenance.field_id = std::move(field_id);
  if (n == 1) {
    mu.weights = {1.0};
    return mu;
  }
  const double T = std::abs(traj.times.back() - traj.times.front());
  mu.provenance.T = T;
  mu.weights.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double half = 0.5 * std::abs(traj.times[i + 1] - traj.times[i]) / T;
    mu.weights[i] += half;
    mu.weights[i + 1] += half;
  }
  return mu;
}

double average(const EmpiricalMeasure& mu, const Observable& h) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weights[i] * h(mu.point(i), mu.times[i]);
  return s;
}

double rotation_pairing(const EmpiricalMeasure& mu, const VectorField& field, const ClosedOneForm& alpha) {
  if (mu.dim != field.dim() || alpha.dim() != field.dim()) throw DimensionError("rotation pairing dimension mismatch");
  std::vector<double> v(mu.dim), a(mu.dim);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    field.eval(mu.point(i), mu.times[i], v);
    alpha.coefficients(mu.point(i), a);
    double dot = 0.0;
    for (std::size_t j = 0; j < mu.dim; ++j) dot += a[j] * v[j];
    s += mu.weights[i] * dot;
  }
  return s;
}

double rotation_pairing(const EmpiricalMeasure& mu, const HamiltonianSpec& f, const PhaseSpace& space,
                        const ClosedOneForm& alpha) {
  return rotation_pairing(mu, VectorField::hamiltonian(space, f), alpha);
}

double boundary_term(const EmpiricalMeasure& mu, const ClosedOneForm& alpha) {
  if (!alpha.potential || mu.size() < 2 || mu.provenance.T <= 0.0) return 0.0;
  const double g0 = alpha.potential_value(mu.point(0));
  const double g1 = alpha.potential_value(mu.point(mu.size() - 1));
  return (g1 - g0) / mu.provenance.T;
}

RotationVector rotation_vector(const EmpiricalMeasure& mu, const VectorField& field) {
  if (mu.dim != field.dim()) throw DimensionError("rotation vector dimension mismatch");
  RotationVector rho{std::vector<double>(mu.dim, 0.0)};
  std::vector<double> v(mu.dim);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    field.eval(mu.point(i), mu.times[i], v);
    for (std::size_t j = 0; j < mu.dim; ++j) rho.coeffs[j] += mu.weights[i] * v[j];
  }
  return rho;
}

namespace {

// True when the samples sit on start + k h for one h (last step included).
bool uniform_grid(const EmpiricalMeasure& mu) {
  const double h = mu.provenance.h;
  if (mu.size() < 2 || h <= 0.0) return false;
  const double t0 = mu.times.front();
  if (mu.times.back() < t0) return false;  // backward orbits take the slow path
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (std::abs(mu.times[i] - (t0 + static_cast<double>(i) * h)) > 1e-9 * std::max(1.0, std::abs(mu.times[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

InvarianceDefect invariance_defect(const EmpiricalMeasure& mu, const VectorField& field, double s,
                                   const Observable& h, std::optional<double> h_sup,
                                   const IntegrateOptions& options) {
  if (!(s > 0.0)) throw InvalidArgument("invariance defect needs s > 0");
  if (mu.dim != field.dim()) throw DimensionError("invariance defect dimension mismatch");
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim;
  double base = 0.0, shifted = 0.0, hmax = 0.0;
  auto add = [&](double& acc, double w, std::span<const double> x, double t) {
    const double v = h(x, t);
    hmax = std::max(hmax, std::abs(v));
    acc += w * v;
  };
  for (std::size_t i = 0; i < n; ++i) add(base, mu.weights[i], mu.point(i), mu.times[i]);

  const double step = mu.provenance.h > 0.0 ? mu.provenance.h : std::min(s, 1e-2);
  const double ratio = s / step;
  const double m = std::round(ratio);
  FlowStepper stepper(field, options);
  std::vector<double> x(d);

  if (uniform_grid(mu) && m >= 1.0 && std::abs(ratio - m) <= 1e-9 * ratio) {
    const std::size_t shift = static_cast<std::size_t>(m);
    // Continuation past the last sample, on the same grid.
    std::vector<double> tail;
    std::vector<double> tail_t;
    std::copy(mu.point(n - 1).begin(), mu.point(n - 1).end(), x.begin());
    const double t_end = mu.times.back();
    for (std::size_t k = 1; k <= shift; ++k) {
      const double t = t_end + static_cast<double>(k - 1) * step;
      stepper.step(x, t, step);
      tail.insert(tail.end(), x.begin(), x.end());
      tail_t.push_back(t_end + static_cast<double>(k) * step);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + shift;
      if (j < n) {
        add(shifted, mu.weights[i], mu.point(j), mu.times[j]);
      } else {
        const std::size_t k = j - n;
        add(shifted, mu.weights[i], std::span<const double>(tail.data() + k * d, d), tail_t[k]);
      }
    }
  } else {
    const std::size_t steps = step_count(s, step);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(mu.point(i).begin(), mu.point(i).end(), x.begin());
      const double t0 = mu.times[i];
      for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * step;
        const double t_next = k + 1 == steps ? t0 + s : t0 + static_cast<double>(k + 1) * step;
        stepper.step(x, t, t_next - t);
      }
      add(shifted, mu.weights[i], x, t0 + s);
    }
  }

  InvarianceDefect out;
  out.defect = std::abs(shifted - base);
  out.max_abs_h = h_sup ? *h_sup : hmax;
  const double T = mu.provenance.T;
  out.bound = T > 0.0 ? 2.0 * s * out.max_abs_h / T : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace rotvec
