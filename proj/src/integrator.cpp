#include "rotvec/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "rotvec/errors.hpp"

namespace rotvec {

const char* to_string(Method m) { return m == Method::rk4 ? "rk4" : "implicit-midpoint"; }

Method method_from_string(const std::string& name) {
  if (name == "implicit-midpoint") return Method::implicit_midpoint;
  if (name == "rk4") return Method::rk4;
  throw InvalidArgument("unknown integrator '" + name + "'");
}

FlowStepper::FlowStepper(const VectorField& field, const IntegrateOptions& options)
    : field_(field), options_(options) {
  const std::size_t d = field.dim();
  for (auto* v : {&delta_, &trial_, &next_, &k1_, &k2_, &k3_, &k4_}) v->assign(d, 0.0);
}

void FlowStepper::rhs(std::span<const double> x, double t, std::span<double> v) {
  ++evals_;
  field_.eval(x, t, v);
}

void FlowStepper::step(std::span<double> x, double t, double dt) {
  const std::size_t d = x.size();
  if (options_.method == Method::rk4) {
    rhs(x, t, k1_);
    for (std::size_t i = 0; i < d; ++i) trial_[i] = x[i] + 0.5 * dt * k1_[i];
    rhs(trial_, t + 0.5 * dt, k2_);
    for (std::size_t i = 0; i < d; ++i) trial_[i] = x[i] + 0.5 * dt * k2_[i];
    rhs(trial_, t + 0.5 * dt, k3_);
    for (std::size_t i = 0; i < d; ++i) trial_[i] = x[i] + dt * k3_[i];
    rhs(trial_, t + dt, k4_);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
      if (!std::isfinite(x[i])) throw BlowUp("non-finite state at t = " + std::to_string(t + dt));
    }
    return;
  }

  // Implicit midpoint on the increment: δ = dt v(x + δ/2, t + dt/2).
  const double tm = t + 0.5 * dt;
  rhs(x, tm, k1_);
  for (std::size_t i = 0; i < d; ++i) delta_[i] = dt * k1_[i];
  for (int it = 0;; ++it) {
    if (it >= options_.max_iter) {
      throw StiffStep("implicit midpoint did not converge at t = " + std::to_string(t) + "; try a smaller step");
    }
    for (std::size_t i = 0; i < d; ++i) trial_[i] = x[i] + 0.5 * delta_[i];
    rhs(trial_, tm, k1_);
    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double nd = dt * k1_[i];
      if (!std::isfinite(nd)) throw BlowUp("non-finite field value at t = " + std::to_string(t));
      change = std::max(change, std::abs(nd - delta_[i]));
      delta_[i] = nd;
    }
    if (change <= options_.tol) break;
  }
  for (std::size_t i = 0; i < d; ++i) {
    x[i] += delta_[i];
    if (!std::isfinite(x[i])) throw BlowUp("non-finite state at t = " + std::to_string(t + dt));
  }
}

std::size_t step_count(double T, double h) {
  if (!(T >= 0.0) || !(h > 0.0) || !std::isfinite(T) || !std::isfinite(h)) {
    throw InvalidArgument("integration needs T >= 0 and h > 0");
  }
  const double r = T / h;
  const double n = std::round(r);
  // Treat T/h within rounding of an integer as exactly that many steps.
  if (std::abs(r - n) <= 1e-9 * std::max(1.0, r)) return static_cast<std::size_t>(n);
  return static_cast<std::size_t>(std::ceil(r));
}

Trajectory integrate(const VectorField& field, const PhasePoint& x0, double T, double h,
                     const IntegrateOptions& options) {
  if (!(T > 0.0) || !(h > 0.0)) throw InvalidArgument("integrate needs T > 0 and h > 0");
  if (x0.dim() != field.dim()) throw DimensionError("initial point has wrong dimension");
  const std::size_t d = field.dim();
  const std::size_t steps = step_count(T, h);
  const double sign = options.backward ? -1.0 : 1.0;

  Trajectory traj;
  traj.dim = d;
  traj.h = h;
  traj.drift_budget = options.drift_budget;
  traj.times.reserve(steps + 1);
  traj.lifts.reserve((steps + 1) * d);
  const bool ham = field.kind() == VectorField::Kind::hamiltonian;
  traj.autonomous_energy = ham && field.autonomous();

  FlowStepper stepper(field, options);
  std::vector<double> x(x0.lift);
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.lifts.insert(traj.lifts.end(), x.begin(), x.end());
    if (ham) {
      const double e = *field.energy(x, t);
      traj.energy.push_back(e);
      if (traj.autonomous_energy) traj.max_drift = std::max(traj.max_drift, std::abs(e - traj.energy.front()));
    }
  };
  record(options.start_time);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = options.start_time + sign * static_cast<double>(k) * h;
    const double t_next = k + 1 == steps ? options.start_time + sign * T
                                         : options.start_time + sign * static_cast<double>(k + 1) * h;
    stepper.step(x, t, t_next - t);
    record(t_next);
  }
  return traj;
}

void Trajectory::write_csv(const std::string& path, const PhaseSpace& space) const {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  const std::size_t n = dim / 2;
  out << "t";
  for (const char* kind : {"lift", "wrapped"}) {
    for (std::size_t i = 0; i < dim; ++i) out << "," << (i < n ? "p" : "q") << (i % n) + 1 << "_" << kind;
  }
  out << ",F\n";
  out << std::setprecision(17);
  for (std::size_t r = 0; r < size(); ++r) {
    const PhasePoint x = phase_point(r, space);
    out << times[r];
    for (double v : x.lift) out << "," << v;
    for (double v : x.wrapped) out << "," << v;
    out << ",";
    if (!energy.empty()) out << energy[r];
    out << "\n";
  }
}

TimeOneMap time_one_map(const HamiltonianSpec& f, const PhaseSpace& space, const PhasePoint& x0, double h,
                        const IntegrateOptions& options) {
  if (!(h > 0.0) || h > 1.0) throw InvalidArgument("time-one map needs 0 < h <= 1");
  const double m = std::round(1.0 / h);
  if (std::abs(m * h - 1.0) > 1e-12) throw InvalidArgument("time-one map needs h = 1/m for an integer m");
  const VectorField field = VectorField::hamiltonian(space, f);
  TimeOneMap out;
  out.loop = integrate(field, x0, 1.0, 1.0 / m, options);
  out.image = wrap(out.loop.back(), space);
  return out;
}

}  // namespace rotvec
