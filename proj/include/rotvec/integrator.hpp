#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotvec/geometry.hpp"
#include "rotvec/vector_field.hpp"

namespace rotvec {

enum class Method { implicit_midpoint, rk4 };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

struct IntegrateOptions {
  Method method = Method::implicit_midpoint;
  double start_time = 0.0;
  bool backward = false;  // flow for negative time: t runs start_time, start_time - h, ...
  double tol = 1e-12;     // fixed-point tolerance on the step increment
  int max_iter = 50;
  std::optional<double> drift_budget;
};

// One-step integrator acting on a lift in place.
class FlowStepper {
 public:
  FlowStepper(const VectorField& field, const IntegrateOptions& options = {});

  // x <- x(t + dt); dt may be negative. Throws StiffStep / BlowUp.
  void step(std::span<double> x, double t, double dt);
  std::size_t evaluations() const { return evals_; }

 private:
  void rhs(std::span<const double> x, double t, std::span<double> v);

  const VectorField& field_;
  IntegrateOptions options_;
  std::vector<double> delta_, trial_, next_, k1_, k2_, k3_, k4_;
  std::size_t evals_ = 0;
};

// Steps needed to cover T with step h; the last one may be shorter. Node k
// sits at start + k h exactly, not at a running sum.
std::size_t step_count(double T, double h);

struct Trajectory {
  std::size_t dim = 0;
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> lifts;   // times.size() rows of dim entries
  std::vector<double> energy;  // F(x_t, t) for Hamiltonian fields, else empty
  bool autonomous_energy = false;
  double max_drift = 0.0;      // max |F(x_t) - F(x_0)|, autonomous fields only
  std::optional<double> drift_budget;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  std::span<const double> point(std::size_t i) const { return {lifts.data() + i * dim, dim}; }
  std::span<const double> front() const { return point(0); }
  std::span<const double> back() const { return point(size() - 1); }
  PhasePoint phase_point(std::size_t i, const PhaseSpace& space) const { return wrap(point(i), space); }
  bool within_budget() const { return !drift_budget || max_drift <= *drift_budget; }

  // Columns t, lift coordinates, wrapped coordinates, F.
  void write_csv(const std::string& path, const PhaseSpace& space) const;
};

Trajectory integrate(const VectorField& field, const PhasePoint& x0, double T, double h,
                     const IntegrateOptions& options = {});

struct TimeOneMap {
  PhasePoint image;
  Trajectory loop;  // the arc t -> φ_t x0, t in [0, 1]
};

// φ = φ_1 of a 1-periodic Hamiltonian; h must be 1/m for an integer m.
TimeOneMap time_one_map(const HamiltonianSpec& f, const PhaseSpace& space, const PhasePoint& x0, double h,
                        const IntegrateOptions& options = {});

}  // namespace rotvec
