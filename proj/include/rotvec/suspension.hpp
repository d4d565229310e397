#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rotvec/geometry.hpp"
#include "rotvec/hamiltonian.hpp"
#include "rotvec/integrator.hpp"
#include "rotvec/measures.hpp"
#include "rotvec/orbit_search.hpp"
#include "rotvec/region.hpp"

namespace rotvec {

// Point (x, r, s) of N = M × T*S¹; s is kept as a lift.
struct ExtendedPoint {
  PhasePoint base;
  double r = 0.0;
  double s = 0.0;

  double s_wrapped() const { return wrap_unit(s); }
};

ExtendedPoint make_extended(std::span<const double> x, double r, double s, const PhaseSpace& space);

// H(x, r, s) = F(x, s) + r for a 1-periodic F.
class SuspendedHamiltonian {
 public:
  SuspendedHamiltonian(PhaseSpace space, HamiltonianSpec f);

  const PhaseSpace& space() const { return space_; }
  const HamiltonianSpec& f() const { return f_; }
  double eval(std::span<const double> x, double r, double s) const { return f_.eval(x, s) + r; }
  double eval(const ExtendedPoint& z) const { return eval(z.base.lift, z.r, z.s); }

 private:
  PhaseSpace space_;
  HamiltonianSpec f_;
};

// stab(X) = X × {r = 0}, s free.
class ExtendedRegion {
 public:
  explicit ExtendedRegion(RegionSpec base) : base_(std::move(base)) {}

  const RegionSpec& base() const { return base_; }
  std::string name() const;
  bool is_empty() const { return base_.is_empty(); }
  bool contains(const ExtendedPoint& z, double tol = 1e-12) const;
  // Base grid × s_per_dim phases of s, all with r = 0.
  std::vector<ExtendedPoint> grid(const PhaseSpace& space, std::size_t s_per_dim = 1) const;

 private:
  RegionSpec base_;
};

ExtendedRegion stab(const RegionSpec& x);

struct ExtendedTrajectory {
  std::size_t dim = 0;
  std::vector<double> times;
  std::vector<double> lifts;  // base lifts, dim per row
  std::vector<double> r;
  std::vector<double> s;
  std::vector<double> energy;  // H along the orbit
  double max_drift = 0.0;
  double max_abs_r = 0.0;

  std::size_t size() const { return times.size(); }
  std::span<const double> point(std::size_t i) const { return {lifts.data() + i * dim, dim}; }
  ExtendedPoint at(std::size_t i, const PhaseSpace& space) const;
  // σ: trapezoid-weighted samples (x_t, s_t); the sample time slot holds s.
  EmpiricalMeasure projected_measure() const;
  // Columns t, x lift, r, s lift, H.
  void write_csv(const std::string& path) const;
};

// h_t(x, r, s): x follows the flow of F_t started at phase s(0); s(t) = s(0) + t;
// r(t) = r(0) - ∫ ∂F/∂s along the orbit, with 3-point Gauss-Legendre nodes
// on each step (x interpolated linearly inside the step).
ExtendedTrajectory suspension_flow(const SuspendedHamiltonian& h, const ExtendedPoint& z0, double T, double step,
                                   const IntegrateOptions& options = {});

// |h_T(S_c z0) - S_c h_T(z0)|_∞ with S_c(x, r, s) = (x, r + c, s).
double shift_equivariance_check(const SuspendedHamiltonian& h, const ExtendedPoint& z0, double c, double T,
                                double step, const IntegrateOptions& options = {});

struct TimeOnePairing {
  double loop = 0.0;    // ∫_M (∫_{γ_x} α) dμ(x)
  double double_integral = 0.0;  // ∫_0^1 ∫_M α(sgrad F_t)(φ_t x) dμ dt
  double discrepancy = 0.0;
  bool quadrature_warning = false;  // discrepancy above 1e-4

  nlohmann::json to_json() const;
};

// ⟨a, ρ(μ, φ)⟩ for the time-one map of F, by both formulas. μ is a measure
// on M; each sample is flowed over one period from s = 0 with step h.
TimeOnePairing rotation_pairing_time_one(const EmpiricalMeasure& mu, const HamiltonianSpec& f,
                                         const PhaseSpace& space, const ClosedOneForm& alpha, double h,
                                         const IntegrateOptions& options = {});

struct TimeOneSearchOptions {
  std::size_t n0 = 100;      // iterates at the first horizon
  std::size_t n_max = 10000;
  double h = 1e-2;           // must be 1/m
  double tol = 1e-4;
  IntegrateOptions integrate;
  std::size_t jobs = 0;
};

struct TimeOneSearchResult {
  std::size_t best_seed = 0;
  PhasePoint best_x0;
  double best_value = 0.0;  // loop formula, signed
  double best_double_integral = 0.0;
  std::size_t iterates = 0;
  std::vector<double> seed_values;
  ConvergenceReport report;  // horizons are iterate counts
  EmpiricalMeasure measure;  // (1/N) Σ δ_{φ^k x0} of the winner

  nlohmann::json to_json() const;
};

// Extremal orbit search for the time-one map: maximizes the loop pairing of
// μ_N = (1/N) Σ_{k<N} δ_{φ^k x} over the seeds, doubling N.
TimeOneSearchResult time_one_orbit_search(const HamiltonianSpec& f, const ClosedOneForm& alpha,
                                          const PhaseSpace& space, const std::vector<PhasePoint>& seeds,
                                          const TimeOneSearchOptions& options = {});

using ExtendedObservable = std::function<double(std::span<const double> x, double s)>;

// max over G of |∫ G dσ - ∫_0^1 ∫_M G(φ_s x, s) dμ(x) ds|; the inner s-integral
// uses the trapezoid rule with step h.
double step7_correspondence_check(const EmpiricalMeasure& sigma, const EmpiricalMeasure& mu,
                                  const HamiltonianSpec& f, const PhaseSpace& space,
                                  const std::vector<ExtendedObservable>& observables, double h,
                                  const IntegrateOptions& options = {});

}  // namespace rotvec
