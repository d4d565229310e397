#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotvec/geometry.hpp"
#include "rotvec/integrator.hpp"
#include "rotvec/vector_field.hpp"

namespace rotvec {

struct MeasureProvenance {
  std::vector<double> x0;
  double T = 0.0;
  double h = 0.0;
  double start_time = 0.0;
  std::string field_id;
};

// Weighted samples of a trajectory (trapezoid weights, summing to 1). The
// samples keep their lifts and times so boundary terms and time-dependent
// integrands stay available.
struct EmpiricalMeasure {
  std::size_t dim = 0;
  std::vector<double> lifts;
  std::vector<double> times;
  std::vector<double> weights;
  MeasureProvenance provenance;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const { return {lifts.data() + i * dim, dim}; }
  double total_weight() const;

  static EmpiricalMeasure point_mass(std::span<const double> x, double t = 0.0);
  nlohmann::json summary() const;
};

// Throws EmptyTrajectory for trajectories without samples.
EmpiricalMeasure empirical_measure(const Trajectory& traj, std::string field_id = {});

using Observable = std::function<double(std::span<const double> x, double t)>;

double average(const EmpiricalMeasure& mu, const Observable& h);

// ∫ α(v) dμ for the field v.
double rotation_pairing(const EmpiricalMeasure& mu, const VectorField& field, const ClosedOneForm& alpha);
double rotation_pairing(const EmpiricalMeasure& mu, const HamiltonianSpec& f, const PhaseSpace& space,
                        const ClosedOneForm& alpha);

// (g(x_T) - g(x_0)) / T for the exact part dg of α: the finite-horizon
// contribution of the potential, which vanishes as T grows.
double boundary_term(const EmpiricalMeasure& mu, const ClosedOneForm& alpha);

// ⟨e_j, ρ⟩ = ∫ v_j dμ for every basis class.
RotationVector rotation_vector(const EmpiricalMeasure& mu, const VectorField& field);

struct InvarianceDefect {
  double defect = 0.0;
  double bound = 0.0;  // 2 s max|H| / T
  double max_abs_h = 0.0;
};

// |∫ H∘φ_s dμ - ∫ H dμ|. When μ comes from a trajectory on a uniform grid
// and s is a multiple of its step, φ_s of a sample is a later sample (plus a
// short continuation past the end); otherwise every sample is flowed for
// time s. `h_sup` is a known bound of |H|; when absent the largest sampled
// |H| is used for the reported bound.
InvarianceDefect invariance_defect(const EmpiricalMeasure& mu, const VectorField& field, double s,
                                   const Observable& h, std::optional<double> h_sup = std::nullopt,
                                   const IntegrateOptions& options = {});

}  // namespace rotvec
