#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rotvec/bracket.hpp"
#include "rotvec/profile.hpp"
#include "rotvec/region.hpp"

namespace rotvec {

// Minimax problem for pb^a(X, X'): minimize sup|{F, α}| over F with
// F ≤ 0 on X, F ≥ 1 on X', and α in the class a.
//
// F ranges over a single fixed Hamiltonian or over a pinned profile family
// u(p_1). α = a + dg with g spanned by cos/sin(2πk x_v), k ≤ alpha_modes, on
// every periodic coordinate x_v (alpha_modes = 0 switches the potential off).
class PbProblem {
 public:
  PbProblem(PhaseSpace space, RegionSpec x, RegionSpec x_prime, CohomologyClass a, HamiltonianSpec fixed_f,
            std::size_t alpha_modes = 0);
  PbProblem(PhaseSpace space, RegionSpec x, RegionSpec x_prime, CohomologyClass a, ProfileFamily profile,
            std::size_t alpha_modes = 0);

  const PhaseSpace& space() const { return space_; }
  const RegionSpec& x() const { return x_; }
  const RegionSpec& x_prime() const { return x_prime_; }
  const CohomologyClass& cls() const { return a_; }
  const std::optional<ProfileFamily>& profile() const { return profile_; }
  std::size_t alpha_modes() const { return alpha_modes_; }

  std::size_t f_params() const { return profile_ ? profile_->num_params() : 0; }
  std::size_t alpha_params() const { return alpha_basis_.size(); }
  std::size_t family_dimension() const { return f_params() + alpha_params(); }

  HamiltonianSpec make_f(std::span<const double> params) const;
  ClosedOneForm make_alpha(std::span<const double> params) const;

  struct Validation {
    bool ok = false;
    double max_on_x = 0.0;        // should be ≤ 0
    double min_on_x_prime = 0.0;  // should be ≥ 1
  };
  // Checks the constraints on both region grids with tolerance `tol`.
  Validation validate(const HamiltonianSpec& f, double tol = 1e-9) const;

  nlohmann::json to_json() const;

 private:
  // Checks X ∩ X' = ∅ on both grids and lays out the α basis.
  void init();

  PhaseSpace space_;
  RegionSpec x_, x_prime_;
  CohomologyClass a_;
  std::optional<HamiltonianSpec> fixed_f_;
  std::optional<ProfileFamily> profile_;
  std::size_t alpha_modes_;
  struct AlphaMode {
    std::size_t var;
    int k;
    bool sine;
  };
  std::vector<AlphaMode> alpha_basis_;
};

struct PbOptions {
  std::size_t restarts = 8;
  std::size_t max_evaluations = 2000;
  double perturbation = 0.05;
  std::uint64_t seed = 0;
  std::size_t grid_res = 16384;        // per active variable, capped by max_grid_points
  std::size_t max_grid_points = 1u << 20;
  double constraint_tol = 1e-9;
};

struct PbAudit {
  PbProblem::Validation winner;
  std::size_t family_dimension = 0;
  std::size_t evaluations = 0;
  std::size_t rejected = 0;
  double min_certified_seen = 0.0;  // over every validated candidate
  std::vector<double> restart_values;

  nlohmann::json to_json() const;
};

struct PbResult {
  double value = 0.0;  // certified sup-norm of the winner
  HamiltonianSpec best_f;
  ClosedOneForm best_alpha;
  std::vector<double> f_params, alpha_params;
  SupNorm sup;
  PbAudit audit;

  nlohmann::json to_json() const;
};

// Derivative-free minimization of the certified sup-norm over the family.
// Throws InfeasibleFamily when no candidate passes validation.
PbResult pb_upper_bound(const PbProblem& problem, const PbOptions& options = {});

}  // namespace rotvec
