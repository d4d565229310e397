#pragma once

#include <cstddef>
#include <vector>

#include "rotvec/geometry.hpp"
#include "rotvec/hamiltonian.hpp"
#include "rotvec/integrator.hpp"

namespace rotvec {

struct BracketPair {
  double df_sgrad_alpha = 0.0;  // dF(sgrad α)
  double alpha_sgrad_f = 0.0;   // α(sgrad F)
};

BracketPair bracket_both(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space,
                         const PhasePoint& x, double s = 0.0);

// {F, α} = dF(sgrad α). Both sides of the identity are computed; a mismatch
// above 1e-10 max(1, |value|) throws InternalInconsistency.
double bracket(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space, const PhasePoint& x,
               double s = 0.0);

// {F, α} as a trigonometric polynomial over (p, q, s). Needs a purely
// trigonometric F (UnsupportedFamily otherwise).
TrigPolynomial bracket_polynomial(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space);

struct SupNorm {
  double certified = 0.0;  // grid_max + pad
  double grid_max = 0.0;
  double pad = 0.0;        // (1/grid_res) L / 2
  double lipschitz = 0.0;  // L: Fourier bound of Σ_v sup|∂_v f| over active v
  std::size_t grid_res = 0;
  std::vector<std::size_t> active;

  nlohmann::json to_json() const;
};

// max |f| over the equispaced grid (grid_res points per active variable;
// variables f does not depend on are not gridded). With the pad the result
// is an upper bound of sup |f|.
SupNorm sup_norm(const TrigPolynomial& f, std::size_t grid_res, bool lipschitz_pad = true);
SupNorm sup_norm(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space,
                 std::size_t grid_res, bool lipschitz_pad = true);

// Grid extrema of f; the true min/max lie within `pad` of them.
struct ValueRange {
  double min = 0.0;
  double max = 0.0;
  double pad = 0.0;
};
ValueRange value_range(const TrigPolynomial& f, std::size_t grid_res);

// {F, α_T}(x) with α_T the time average of φ_t^* α, computed as the orbit
// average of α(sgrad F) over [0, T].
double averaged_bracket(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space,
                        const PhasePoint& x, double T, double h, const IntegrateOptions& options = {});

}  // namespace rotvec
