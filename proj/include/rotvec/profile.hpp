#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rotvec/hamiltonian.hpp"

namespace rotvec {

struct Pin {
  double point;
  double value;
};

// Which harmonics of u(p) = c_0 + Σ_k a_k cos(2πkp) + b_k sin(2πkp) are used.
//   full          all cos and sin terms with k ≤ n_modes
//   even          cos terms only (u(p) = u(-p))
//   odd_harmonic  cos terms with odd k only; such u satisfy u(p+½) = 2c_0 - u(p)
enum class ProfileBasis { full, even, odd_harmonic };

const char* to_string(ProfileBasis basis);
ProfileBasis profile_basis_from_string(const std::string& name);

// Linear family of 1-periodic profiles u(p) in a fixed trigonometric basis,
// restricted to the affine subspace satisfying the pins. The pins are
// eliminated exactly: the coefficients of a few pivot basis functions
// (lowest frequency first) are solved for, the rest are free parameters.
class ProfileFamily {
 public:
  ProfileFamily(std::vector<Pin> pins, std::size_t n_modes, ProfileBasis basis = ProfileBasis::full);

  std::size_t num_coefficients() const { return freq_.size(); }
  std::size_t num_params() const { return free_.size(); }
  std::size_t n_modes() const { return n_modes_; }
  ProfileBasis basis() const { return basis_; }
  const std::vector<Pin>& pins() const { return pins_; }

  // Basis function j is cos(2π freq_j p) or sin(2π freq_j p); freq 0 is the constant.
  int frequency(std::size_t j) const { return freq_[j]; }
  bool is_sine(std::size_t j) const { return sine_[j]; }

  // Full coefficient vector for the given free parameters (pins hold exactly).
  std::vector<double> coefficients(std::span<const double> params) const;
  // Free parameters of a coefficient vector (the pivot entries are dropped).
  std::vector<double> params_of(std::span<const double> coeffs) const;
  // Weighted least-change correction of arbitrary coefficients onto the pins;
  // weights 1 + (2πk)⁴ push the correction into low frequencies.
  std::vector<double> project(std::span<const double> coeffs) const;

  double value(std::span<const double> coeffs, double p) const;
  double derivative(std::span<const double> coeffs, double p, int order = 1) const;
  double max_pin_residual(std::span<const double> coeffs) const;

  // u as a polynomial in one variable.
  TrigPolynomial polynomial(std::span<const double> coeffs) const;
  // F = u(p_1) on a 2n-dimensional phase space.
  HamiltonianSpec hamiltonian(std::size_t n, std::span<const double> coeffs) const;

  // Smoothed periodic piecewise-linear interpolant of the pins, projected
  // onto the pinned subspace. Start point for slope minimization.
  std::vector<double> smoothed_interpolant() const;

 private:
  std::vector<Pin> pins_;
  std::size_t n_modes_;
  ProfileBasis basis_;
  std::vector<int> freq_;
  std::vector<bool> sine_;
  std::vector<std::size_t> pivot_;
  std::vector<std::size_t> free_;
  // c_pivot = offset_ + gain_ * c_free (row-major, pivot x free).
  std::vector<double> offset_;
  std::vector<double> gain_;
};

// Certified upper bound of max|u'| over [0, 1): a second-order Taylor bound
// around the nearest of `grid` equispaced points.
struct SlopeCertificate {
  double certified = 0.0;
  double grid_max = 0.0;
  double third_derivative_bound = 0.0;
  std::size_t grid = 0;
};

SlopeCertificate certify_slope(const ProfileFamily& family, std::span<const double> coeffs,
                               std::size_t grid = 4096);

struct PinnedProfileResult {
  HamiltonianSpec hamiltonian;
  std::vector<double> coeffs;
  SlopeCertificate slope;
  std::optional<double> slope_target;
  bool target_met = true;
  double pin_residual = 0.0;
};

// F = u(p_1) with u pinned. Without a slope target the minimum-norm pinned
// coefficients are used. With a target, max|u'| is minimized from the
// smoothed interpolant and the certificate is compared against the target.
PinnedProfileResult make_pinned_profile(std::size_t n, std::vector<Pin> pins, std::optional<double> slope_target,
                                        std::size_t n_modes, ProfileBasis basis = ProfileBasis::full);

}  // namespace rotvec
