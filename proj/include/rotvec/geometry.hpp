#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rotvec/trig_polynomial.hpp"

namespace rotvec {

// Coordinates are always ordered (p_1..p_n, q_1..q_n).
inline std::size_t p_index(std::size_t i) { return i; }
inline std::size_t q_index(std::size_t n, std::size_t i) { return n + i; }

// Constant symplectic form ω(u, w) = uᵀ Ω w.
class SymplecticStructure {
 public:
  // Throws DegenerateForm unless Ω is antisymmetric and |det Ω| > 1e-12.
  explicit SymplecticStructure(Eigen::MatrixXd matrix);

  // dp ∧ dq = Σ dp_i ∧ dq_i.
  static SymplecticStructure standard(std::size_t n);
  // dp1∧dq1 + γ dp2∧dq1 + dp2∧dq2 on T⁴.
  static SymplecticStructure twisted(double gamma);

  std::size_t dimension() const { return static_cast<std::size_t>(omega_.rows()); }
  const Eigen::MatrixXd& matrix() const { return omega_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }

  double operator()(std::span<const double> u, std::span<const double> w) const;

  // Solves i_v ω = β, i.e. Ωᵀ v = β, using the cached inverse.
  void raise(std::span<const double> beta, std::span<double> v) const;
  std::vector<double> raise(std::span<const double> beta) const;

  // i_w ω, the covector Ωᵀ w.
  std::vector<double> contract(std::span<const double> w) const;

 private:
  Eigen::MatrixXd omega_;
  Eigen::MatrixXd inverse_;
  std::vector<double> raise_;  // row-major Ω⁻ᵀ
};

enum class SpaceKind { torus, cotangent_torus };

// T^{2n}, or T*Tⁿ whose momenta p are unbounded reals.
class PhaseSpace {
 public:
  PhaseSpace(SpaceKind kind, std::size_t n, SymplecticStructure omega);

  static PhaseSpace torus(std::size_t n) { return {SpaceKind::torus, n, SymplecticStructure::standard(n)}; }
  static PhaseSpace cotangent(std::size_t n) {
    return {SpaceKind::cotangent_torus, n, SymplecticStructure::standard(n)};
  }

  SpaceKind kind() const { return kind_; }
  std::size_t half_dim() const { return n_; }
  std::size_t dim() const { return 2 * n_; }
  const SymplecticStructure& omega() const { return omega_; }
  bool periodic(std::size_t coord) const;
  std::string describe() const;

 private:
  SpaceKind kind_;
  std::size_t n_;
  SymplecticStructure omega_;
};

struct PhasePoint {
  std::vector<double> lift;
  std::vector<double> wrapped;

  std::size_t dim() const { return lift.size(); }
};

// x mod 1 in [0, 1).
double wrap_unit(double x);
// Representative of x mod 1 in [-1/2, 1/2).
double wrap_centered(double x);

// Throws InvalidPoint on non-finite input, DimensionError on size mismatch.
PhasePoint wrap(std::span<const double> lift, const PhaseSpace& space);

// Coordinates of a ∈ H¹(M, ℝ) in the basis ([dp_i], [dq_i]).
struct CohomologyClass {
  std::vector<double> coeffs;

  static CohomologyClass zero(std::size_t n) { return {std::vector<double>(2 * n, 0.0)}; }
  static CohomologyClass dp(std::size_t n, std::size_t i, double scale = 1.0);
  static CohomologyClass dq(std::size_t n, std::size_t i, double scale = 1.0);
};

// Coordinates of ρ ∈ H₁(M, ℝ) in the dual basis.
struct RotationVector {
  std::vector<double> coeffs;
};

// α = Σ a_j dx_j + dg with g an optional trigonometric potential in the 2n
// phase coordinates.
struct ClosedOneForm {
  CohomologyClass cls;
  std::optional<TrigPolynomial> potential;

  std::size_t dim() const { return cls.coeffs.size(); }
  // Pointwise coefficients a + ∇g(x).
  void coefficients(std::span<const double> x, std::span<double> out) const;
  double potential_value(std::span<const double> x) const;
  nlohmann::json to_json() const;
};

ClosedOneForm make_form(CohomologyClass cls, std::optional<TrigPolynomial> potential = std::nullopt);

double eval_form(const ClosedOneForm& alpha, std::span<const double> v, const PhasePoint& x);
double pair(const CohomologyClass& a, const RotationVector& rho);
// Flux [i_w ω] of the unit-time translation along the constant field w.
CohomologyClass flux_of_translation(std::span<const double> w, const PhaseSpace& space);

}  // namespace rotvec
