#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotvec/geometry.hpp"
#include "rotvec/trig_polynomial.hpp"

namespace rotvec {

// Compactly supported momentum profile A (1 - ((p_i - c)/w)²)^m on |p_i - c| < w,
// zero elsewhere. Used on T*Tⁿ where F must have compact support.
struct MomentumBump {
  std::size_t coord = 0;
  double center = 0.0;
  double half_width = 1.0;
  int power = 4;
  double amplitude = 1.0;

  double value(double p) const;
  double derivative(double p) const;
};

// Hamiltonian F(x, s) from a finite analytic family: a trigonometric
// polynomial in (p, q, s) plus optional momentum bumps. Time-dependent
// members are 1-periodic in s. Values and derivatives are closed-form.
class HamiltonianSpec {
 public:
  HamiltonianSpec() = default;
  // `trig` may be given over 2n variables (autonomous) or 2n+1 (with s last).
  HamiltonianSpec(std::size_t n, TrigPolynomial trig, std::vector<MomentumBump> bumps = {},
                  std::string family = "fourier");

  static HamiltonianSpec zero(std::size_t n) { return HamiltonianSpec(n, TrigPolynomial(2 * n + 1)); }
  static HamiltonianSpec constant(std::size_t n, double c);
  // sin²(π p1) = 1/2 - cos(2π p1)/2.
  static HamiltonianSpec sin_squared_p1(std::size_t n);
  // sin²(π p1) + eps sin(2π s) sin(2π p1).
  static HamiltonianSpec forced_sin_squared(std::size_t n, double eps);

  std::size_t half_dim() const { return n_; }
  const std::string& family() const { return family_; }
  void set_family(std::string family) { family_ = std::move(family); }
  bool autonomous() const;
  bool is_trigonometric() const { return bumps_.empty(); }
  const TrigPolynomial& trig() const { return trig_; }
  const std::vector<MomentumBump>& bumps() const { return bumps_; }

  double eval(std::span<const double> x, double s = 0.0) const;
  // Writes dF (2n entries) and returns F; optionally reports ∂F/∂s.
  double differential(std::span<const double> x, double s, std::span<double> dF,
                       double* dFds = nullptr) const;
  double dds(std::span<const double> x, double s = 0.0) const;

  double eval(const PhasePoint& x, double s = 0.0) const { return eval(x.lift, s); }
  std::vector<double> grad(const PhasePoint& x, double s = 0.0) const;
  double dds(const PhasePoint& x, double s = 0.0) const { return dds(x.lift, s); }

  // Coordinates (0..2n-1, and 2n for s) the function actually depends on.
  std::vector<std::size_t> active_variables() const;

  HamiltonianSpec& operator+=(const HamiltonianSpec& other);
  HamiltonianSpec& operator*=(double scale);
  friend HamiltonianSpec operator+(HamiltonianSpec a, const HamiltonianSpec& b) { return a += b; }
  friend HamiltonianSpec operator*(double s, HamiltonianSpec a) { return a *= s; }
  // Product of trigonometric members (closed under multiplication).
  friend HamiltonianSpec product(const HamiltonianSpec& a, const HamiltonianSpec& b);

  nlohmann::json to_json() const;

 private:
  std::size_t n_ = 0;
  TrigPolynomial trig_;
  std::vector<MomentumBump> bumps_;
  std::string family_ = "fourier";
};

}  // namespace rotvec
