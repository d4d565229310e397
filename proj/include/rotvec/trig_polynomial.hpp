#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

namespace rotvec {

// One harmonic a*cos(2π k·z) + b*sin(2π k·z).
struct TrigTerm {
  std::vector<int> k;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;

  double amplitude() const;
};

// Finite real trigonometric polynomial in `num_vars` variables, each of
// period 1. Terms are kept canonical: the first nonzero frequency entry is
// positive, so k and -k never appear twice. The constant term has k = 0 and
// no sine part.
//
// Evaluation reduces every coordinate mod 1 before forming the phase, so
// un-wrapped lifts of any magnitude evaluate to the same value as their
// wrapped counterparts.
//
// For Hamiltonians the variable layout is (p_1..p_n, q_1..q_n, s); the
// optional trailing overload argument `tail` supplies the last variable when
// the caller keeps it separate from the spatial coordinates.
class TrigPolynomial {
 public:
  explicit TrigPolynomial(std::size_t num_vars = 0);

  static TrigPolynomial constant(std::size_t num_vars, double c);

  // Adds a*cos(2π k·z) + b*sin(2π k·z), merging with an existing harmonic.
  void add_term(std::span<const int> k, double cos_coeff, double sin_coeff);
  void add_constant(double c);

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double constant_term() const;

  double value(std::span<const double> z) const;
  double value(std::span<const double> head, double tail) const;

  // Value and full gradient (size num_vars).
  void value_and_gradient(std::span<const double> z, double& value,
                          std::span<double> grad) const;
  void value_and_gradient(std::span<const double> head, double tail, double& value,
                          std::span<double> grad) const;

  TrigPolynomial derivative(std::size_t var) const;
  // Same polynomial over more variables (new ones appended, frequency 0).
  TrigPolynomial extended(std::size_t num_vars) const;
  // Drops trailing variables; throws if any dropped variable is used.
  TrigPolynomial restricted(std::size_t num_vars) const;

  bool depends_on(std::size_t var) const;
  std::vector<std::size_t> active_variables() const;
  bool is_constant() const;

  // Sum of harmonic amplitudes; bounds sup|f - constant_term| and, with the
  // constant included, sup|f|.
  double amplitude_sum(bool include_constant = true) const;
  // 2π Σ_k |k|_1 * amplitude_k, with |k|_1 restricted to `vars`. Bounds the
  // sum over those variables of sup|∂f/∂z_v|.
  double gradient_bound(std::span<const std::size_t> vars) const;
  int max_frequency() const;

  TrigPolynomial& operator+=(const TrigPolynomial& other);
  TrigPolynomial& operator*=(double scale);
  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
  friend TrigPolynomial operator*(TrigPolynomial a, double s) { return a *= s; }
  friend TrigPolynomial operator*(double s, TrigPolynomial a) { return a *= s; }
  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);

  nlohmann::json to_json() const;
  // Accepts {"constant": c, "terms": [{"k": [...], "cos": a, "sin": b}, ...]}.
  static TrigPolynomial from_json(const nlohmann::json& j, std::size_t num_vars);

 private:
  void insert(std::vector<int> k, double a, double b);
  void rebuild();
  template <class Coord>
  double eval_impl(Coord coord) const;
  template <class Coord>
  void eval_grad_impl(Coord coord, double& value, std::span<double> grad) const;

  std::size_t num_vars_;
  std::vector<TrigTerm> terms_;
  // Sparse frequency table: term t uses entries [offsets_[t], offsets_[t+1]).
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> nz_var_;
  std::vector<int> nz_k_;
  // Harmonic tables: cos/sin(2π j z_v) for j ≤ max |k_v| are built once per
  // evaluation by angle addition and start at harmonic_offset_[v].
  std::vector<std::size_t> harmonic_offset_;
  bool use_tables_ = false;
};

}  // namespace rotvec
