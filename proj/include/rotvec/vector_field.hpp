#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotvec/geometry.hpp"
#include "rotvec/hamiltonian.hpp"

namespace rotvec {

// v = sgrad α, i.e. i_v ω = α.
std::vector<double> sgrad_form(const ClosedOneForm& alpha, const PhaseSpace& space, const PhasePoint& x);
// sgrad F = sgrad(-dF). On the standard form: q' = ∂F/∂p, p' = -∂F/∂q.
std::vector<double> sgrad(const HamiltonianSpec& f, const PhaseSpace& space, const PhasePoint& x, double s = 0.0);

// Hamiltonian field of F (possibly time-dependent, s = t) or the locally
// Hamiltonian field of a closed 1-form.
class VectorField {
 public:
  enum class Kind { hamiltonian, locally_hamiltonian };

  static VectorField hamiltonian(const PhaseSpace& space, HamiltonianSpec f);
  static VectorField locally_hamiltonian(const PhaseSpace& space, ClosedOneForm alpha);

  Kind kind() const { return kind_; }
  const PhaseSpace& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }
  bool autonomous() const;
  const HamiltonianSpec* hamiltonian_spec() const { return f_ ? &*f_ : nullptr; }
  const ClosedOneForm* form() const { return alpha_ ? &*alpha_ : nullptr; }
  std::string id() const;

  // v(x, t); thread-safe.
  void eval(std::span<const double> x, double t, std::span<double> v) const;
  std::vector<double> operator()(std::span<const double> x, double t = 0.0) const;

  // F(x, t) for Hamiltonian fields; nullopt otherwise.
  std::optional<double> energy(std::span<const double> x, double t = 0.0) const;

 private:
  VectorField(Kind kind, const PhaseSpace& space) : kind_(kind), space_(space) {}

  Kind kind_;
  PhaseSpace space_;
  std::optional<HamiltonianSpec> f_;
  std::optional<ClosedOneForm> alpha_;
};

}  // namespace rotvec
