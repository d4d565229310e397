#include "rotvec/vector_field.hpp"

#include "rotvec/errors.hpp"

namespace rotvec {

std::vector<double> sgrad_form(const ClosedOneForm& alpha, const PhaseSpace& space, const PhasePoint& x) {
  if (alpha.dim() != space.dim() || x.dim() != space.dim()) throw DimensionError("sgrad_form dimension mismatch");
  std::vector<double> beta(space.dim());
  alpha.coefficients(x.lift, beta);
  return space.omega().raise(beta);
}

std::vector<double> sgrad(const HamiltonianSpec& f, const PhaseSpace& space, const PhasePoint& x, double s) {
  if (f.half_dim() != space.half_dim() || x.dim() != space.dim()) throw DimensionError("sgrad dimension mismatch");
  std::vector<double> beta(space.dim());
  f.differential(x.lift, s, beta);
  for (double& b : beta) b = -b;
  return space.omega().raise(beta);
}

VectorField VectorField::hamiltonian(const PhaseSpace& space, HamiltonianSpec f) {
  if (f.half_dim() != space.half_dim()) throw DimensionError("Hamiltonian and phase space disagree on n");
  VectorField v(Kind::hamiltonian, space);
  v.f_ = std::move(f);
  return v;
}

VectorField VectorField::locally_hamiltonian(const PhaseSpace& space, ClosedOneForm alpha) {
  if (alpha.dim() != space.dim()) throw DimensionError("form and phase space disagree on dimension");
  VectorField v(Kind::locally_hamiltonian, space);
  v.alpha_ = std::move(alpha);
  return v;
}

bool VectorField::autonomous() const { return kind_ == Kind::locally_hamiltonian || f_->autonomous(); }

std::string VectorField::id() const {
  if (kind_ == Kind::hamiltonian) return "sgrad F [" + f_->family() + "] on " + space_.describe();
  return "sgrad alpha on " + space_.describe();
}

void VectorField::eval(std::span<const double> x, double t, std::span<double> v) const {
  const std::size_t d = space_.dim();
  if (x.size() != d || v.size() != d) throw DimensionError("vector field evaluated at wrong dimension");
  thread_local std::vector<double> beta;
  beta.resize(d);
  if (kind_ == Kind::hamiltonian) {
    f_->differential(x, t, beta);
    for (double& b : beta) b = -b;
  } else {
    alpha_->coefficients(x, beta);
  }
  space_.omega().raise(beta, v);
}

std::vector<double> VectorField::operator()(std::span<const double> x, double t) const {
  std::vector<double> v(space_.dim());
  eval(x, t, v);
  return v;
}

std::optional<double> VectorField::energy(std::span<const double> x, double t) const {
  if (kind_ != Kind::hamiltonian) return std::nullopt;
  return f_->eval(x, t);
}

}  // namespace rotvec
