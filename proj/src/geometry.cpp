#include "rotvec/geometry.hpp"

#include <cmath>
#include <sstream>

#include "rotvec/errors.hpp"

namespace rotvec {

SymplecticStructure::SymplecticStructure(Eigen::MatrixXd matrix) : omega_(std::move(matrix)) {
  if (omega_.rows() != omega_.cols() || omega_.rows() == 0 || omega_.rows() % 2 != 0) {
    throw DegenerateForm("symplectic matrix must be square with even positive size");
  }
  if (!omega_.allFinite()) throw DegenerateForm("symplectic matrix has non-finite entries");
  if ((omega_ + omega_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DegenerateForm("symplectic matrix is not antisymmetric");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(omega_);
  if (std::abs(lu.determinant()) <= 1e-12) throw DegenerateForm("symplectic matrix is singular");
  inverse_ = lu.inverse();
  const auto n = omega_.rows();
  if ((omega_ * inverse_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
    throw DegenerateForm("symplectic matrix is too ill-conditioned to invert");
  }
  // Clean round-off so that structurally zero couplings stay exactly zero.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(inverse_(i, j)) < 1e-15) inverse_(i, j) = 0.0;
    }
  }
  raise_.resize(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) raise_[static_cast<std::size_t>(i * n + j)] = inverse_(j, i);
  }
}

SymplecticStructure SymplecticStructure::standard(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    omega(i, i + static_cast<Eigen::Index>(n)) = 1.0;
    omega(i + static_cast<Eigen::Index>(n), i) = -1.0;
  }
  return SymplecticStructure(std::move(omega));
}

SymplecticStructure SymplecticStructure::twisted(double gamma) {
  // (p1, p2, q1, q2) = indices (0, 1, 2, 3)
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(4, 4);
  omega(0, 2) = 1.0;
  omega(1, 2) = gamma;
  omega(1, 3) = 1.0;
  omega(2, 0) = -1.0;
  omega(2, 1) = -gamma;
  omega(3, 1) = -1.0;
  return SymplecticStructure(std::move(omega));
}

double SymplecticStructure::operator()(std::span<const double> u, std::span<const double> w) const {
  const std::size_t m = dimension();
  if (u.size() != m || w.size() != m) throw DimensionError("symplectic pairing dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      sum += u[i] * omega_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * w[j];
    }
  }
  return sum;
}

void SymplecticStructure::raise(std::span<const double> beta, std::span<double> v) const {
  const std::size_t m = dimension();
  if (beta.size() != m || v.size() != m) throw DimensionError("raise dimension mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    const double* row = raise_.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) sum += row[j] * beta[j];
    v[i] = sum;
  }
}

std::vector<double> SymplecticStructure::raise(std::span<const double> beta) const {
  std::vector<double> v(dimension());
  raise(beta, v);
  return v;
}

std::vector<double> SymplecticStructure::contract(std::span<const double> w) const {
  const std::size_t m = dimension();
  if (w.size() != m) throw DimensionError("contraction dimension mismatch");
  std::vector<double> beta(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      beta[j] += omega_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * w[i];
    }
  }
  return beta;
}

PhaseSpace::PhaseSpace(SpaceKind kind, std::size_t n, SymplecticStructure omega)
    : kind_(kind), n_(n), omega_(std::move(omega)) {
  if (n == 0) throw DimensionError("phase space needs n >= 1");
  if (omega_.dimension() != 2 * n) throw DimensionError("symplectic form size does not match 2n");
}

bool PhaseSpace::periodic(std::size_t coord) const {
  if (coord >= dim()) throw DimensionError("coordinate index out of range");
  return kind_ == SpaceKind::torus || coord >= n_;
}

std::string PhaseSpace::describe() const {
  std::ostringstream os;
  os << (kind_ == SpaceKind::torus ? "T^" : "T*T^") << (kind_ == SpaceKind::torus ? 2 * n_ : n_);
  return os.str();
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

double wrap_centered(double x) {
  double r = wrap_unit(x + 0.5) - 0.5;
  return r;
}

PhasePoint wrap(std::span<const double> lift, const PhaseSpace& space) {
  if (lift.size() != space.dim()) {
    throw DimensionError("point has " + std::to_string(lift.size()) + " coordinates, space needs " +
                         std::to_string(space.dim()));
  }
  PhasePoint p{std::vector<double>(lift.begin(), lift.end()), std::vector<double>(lift.size())};
  for (std::size_t i = 0; i < lift.size(); ++i) {
    if (!std::isfinite(lift[i])) throw InvalidPoint("non-finite coordinate " + std::to_string(i));
    p.wrapped[i] = space.periodic(i) ? wrap_unit(lift[i]) : lift[i];
  }
  return p;
}

CohomologyClass CohomologyClass::dp(std::size_t n, std::size_t i, double scale) {
  auto c = zero(n);
  c.coeffs.at(p_index(i)) = scale;
  return c;
}

CohomologyClass CohomologyClass::dq(std::size_t n, std::size_t i, double scale) {
  auto c = zero(n);
  c.coeffs.at(q_index(n, i)) = scale;
  return c;
}

void ClosedOneForm::coefficients(std::span<const double> x, std::span<double> out) const {
  const std::size_t m = dim();
  if (x.size() != m || out.size() != m) throw DimensionError("form evaluated at wrong dimension");
  if (potential && !potential->is_zero()) {
    double g = 0.0;
    potential->value_and_gradient(x, g, out);
    for (std::size_t i = 0; i < m; ++i) out[i] += cls.coeffs[i];
  } else {
    std::copy(cls.coeffs.begin(), cls.coeffs.end(), out.begin());
  }
}

double ClosedOneForm::potential_value(std::span<const double> x) const {
  return potential ? potential->value(x) : 0.0;
}

nlohmann::json ClosedOneForm::to_json() const {
  nlohmann::json j{{"class", cls.coeffs}};
  if (potential) j["potential"] = potential->to_json();
  return j;
}

ClosedOneForm make_form(CohomologyClass cls, std::optional<TrigPolynomial> potential) {
  if (potential && potential->num_vars() != cls.coeffs.size()) {
    throw DimensionError("form potential must be a function of the 2n phase coordinates");
  }
  return ClosedOneForm{std::move(cls), std::move(potential)};
}

double eval_form(const ClosedOneForm& alpha, std::span<const double> v, const PhasePoint& x) {
  const std::size_t m = alpha.dim();
  if (v.size() != m || x.dim() != m) throw DimensionError("eval_form dimension mismatch");
  std::vector<double> coeffs(m);
  alpha.coefficients(x.lift, coeffs);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += coeffs[i] * v[i];
  return sum;
}

double pair(const CohomologyClass& a, const RotationVector& rho) {
  if (a.coeffs.size() != rho.coeffs.size()) throw DimensionError("pairing dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) sum += a.coeffs[i] * rho.coeffs[i];
  return sum;
}

CohomologyClass flux_of_translation(std::span<const double> w, const PhaseSpace& space) {
  return CohomologyClass{space.omega().contract(w)};
}

}  // namespace rotvec
