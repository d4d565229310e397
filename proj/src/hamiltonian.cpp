#include "rotvec/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "rotvec/errors.hpp"

namespace rotvec {

double MomentumBump::value(double p) const {
  const double u = (p - center) / half_width;
  if (std::abs(u) >= 1.0) return 0.0;
  return amplitude * std::pow(1.0 - u * u, power);
}

double MomentumBump::derivative(double p) const {
  const double u = (p - center) / half_width;
  if (std::abs(u) >= 1.0) return 0.0;
  return amplitude * power * std::pow(1.0 - u * u, power - 1) * (-2.0 * u / half_width);
}

HamiltonianSpec::HamiltonianSpec(std::size_t n, TrigPolynomial trig, std::vector<MomentumBump> bumps,
                                 std::string family)
    : n_(n), bumps_(std::move(bumps)), family_(std::move(family)) {
  if (n == 0) throw DimensionError("Hamiltonian needs n >= 1");
  if (trig.num_vars() == 2 * n) {
    trig_ = trig.extended(2 * n + 1);
  } else if (trig.num_vars() == 2 * n + 1) {
    trig_ = std::move(trig);
  } else {
    throw DimensionError("Hamiltonian polynomial must have 2n or 2n+1 variables");
  }
  for (const auto& b : bumps_) {
    if (b.coord >= n) throw DimensionError("momentum bump must act on a momentum coordinate");
    if (!(b.half_width > 0.0) || b.power < 2) throw InvalidArgument("bump needs width > 0 and power >= 2");
  }
}

HamiltonianSpec HamiltonianSpec::constant(std::size_t n, double c) {
  return HamiltonianSpec(n, TrigPolynomial::constant(2 * n + 1, c), {}, "constant");
}

HamiltonianSpec HamiltonianSpec::sin_squared_p1(std::size_t n) {
  TrigPolynomial f(2 * n + 1);
  f.add_constant(0.5);
  std::vector<int> k(2 * n + 1, 0);
  k[p_index(0)] = 1;
  f.add_term(k, -0.5, 0.0);
  return HamiltonianSpec(n, std::move(f), {}, "sin2-p1");
}

HamiltonianSpec HamiltonianSpec::forced_sin_squared(std::size_t n, double eps) {
  const std::size_t nv = 2 * n + 1;
  TrigPolynomial sin_s(nv), sin_p(nv);
  std::vector<int> ks(nv, 0), kp(nv, 0);
  ks[2 * n] = 1;
  kp[p_index(0)] = 1;
  sin_s.add_term(ks, 0.0, 1.0);
  sin_p.add_term(kp, 0.0, 1.0);
  HamiltonianSpec h = sin_squared_p1(n);
  h.trig_ += eps * (sin_s * sin_p);
  h.family_ = "sin2-p1-forced";
  return h;
}

bool HamiltonianSpec::autonomous() const { return !trig_.depends_on(2 * n_); }

double HamiltonianSpec::eval(std::span<const double> x, double s) const {
  if (x.size() != 2 * n_) throw DimensionError("Hamiltonian evaluated at wrong dimension");
  double v = trig_.value(x, s);
  for (const auto& b : bumps_) v += b.value(x[b.coord]);
  return v;
}

double HamiltonianSpec::differential(std::span<const double> x, double s, std::span<double> dF,
                                     double* dFds) const {
  const std::size_t m = 2 * n_;
  if (x.size() != m || dF.size() != m) throw DimensionError("Hamiltonian differential dimension mismatch");
  thread_local std::vector<double> full;
  full.resize(m + 1);
  double value = 0.0;
  trig_.value_and_gradient(x, s, value, full);
  std::copy(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(m), dF.begin());
  for (const auto& b : bumps_) {
    value += b.value(x[b.coord]);
    dF[b.coord] += b.derivative(x[b.coord]);
  }
  if (dFds) *dFds = full[m];
  return value;
}

double HamiltonianSpec::dds(std::span<const double> x, double s) const {
  std::vector<double> dF(2 * n_);
  double ds = 0.0;
  differential(x, s, dF, &ds);
  return ds;
}

std::vector<double> HamiltonianSpec::grad(const PhasePoint& x, double s) const {
  std::vector<double> dF(2 * n_);
  differential(x.lift, s, dF);
  return dF;
}

std::vector<std::size_t> HamiltonianSpec::active_variables() const {
  std::vector<std::size_t> vars = trig_.active_variables();
  for (const auto& b : bumps_) {
    if (std::find(vars.begin(), vars.end(), b.coord) == vars.end()) vars.push_back(b.coord);
  }
  std::sort(vars.begin(), vars.end());
  return vars;
}

HamiltonianSpec& HamiltonianSpec::operator+=(const HamiltonianSpec& other) {
  if (other.n_ != n_) throw DimensionError("adding Hamiltonians on different spaces");
  trig_ += other.trig_;
  bumps_.insert(bumps_.end(), other.bumps_.begin(), other.bumps_.end());
  if (family_ != other.family_) family_ = "sum";
  return *this;
}

HamiltonianSpec& HamiltonianSpec::operator*=(double scale) {
  trig_ *= scale;
  for (auto& b : bumps_) b.amplitude *= scale;
  return *this;
}

HamiltonianSpec product(const HamiltonianSpec& a, const HamiltonianSpec& b) {
  if (a.n_ != b.n_) throw DimensionError("multiplying Hamiltonians on different spaces");
  if (!a.is_trigonometric() || !b.is_trigonometric()) {
    throw UnsupportedFamily("products are only closed-form for trigonometric members");
  }
  return HamiltonianSpec(a.n_, a.trig_ * b.trig_, {}, "product");
}

nlohmann::json HamiltonianSpec::to_json() const {
  nlohmann::json j = trig_.to_json();
  j["family"] = family_;
  j["n"] = n_;
  j["autonomous"] = autonomous();
  if (!bumps_.empty()) {
    nlohmann::json bumps = nlohmann::json::array();
    for (const auto& b : bumps_) {
      bumps.push_back({{"coord", b.coord},
                       {"center", b.center},
                       {"half_width", b.half_width},
                       {"power", b.power},
                       {"amplitude", b.amplitude}});
    }
    j["bumps"] = bumps;
  }
  return j;
}

}  // namespace rotvec
