#include "rotvec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "rotvec/errors.hpp"
#include "rotvec/nelder_mead.hpp"

namespace rotvec {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double basis_value(int k, bool sine, double p, int order) {
  const double theta = two_pi * k * wrap_unit(p) + order * std::numbers::pi / 2.0;
  const double scale = order == 0 ? 1.0 : std::pow(two_pi * k, order);
  return scale * (sine ? std::sin(theta) : std::cos(theta));
}

std::size_t matrix_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<std::size_t>(lu.rank());
}

// Equispaced tables for u' and u'' on [0, 1).
class SlopeGrid {
 public:
  SlopeGrid(const ProfileFamily& family, std::size_t grid) : family_(family), grid_(grid) {
    if (grid < 2) throw InvalidArgument("slope grid needs at least 2 points");
    cos_.resize(grid);
    sin_.resize(grid);
    for (std::size_t i = 0; i < grid; ++i) {
      const double t = two_pi * static_cast<double>(i) / static_cast<double>(grid);
      cos_[i] = std::cos(t);
      sin_[i] = std::sin(t);
    }
  }

  SlopeCertificate certify(std::span<const double> c) const {
    const std::size_t nc = family_.num_coefficients();
    SlopeCertificate cert;
    cert.grid = grid_;
    const double h = 1.0 / static_cast<double>(grid_);
    double m3 = 0.0;
    for (std::size_t j = 0; j < nc; ++j) m3 += std::abs(c[j]) * std::pow(two_pi * family_.frequency(j), 3);
    double best = 0.0, grid_max = 0.0;
    for (std::size_t i = 0; i < grid_; ++i) {
      double d1 = 0.0, d2 = 0.0;
      for (std::size_t j = 0; j < nc; ++j) {
        const int k = family_.frequency(j);
        if (k == 0 || c[j] == 0.0) continue;
        const std::size_t idx = (static_cast<std::size_t>(k) * i) % grid_;
        const double w = two_pi * k;
        if (family_.is_sine(j)) {
          d1 += c[j] * w * cos_[idx];
          d2 -= c[j] * w * w * sin_[idx];
        } else {
          d1 -= c[j] * w * sin_[idx];
          d2 -= c[j] * w * w * cos_[idx];
        }
      }
      grid_max = std::max(grid_max, std::abs(d1));
      best = std::max(best, std::abs(d1) + std::abs(d2) * h / 2.0);
    }
    cert.grid_max = grid_max;
    cert.third_derivative_bound = m3;
    cert.certified = best + h * h / 8.0 * m3;
    return cert;
  }

 private:
  const ProfileFamily& family_;
  std::size_t grid_;
  std::vector<double> cos_, sin_;
};

}  // namespace

const char* to_string(ProfileBasis basis) {
  switch (basis) {
    case ProfileBasis::full:
      return "full";
    case ProfileBasis::even:
      return "even";
    case ProfileBasis::odd_harmonic:
      return "odd-harmonic";
  }
  return "?";
}

ProfileBasis profile_basis_from_string(const std::string& name) {
  if (name == "full") return ProfileBasis::full;
  if (name == "even") return ProfileBasis::even;
  if (name == "odd-harmonic") return ProfileBasis::odd_harmonic;
  throw InvalidArgument("unknown profile basis '" + name + "'");
}

ProfileFamily::ProfileFamily(std::vector<Pin> pins, std::size_t n_modes, ProfileBasis basis)
    : n_modes_(n_modes), basis_(basis) {
  for (const auto& pin : pins) {
    if (!std::isfinite(pin.point) || !std::isfinite(pin.value)) throw InvalidPoint("non-finite pin");
    bool duplicate = false;
    for (const auto& kept : pins_) {
      if (std::abs(wrap_centered(pin.point - kept.point)) > 1e-12) continue;
      if (std::abs(pin.value - kept.value) > 1e-10) throw InfeasiblePins("two different values pinned at one point");
      duplicate = true;
    }
    if (!duplicate) pins_.push_back(pin);
  }

  freq_.push_back(0);
  sine_.push_back(false);
  for (int k = 1; k <= static_cast<int>(n_modes); ++k) {
    if (basis == ProfileBasis::odd_harmonic && k % 2 == 0) continue;
    freq_.push_back(k);
    sine_.push_back(false);
    if (basis == ProfileBasis::full) {
      freq_.push_back(k);
      sine_.push_back(true);
    }
  }

  const std::size_t m = pins_.size();
  const std::size_t nc = freq_.size();
  Eigen::MatrixXd a(m, nc);
  Eigen::VectorXd v(m);
  for (std::size_t i = 0; i < m; ++i) {
    v(i) = pins_[i].value;
    for (std::size_t j = 0; j < nc; ++j) a(i, j) = basis_value(freq_[j], sine_[j], pins_[i].point, 0);
  }
  const std::size_t rank = matrix_rank(a);

  // Greedy pivots in basis order, i.e. lowest frequency first.
  Eigen::MatrixXd chosen(m, 0);
  for (std::size_t j = 0; j < nc && pivot_.size() < rank; ++j) {
    Eigen::MatrixXd trial(m, chosen.cols() + 1);
    trial << chosen, a.col(static_cast<Eigen::Index>(j));
    if (matrix_rank(trial) > pivot_.size()) {
      pivot_.push_back(j);
      chosen = std::move(trial);
    }
  }
  for (std::size_t j = 0; j < nc; ++j) {
    if (std::find(pivot_.begin(), pivot_.end(), j) == pivot_.end()) free_.push_back(j);
  }

  const std::size_t np = pivot_.size(), nf = free_.size();
  offset_.assign(np, 0.0);
  gain_.assign(np * nf, 0.0);
  if (np > 0) {
    const auto qr = chosen.colPivHouseholderQr();
    const Eigen::VectorXd off = qr.solve(v);
    if ((chosen * off - v).cwiseAbs().maxCoeff() > 1e-10) {
      throw InfeasiblePins("pins are inconsistent with the profile basis");
    }
    for (std::size_t r = 0; r < np; ++r) offset_[r] = off(static_cast<Eigen::Index>(r));
    for (std::size_t f = 0; f < nf; ++f) {
      const Eigen::VectorXd g = qr.solve(a.col(static_cast<Eigen::Index>(free_[f])));
      for (std::size_t r = 0; r < np; ++r) gain_[r * nf + f] = -g(static_cast<Eigen::Index>(r));
    }
  } else if (m > 0 && v.cwiseAbs().maxCoeff() > 1e-10) {
    throw InfeasiblePins("pins are inconsistent with the profile basis");
  }
}

std::vector<double> ProfileFamily::coefficients(std::span<const double> params) const {
  if (params.size() != free_.size()) throw DimensionError("profile parameter count mismatch");
  std::vector<double> c(freq_.size(), 0.0);
  const std::size_t nf = free_.size();
  for (std::size_t f = 0; f < nf; ++f) c[free_[f]] = params[f];
  for (std::size_t r = 0; r < pivot_.size(); ++r) {
    double x = offset_[r];
    for (std::size_t f = 0; f < nf; ++f) x += gain_[r * nf + f] * params[f];
    c[pivot_[r]] = x;
  }
  return c;
}

std::vector<double> ProfileFamily::params_of(std::span<const double> coeffs) const {
  if (coeffs.size() != freq_.size()) throw DimensionError("profile coefficient count mismatch");
  std::vector<double> p;
  p.reserve(free_.size());
  for (std::size_t j : free_) p.push_back(coeffs[j]);
  return p;
}

std::vector<double> ProfileFamily::project(std::span<const double> coeffs) const {
  if (coeffs.size() != freq_.size()) throw DimensionError("profile coefficient count mismatch");
  const std::size_t m = pins_.size(), nc = freq_.size();
  std::vector<double> out(coeffs.begin(), coeffs.end());
  if (m == 0) return out;
  Eigen::MatrixXd a(m, nc);
  Eigen::VectorXd c(nc), winv(nc), r(m);
  for (std::size_t j = 0; j < nc; ++j) {
    c(j) = coeffs[j];
    winv(j) = 1.0 / (1.0 + std::pow(two_pi * freq_[j], 4));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nc; ++j) a(i, j) = basis_value(freq_[j], sine_[j], pins_[i].point, 0);
  }
  for (std::size_t i = 0; i < m; ++i) r(i) = pins_[i].value;
  r -= a * c;
  const Eigen::MatrixXd aw = a * winv.asDiagonal();
  const Eigen::MatrixXd gram = aw * a.transpose();
  const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(r);
  const Eigen::VectorXd corrected = c + aw.transpose() * lambda;
  for (std::size_t j = 0; j < nc; ++j) out[j] = corrected(j);
  // Round-trip through the parametrization so the pins hold to rounding.
  return coefficients(params_of(out));
}

double ProfileFamily::value(std::span<const double> coeffs, double p) const { return derivative(coeffs, p, 0); }

double ProfileFamily::derivative(std::span<const double> coeffs, double p, int order) const {
  if (coeffs.size() != freq_.size()) throw DimensionError("profile coefficient count mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < freq_.size(); ++j) {
    if (freq_[j] == 0 && order > 0) continue;
    s += coeffs[j] * basis_value(freq_[j], sine_[j], p, order);
  }
  return s;
}

double ProfileFamily::max_pin_residual(std::span<const double> coeffs) const {
  double r = 0.0;
  for (const auto& pin : pins_) r = std::max(r, std::abs(value(coeffs, pin.point) - pin.value));
  return r;
}

TrigPolynomial ProfileFamily::polynomial(std::span<const double> coeffs) const {
  if (coeffs.size() != freq_.size()) throw DimensionError("profile coefficient count mismatch");
  TrigPolynomial u(1);
  for (std::size_t j = 0; j < freq_.size(); ++j) {
    if (coeffs[j] == 0.0) continue;
    if (freq_[j] == 0) {
      u.add_constant(coeffs[j]);
      continue;
    }
    const int k[1] = {freq_[j]};
    u.add_term(k, sine_[j] ? 0.0 : coeffs[j], sine_[j] ? coeffs[j] : 0.0);
  }
  return u;
}

HamiltonianSpec ProfileFamily::hamiltonian(std::size_t n, std::span<const double> coeffs) const {
  if (n == 0) throw DimensionError("Hamiltonian needs n >= 1");
  const TrigPolynomial u = polynomial(coeffs);
  // p_1 is variable 0, so extending the one-variable polynomial is exact.
  return HamiltonianSpec(n, u.extended(2 * n + 1), {}, "pinned-profile");
}

std::vector<double> ProfileFamily::smoothed_interpolant() const {
  const std::size_t nc = freq_.size();
  std::vector<double> c(nc, 0.0);
  if (pins_.empty()) return coefficients(params_of(c));

  std::vector<Pin> sorted = pins_;
  for (auto& p : sorted) p.point = wrap_unit(p.point);
  std::sort(sorted.begin(), sorted.end(), [](const Pin& a, const Pin& b) { return a.point < b.point; });
  auto interp = [&](double y) {
    if (sorted.size() == 1) return sorted[0].value;
    // Segment [sorted[i], sorted[i+1]] with the last one wrapping past 1.
    std::size_t i = sorted.size() - 1;
    for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
      if (y >= sorted[j].point && y < sorted[j + 1].point) i = j;
    }
    const Pin& a = sorted[i];
    const Pin& b = sorted[(i + 1) % sorted.size()];
    double span = b.point - a.point;
    double off = y - a.point;
    if (span <= 0.0) span += 1.0;
    if (off < 0.0) off += 1.0;
    return a.value + (b.value - a.value) * off / span;
  };

  const std::size_t samples = 8192;
  std::vector<double> f(samples);
  for (std::size_t i = 0; i < samples; ++i) f[i] = interp(static_cast<double>(i) / samples);
  const double lanczos_base = static_cast<double>(n_modes_ + 1);
  for (std::size_t j = 0; j < nc; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      acc += f[i] * basis_value(freq_[j], sine_[j], static_cast<double>(i) / samples, 0);
    }
    acc /= static_cast<double>(samples);
    if (freq_[j] == 0) {
      c[j] = acc;
      continue;
    }
    const double x = std::numbers::pi * freq_[j] / lanczos_base;
    c[j] = 2.0 * acc * std::sin(x) / x;
  }
  return project(c);
}

SlopeCertificate certify_slope(const ProfileFamily& family, std::span<const double> coeffs, std::size_t grid) {
  if (coeffs.size() != family.num_coefficients()) throw DimensionError("profile coefficient count mismatch");
  return SlopeGrid(family, grid).certify(coeffs);
}

PinnedProfileResult make_pinned_profile(std::size_t n, std::vector<Pin> pins, std::optional<double> slope_target,
                                        std::size_t n_modes, ProfileBasis basis) {
  const ProfileFamily family(std::move(pins), n_modes, basis);
  PinnedProfileResult out;
  out.slope_target = slope_target;
  const SlopeGrid grid(family, 4096);

  if (!slope_target) {
    // Smallest weighted-norm pinned coefficients.
    out.coeffs = family.project(std::vector<double>(family.num_coefficients(), 0.0));
  } else {
    const std::vector<double> start = family.smoothed_interpolant();
    const std::vector<double> x0 = family.params_of(start);
    std::vector<double> scale(x0.size());
    for (std::size_t j = 0; j < x0.size(); ++j) scale[j] = std::abs(x0[j]) + 1e-3;
    const Objective objective = [&](std::span<const double> x) {
      return grid.certify(family.coefficients(x)).certified;
    };
    RestartOptions opts;
    opts.restarts = 4;
    const RestartResult best = minimize_with_restarts(objective, x0, scale, opts);
    out.coeffs = family.coefficients(best.x);
    if (grid.certify(start).certified < grid.certify(out.coeffs).certified) out.coeffs = start;
  }
  out.slope = grid.certify(out.coeffs);
  out.target_met = !slope_target || out.slope.certified <= *slope_target;
  out.pin_residual = family.max_pin_residual(out.coeffs);
  out.hamiltonian = family.hamiltonian(n, out.coeffs);
  return out;
}

}  // namespace rotvec
