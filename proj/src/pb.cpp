#include "rotvec/pb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rotvec/errors.hpp"
#include "rotvec/nelder_mead.hpp"

namespace rotvec {

PbProblem::PbProblem(PhaseSpace space, RegionSpec x, RegionSpec x_prime, CohomologyClass a, HamiltonianSpec fixed_f,
                     std::size_t alpha_modes)
    : space_(std::move(space)),
      x_(std::move(x)),
      x_prime_(std::move(x_prime)),
      a_(std::move(a)),
      fixed_f_(std::move(fixed_f)),
      alpha_modes_(alpha_modes) {
  if (fixed_f_->half_dim() != space_.half_dim()) throw DimensionError("F lives on a different space");
  init();
}

PbProblem::PbProblem(PhaseSpace space, RegionSpec x, RegionSpec x_prime, CohomologyClass a, ProfileFamily profile,
                     std::size_t alpha_modes)
    : space_(std::move(space)),
      x_(std::move(x)),
      x_prime_(std::move(x_prime)),
      a_(std::move(a)),
      profile_(std::move(profile)),
      alpha_modes_(alpha_modes) {
  init();
}

void PbProblem::init() {
  const std::size_t d = space_.dim();
  if (a_.coeffs.size() != d || x_.dim() != d || x_prime_.dim() != d) throw DimensionError("pb problem dimension mismatch");
  if (x_.is_empty() || x_prime_.is_empty()) throw InvalidArgument("pb regions need non-empty sample grids");
  for (const auto& p : x_.grid()) {
    if (x_prime_.contains(p)) throw InvalidArgument("X and X' intersect");
  }
  for (const auto& p : x_prime_.grid()) {
    if (x_.contains(p)) throw InvalidArgument("X and X' intersect");
  }
  for (std::size_t v = 0; v < d; ++v) {
    if (!space_.periodic(v)) continue;
    for (int k = 1; k <= static_cast<int>(alpha_modes_); ++k) {
      alpha_basis_.push_back({v, k, false});
      alpha_basis_.push_back({v, k, true});
    }
  }
}

HamiltonianSpec PbProblem::make_f(std::span<const double> params) const {
  if (params.size() != f_params()) throw DimensionError("F parameter count mismatch");
  if (!profile_) return *fixed_f_;
  return profile_->hamiltonian(space_.half_dim(), profile_->coefficients(params));
}

ClosedOneForm PbProblem::make_alpha(std::span<const double> params) const {
  if (params.size() != alpha_params()) throw DimensionError("alpha parameter count mismatch");
  if (alpha_basis_.empty()) return make_form(a_);
  TrigPolynomial g(space_.dim());
  std::vector<int> k(space_.dim(), 0);
  for (std::size_t j = 0; j < alpha_basis_.size(); ++j) {
    if (params[j] == 0.0) continue;
    const AlphaMode& m = alpha_basis_[j];
    std::fill(k.begin(), k.end(), 0);
    k[m.var] = m.k;
    g.add_term(k, m.sine ? 0.0 : params[j], m.sine ? params[j] : 0.0);
  }
  return make_form(a_, std::move(g));
}

PbProblem::Validation PbProblem::validate(const HamiltonianSpec& f, double tol) const {
  Validation v;
  v.max_on_x = -std::numeric_limits<double>::infinity();
  v.min_on_x_prime = std::numeric_limits<double>::infinity();
  for (const auto& p : x_.grid()) v.max_on_x = std::max(v.max_on_x, f.eval(p));
  for (const auto& p : x_prime_.grid()) v.min_on_x_prime = std::min(v.min_on_x_prime, f.eval(p));
  v.ok = v.max_on_x <= tol && v.min_on_x_prime >= 1.0 - tol;
  return v;
}

nlohmann::json PbProblem::to_json() const {
  nlohmann::json j{{"space", space_.describe()},
                   {"X", x_.to_json()},
                   {"X_prime", x_prime_.to_json()},
                   {"class", a_.coeffs},
                   {"alpha_modes", alpha_modes_},
                   {"family_dimension", family_dimension()}};
  if (profile_) {
    j["F_family"] = {{"family", "pinned-profile"},
                     {"n_modes", profile_->n_modes()},
                     {"basis", to_string(profile_->basis())},
                     {"params", profile_->num_params()}};
  } else {
    j["F_family"] = {{"family", "fixed"}, {"F", fixed_f_->to_json()}};
  }
  return j;
}

nlohmann::json PbAudit::to_json() const {
  return {{"winner_valid", winner.ok},
          {"winner_max_on_X", winner.max_on_x},
          {"winner_min_on_X_prime", winner.min_on_x_prime},
          {"family_dimension", family_dimension},
          {"evaluations", evaluations},
          {"rejected", rejected},
          {"min_certified_seen", min_certified_seen},
          {"restart_values", restart_values}};
}

nlohmann::json PbResult::to_json() const {
  return {{"value", value},
          {"F", best_f.to_json()},
          {"alpha", best_alpha.to_json()},
          {"F_params", f_params},
          {"alpha_params", alpha_params},
          {"sup_norm", sup.to_json()},
          {"audit", audit.to_json()}};
}

namespace {

std::size_t grid_for(std::size_t dims, const PbOptions& o) {
  if (dims <= 1) return std::max<std::size_t>(16, std::min(o.grid_res, o.max_grid_points));
  const auto cap = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(o.max_grid_points), 1.0 / dims)));
  return std::max<std::size_t>(16, std::min(o.grid_res, cap));
}

SupNorm certify(const PbProblem& problem, const HamiltonianSpec& f, const ClosedOneForm& alpha, const PbOptions& o) {
  const TrigPolynomial poly = bracket_polynomial(f, alpha, problem.space());
  return sup_norm(poly, grid_for(poly.active_variables().size(), o), true);
}

}  // namespace

PbResult pb_upper_bound(const PbProblem& problem, const PbOptions& options) {
  const std::size_t nf = problem.f_params();
  const std::size_t na = problem.alpha_params();

  std::vector<double> x0(nf + na, 0.0), scale(nf + na, 1.0);
  if (problem.profile()) {
    const auto start = problem.profile()->params_of(problem.profile()->smoothed_interpolant());
    for (std::size_t j = 0; j < nf; ++j) {
      x0[j] = start[j];
      scale[j] = std::abs(start[j]) + 1e-3;
    }
  }
  // α modes come in (cos, sin) pairs for k = 1..m on each periodic coordinate.
  for (std::size_t j = 0; j < na; ++j) {
    const double k = static_cast<double>((j % (2 * problem.alpha_modes())) / 2 + 1);
    scale[nf + j] = 1.0 / (2.0 * std::numbers::pi * k);
  }

  PbAudit audit;
  audit.family_dimension = problem.family_dimension();
  audit.min_certified_seen = std::numeric_limits<double>::infinity();
  const Objective objective = [&](std::span<const double> x) {
    ++audit.evaluations;
    const HamiltonianSpec f = problem.make_f(x.subspan(0, nf));
    if (!problem.validate(f, options.constraint_tol).ok) {
      ++audit.rejected;
      return std::numeric_limits<double>::infinity();
    }
    const double v = certify(problem, f, problem.make_alpha(x.subspan(nf, na)), options).certified;
    audit.min_certified_seen = std::min(audit.min_certified_seen, v);
    return v;
  };

  RestartOptions ro;
  ro.restarts = x0.empty() ? 1 : options.restarts;
  ro.max_evaluations = options.max_evaluations;
  ro.perturbation = options.perturbation;
  ro.seed = options.seed;
  const RestartResult best = minimize_with_restarts(objective, x0, scale, ro);
  audit.restart_values = best.restart_values;
  if (!std::isfinite(best.value)) throw InfeasibleFamily("no candidate in the family satisfies F|X <= 0, F|X' >= 1");

  PbResult out;
  out.f_params.assign(best.x.begin(), best.x.begin() + static_cast<std::ptrdiff_t>(nf));
  out.alpha_params.assign(best.x.begin() + static_cast<std::ptrdiff_t>(nf), best.x.end());
  out.best_f = problem.make_f(out.f_params);
  out.best_alpha = problem.make_alpha(out.alpha_params);
  out.sup = certify(problem, out.best_f, out.best_alpha, options);
  out.value = out.sup.certified;
  audit.winner = problem.validate(out.best_f, options.constraint_tol);
  out.audit = std::move(audit);
  return out;
}

}  // namespace rotvec
