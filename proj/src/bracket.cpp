#include "rotvec/bracket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rotvec/errors.hpp"
#include "rotvec/measures.hpp"
#include "rotvec/vector_field.hpp"

namespace rotvec {

BracketPair bracket_both(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space,
                         const PhasePoint& x, double s) {
  const std::size_t d = space.dim();
  if (x.dim() != d || alpha.dim() != d || f.half_dim() != space.half_dim()) {
    throw DimensionError("bracket dimension mismatch");
  }
  std::vector<double> df(d), a(d);
  f.differential(x.lift, s, df);
  alpha.coefficients(x.lift, a);
  const std::vector<double> v_alpha = space.omega().raise(a);
  std::vector<double> minus_df(d);
  for (std::size_t i = 0; i < d; ++i) minus_df[i] = -df[i];
  const std::vector<double> v_f = space.omega().raise(minus_df);
  BracketPair out;
  for (std::size_t i = 0; i < d; ++i) {
    out.df_sgrad_alpha += df[i] * v_alpha[i];
    out.alpha_sgrad_f += a[i] * v_f[i];
  }
  return out;
}

double bracket(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space, const PhasePoint& x,
               double s) {
  const BracketPair b = bracket_both(f, alpha, space, x, s);
  if (std::abs(b.df_sgrad_alpha - b.alpha_sgrad_f) > 1e-10 * std::max(1.0, std::abs(b.df_sgrad_alpha))) {
    throw InternalInconsistency("dF(sgrad alpha) and alpha(sgrad F) disagree: " + std::to_string(b.df_sgrad_alpha) +
                                " vs " + std::to_string(b.alpha_sgrad_f));
  }
  return b.df_sgrad_alpha;
}

TrigPolynomial bracket_polynomial(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space) {
  const std::size_t d = space.dim();
  if (alpha.dim() != d || f.half_dim() != space.half_dim()) throw DimensionError("bracket dimension mismatch");
  if (!f.is_trigonometric()) throw UnsupportedFamily("bracket polynomial needs a trigonometric Hamiltonian");
  const std::size_t nv = d + 1;

  // β_j = a_j + ∂g/∂x_j over (p, q, s).
  std::vector<TrigPolynomial> beta;
  beta.reserve(d);
  std::optional<TrigPolynomial> g;
  if (alpha.potential) g = alpha.potential->extended(nv);
  for (std::size_t j = 0; j < d; ++j) {
    TrigPolynomial b = g ? g->derivative(j) : TrigPolynomial(nv);
    b.add_constant(alpha.cls.coeffs[j]);
    beta.push_back(std::move(b));
  }
  // R = Ω^{-T}: column j is raise(e_j).
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> e(d, 0.0);
    e[j] = 1.0;
    cols.push_back(space.omega().raise(e));
  }

  TrigPolynomial out(nv);
  for (std::size_t i = 0; i < d; ++i) {
    if (!f.trig().depends_on(i)) continue;
    TrigPolynomial w(nv);
    for (std::size_t j = 0; j < d; ++j) {
      if (cols[j][i] != 0.0) w += cols[j][i] * beta[j];
    }
    if (w.is_zero()) continue;
    out += f.trig().derivative(i) * w;
  }
  return out;
}

nlohmann::json SupNorm::to_json() const {
  return {{"certified", certified}, {"grid_max", grid_max}, {"pad", pad},
          {"lipschitz", lipschitz}, {"grid_res", grid_res}, {"active_variables", active}};
}

namespace {

struct Extrema {
  double min = 0.0;
  double max = 0.0;
};

// Min and max of f over the grid j/res on its active variables.
Extrema grid_scan(const TrigPolynomial& f, const std::vector<std::size_t>& active, std::size_t grid_res) {
  const std::size_t dims = active.size();
  if (dims == 0) return {f.constant_term(), f.constant_term()};
  double total = 1.0;
  for (std::size_t i = 0; i < dims; ++i) total *= static_cast<double>(grid_res);
  if (total > static_cast<double>(1u << 26)) {
    throw InvalidArgument("grid too large: " + std::to_string(grid_res) + "^" + std::to_string(dims));
  }
  const std::size_t points = static_cast<std::size_t>(total);
  const long long res = static_cast<long long>(grid_res);

  std::vector<double> cos_table(grid_res), sin_table(grid_res);
  for (std::size_t i = 0; i < grid_res; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid_res);
    cos_table[i] = std::cos(t);
    sin_table[i] = std::sin(t);
  }
  // Frequencies restricted to the active variables, reduced mod grid_res.
  const auto& terms = f.terms();
  std::vector<long long> kmod(terms.size() * dims);
  std::vector<double> ca(terms.size()), sa(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    ca[t] = terms[t].cos_coeff;
    sa[t] = terms[t].sin_coeff;
    for (std::size_t v = 0; v < dims; ++v) kmod[t * dims + v] = ((terms[t].k[active[v]] % res) + res) % res;
  }

  std::vector<long long> idx(dims, 0);
  std::vector<long long> phase(terms.size(), 0);
  Extrema e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t g = 0; g < points; ++g) {
    double val = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto p = static_cast<std::size_t>(phase[t]);
      val += ca[t] * cos_table[p] + sa[t] * sin_table[p];
    }
    e.min = std::min(e.min, val);
    e.max = std::max(e.max, val);
    // Odometer step; phases follow incrementally.
    for (std::size_t v = dims; v-- > 0;) {
      if (++idx[v] < res) {
        for (std::size_t t = 0; t < terms.size(); ++t) phase[t] = (phase[t] + kmod[t * dims + v]) % res;
        break;
      }
      idx[v] = 0;
      // Digit wraps from res - 1 to 0.
      for (std::size_t t = 0; t < terms.size(); ++t) {
        phase[t] = ((phase[t] - (res - 1) * kmod[t * dims + v]) % res + res) % res;
      }
    }
  }
  return e;
}

}  // namespace

SupNorm sup_norm(const TrigPolynomial& f, std::size_t grid_res, bool lipschitz_pad) {
  if (grid_res < 16) throw InvalidArgument("sup norm needs grid_res >= 16");
  SupNorm out;
  out.grid_res = grid_res;
  out.active = f.active_variables();
  const Extrema e = grid_scan(f, out.active, grid_res);
  out.grid_max = std::max(std::abs(e.min), std::abs(e.max));
  out.lipschitz = f.gradient_bound(out.active);
  out.pad = lipschitz_pad ? out.lipschitz / (2.0 * static_cast<double>(grid_res)) : 0.0;
  out.certified = out.grid_max + out.pad;
  return out;
}

ValueRange value_range(const TrigPolynomial& f, std::size_t grid_res) {
  if (grid_res < 16) throw InvalidArgument("value range needs grid_res >= 16");
  const auto active = f.active_variables();
  const Extrema e = grid_scan(f, active, grid_res);
  return {e.min, e.max, f.gradient_bound(active) / (2.0 * static_cast<double>(grid_res))};
}

SupNorm sup_norm(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space,
                 std::size_t grid_res, bool lipschitz_pad) {
  return sup_norm(bracket_polynomial(f, alpha, space), grid_res, lipschitz_pad);
}

double averaged_bracket(const HamiltonianSpec& f, const ClosedOneForm& alpha, const PhaseSpace& space,
                        const PhasePoint& x, double T, double h, const IntegrateOptions& options) {
  const VectorField field = VectorField::hamiltonian(space, f);
  const Trajectory traj = integrate(field, x, T, h, options);
  return rotation_pairing(empirical_measure(traj), field, alpha);
}

}  // namespace rotvec
