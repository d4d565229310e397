#include "rotvec/trig_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "rotvec/errors.hpp"

namespace rotvec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double frac(double x) { return x - std::floor(x); }

// Flips k (and the sine coefficient) so that the first nonzero entry is
// positive. Returns false for k = 0.
bool canonicalize(std::vector<int>& k, double& b) {
  for (int ki : k) {
    if (ki == 0) continue;
    if (ki < 0) {
      for (int& kj : k) kj = -kj;
      b = -b;
    }
    return true;
  }
  return false;
}

}  // namespace

double TrigTerm::amplitude() const { return std::hypot(cos_coeff, sin_coeff); }

TrigPolynomial::TrigPolynomial(std::size_t num_vars) : num_vars_(num_vars) { rebuild(); }

TrigPolynomial TrigPolynomial::constant(std::size_t num_vars, double c) {
  TrigPolynomial p(num_vars);
  p.add_constant(c);
  return p;
}

void TrigPolynomial::insert(std::vector<int> k, double a, double b) {
  if (!canonicalize(k, b)) b = 0.0;  // sin(0) vanishes
  if (a == 0.0 && b == 0.0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                             [](const TrigTerm& t, const std::vector<int>& key) { return t.k < key; });
  if (it != terms_.end() && it->k == k) {
    it->cos_coeff += a;
    it->sin_coeff += b;
    if (it->cos_coeff == 0.0 && it->sin_coeff == 0.0) terms_.erase(it);
  } else {
    terms_.insert(it, TrigTerm{std::move(k), a, b});
  }
}

void TrigPolynomial::add_term(std::span<const int> k, double cos_coeff, double sin_coeff) {
  if (k.size() != num_vars_) {
    throw DimensionError("trig term has " + std::to_string(k.size()) + " frequencies, expected " +
                         std::to_string(num_vars_));
  }
  insert(std::vector<int>(k.begin(), k.end()), cos_coeff, sin_coeff);
  rebuild();
}

void TrigPolynomial::add_constant(double c) {
  insert(std::vector<int>(num_vars_, 0), c, 0.0);
  rebuild();
}

double TrigPolynomial::constant_term() const {
  for (const auto& t : terms_) {
    if (std::all_of(t.k.begin(), t.k.end(), [](int v) { return v == 0; })) return t.cos_coeff;
  }
  return 0.0;
}

void TrigPolynomial::rebuild() {
  offsets_.assign(1, 0);
  nz_var_.clear();
  nz_k_.clear();
  for (const auto& t : terms_) {
    for (std::size_t v = 0; v < t.k.size(); ++v) {
      if (t.k[v] != 0) {
        nz_var_.push_back(v);
        nz_k_.push_back(t.k[v]);
      }
    }
    offsets_.push_back(nz_var_.size());
  }
  std::vector<int> max_k(num_vars_, 0);
  for (std::size_t e = 0; e < nz_var_.size(); ++e) max_k[nz_var_[e]] = std::max(max_k[nz_var_[e]], std::abs(nz_k_[e]));
  harmonic_offset_.assign(num_vars_ + 1, 0);
  for (std::size_t v = 0; v < num_vars_; ++v) {
    harmonic_offset_[v + 1] = harmonic_offset_[v] + (max_k[v] > 0 ? static_cast<std::size_t>(max_k[v]) + 1 : 0);
  }
  // Tables pay off once there are more terms than table entries to fill.
  use_tables_ = harmonic_offset_.back() <= 4096 && terms_.size() >= 4;
}

namespace {

struct Harmonics {
  std::vector<double> c, s;
};

// Fills cos/sin(2π j z_v), j = 0..max, for every variable with a table.
template <class Coord>
const Harmonics& harmonics(Coord coord, std::span<const std::size_t> offset) {
  thread_local Harmonics h;
  h.c.resize(offset.back());
  h.s.resize(offset.back());
  for (std::size_t v = 0; v + 1 < offset.size(); ++v) {
    const std::size_t lo = offset[v], hi = offset[v + 1];
    if (lo == hi) continue;
    const double theta = kTwoPi * frac(coord(v));
    const double c1 = std::cos(theta), s1 = std::sin(theta);
    h.c[lo] = 1.0;
    h.s[lo] = 0.0;
    for (std::size_t j = lo + 1; j < hi; ++j) {
      // Re-seed every 16 harmonics to keep rounding from accumulating.
      if ((j - lo) % 16 == 0) {
        const double a = kTwoPi * frac(static_cast<double>(j - lo) * frac(coord(v)));
        h.c[j] = std::cos(a);
        h.s[j] = std::sin(a);
      } else {
        h.c[j] = h.c[j - 1] * c1 - h.s[j - 1] * s1;
        h.s[j] = h.s[j - 1] * c1 + h.c[j - 1] * s1;
      }
    }
  }
  return h;
}

// cos/sin of the phase of one term as a product of table entries.
struct SparseTerms {
  std::span<const std::size_t> harmonic_offset, offsets, var;
  std::span<const int> k;

  void phase(const Harmonics& h, std::size_t t, double& c, double& s) const {
    c = 1.0;
    s = 0.0;
    for (std::size_t e = offsets[t]; e < offsets[t + 1]; ++e) {
      const std::size_t j = harmonic_offset[var[e]] + static_cast<std::size_t>(std::abs(k[e]));
      const double cv = h.c[j], sv = k[e] < 0 ? -h.s[j] : h.s[j];
      const double cn = c * cv - s * sv;
      s = s * cv + c * sv;
      c = cn;
    }
  }
};

}  // namespace

template <class Coord>
double TrigPolynomial::eval_impl(Coord coord) const {
  double sum = 0.0;
  if (use_tables_) {
    const Harmonics& h = harmonics(coord, harmonic_offset_);
    const SparseTerms st{harmonic_offset_, offsets_, nz_var_, nz_k_};
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      double c, s;
      st.phase(h, t, c, s);
      sum += terms_[t].cos_coeff * c + terms_[t].sin_coeff * s;
    }
    return sum;
  }
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    double phase = 0.0;
    for (std::size_t e = offsets_[t]; e < offsets_[t + 1]; ++e) {
      phase += nz_k_[e] * frac(coord(nz_var_[e]));
    }
    const double theta = kTwoPi * frac(phase);
    sum += terms_[t].cos_coeff * std::cos(theta) + terms_[t].sin_coeff * std::sin(theta);
  }
  return sum;
}

template <class Coord>
void TrigPolynomial::eval_grad_impl(Coord coord, double& value, std::span<double> grad) const {
  if (grad.size() != num_vars_) throw DimensionError("gradient buffer size mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);
  value = 0.0;
  const Harmonics* h = use_tables_ ? &harmonics(coord, harmonic_offset_) : nullptr;
  const SparseTerms st{harmonic_offset_, offsets_, nz_var_, nz_k_};
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    double c, s;
    if (h != nullptr) {
      st.phase(*h, t, c, s);
    } else {
      double phase = 0.0;
      for (std::size_t e = offsets_[t]; e < offsets_[t + 1]; ++e) {
        phase += nz_k_[e] * frac(coord(nz_var_[e]));
      }
      const double theta = kTwoPi * frac(phase);
      c = std::cos(theta);
      s = std::sin(theta);
    }
    const double a = terms_[t].cos_coeff;
    const double b = terms_[t].sin_coeff;
    value += a * c + b * s;
    const double slope = kTwoPi * (b * c - a * s);
    for (std::size_t e = offsets_[t]; e < offsets_[t + 1]; ++e) {
      grad[nz_var_[e]] += nz_k_[e] * slope;
    }
  }
}

double TrigPolynomial::value(std::span<const double> z) const {
  if (z.size() != num_vars_) throw DimensionError("trig polynomial evaluated at wrong dimension");
  return eval_impl([&](std::size_t v) { return z[v]; });
}

double TrigPolynomial::value(std::span<const double> head, double tail) const {
  if (head.size() + 1 != num_vars_) throw DimensionError("trig polynomial evaluated at wrong dimension");
  const std::size_t n = head.size();
  return eval_impl([&](std::size_t v) { return v < n ? head[v] : tail; });
}

void TrigPolynomial::value_and_gradient(std::span<const double> z, double& value,
                                        std::span<double> grad) const {
  if (z.size() != num_vars_) throw DimensionError("trig polynomial evaluated at wrong dimension");
  eval_grad_impl([&](std::size_t v) { return z[v]; }, value, grad);
}

void TrigPolynomial::value_and_gradient(std::span<const double> head, double tail, double& value,
                                        std::span<double> grad) const {
  if (head.size() + 1 != num_vars_) throw DimensionError("trig polynomial evaluated at wrong dimension");
  const std::size_t n = head.size();
  eval_grad_impl([&](std::size_t v) { return v < n ? head[v] : tail; }, value, grad);
}

TrigPolynomial TrigPolynomial::derivative(std::size_t var) const {
  if (var >= num_vars_) throw DimensionError("derivative variable out of range");
  TrigPolynomial d(num_vars_);
  for (const auto& t : terms_) {
    const int kv = t.k[var];
    if (kv == 0) continue;
    // d/dz (a cos θ + b sin θ) = 2π k_v (b cos θ - a sin θ)
    d.insert(t.k, kTwoPi * kv * t.sin_coeff, -kTwoPi * kv * t.cos_coeff);
  }
  d.rebuild();
  return d;
}

TrigPolynomial TrigPolynomial::extended(std::size_t num_vars) const {
  if (num_vars < num_vars_) throw DimensionError("cannot extend to fewer variables");
  TrigPolynomial e(num_vars);
  for (const auto& t : terms_) {
    std::vector<int> k = t.k;
    k.resize(num_vars, 0);
    e.insert(std::move(k), t.cos_coeff, t.sin_coeff);
  }
  e.rebuild();
  return e;
}

TrigPolynomial TrigPolynomial::restricted(std::size_t num_vars) const {
  if (num_vars > num_vars_) throw DimensionError("cannot restrict to more variables");
  TrigPolynomial r(num_vars);
  for (const auto& t : terms_) {
    for (std::size_t v = num_vars; v < num_vars_; ++v) {
      if (t.k[v] != 0) throw DimensionError("restricted polynomial depends on a dropped variable");
    }
    r.insert(std::vector<int>(t.k.begin(), t.k.begin() + static_cast<std::ptrdiff_t>(num_vars)),
             t.cos_coeff, t.sin_coeff);
  }
  r.rebuild();
  return r;
}

bool TrigPolynomial::depends_on(std::size_t var) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const TrigTerm& t) { return t.k[var] != 0; });
}

std::vector<std::size_t> TrigPolynomial::active_variables() const {
  std::vector<std::size_t> vars;
  for (std::size_t v = 0; v < num_vars_; ++v) {
    if (depends_on(v)) vars.push_back(v);
  }
  return vars;
}

bool TrigPolynomial::is_constant() const { return active_variables().empty(); }

double TrigPolynomial::amplitude_sum(bool include_constant) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    const bool is_const = std::all_of(t.k.begin(), t.k.end(), [](int v) { return v == 0; });
    if (is_const && !include_constant) continue;
    sum += t.amplitude();
  }
  return sum;
}

double TrigPolynomial::gradient_bound(std::span<const std::size_t> vars) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    long k1 = 0;
    for (std::size_t v : vars) k1 += std::abs(t.k.at(v));
    sum += static_cast<double>(k1) * t.amplitude();
  }
  return kTwoPi * sum;
}

int TrigPolynomial::max_frequency() const {
  int m = 0;
  for (const auto& t : terms_) {
    for (int kv : t.k) m = std::max(m, std::abs(kv));
  }
  return m;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
  if (other.num_vars_ != num_vars_) throw DimensionError("adding trig polynomials of different arity");
  for (const auto& t : other.terms_) insert(t.k, t.cos_coeff, t.sin_coeff);
  rebuild();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) {
      t.cos_coeff *= scale;
      t.sin_coeff *= scale;
    }
  }
  rebuild();
  return *this;
}

TrigPolynomial operator*(const TrigPolynomial& x, const TrigPolynomial& y) {
  if (x.num_vars_ != y.num_vars_) throw DimensionError("multiplying trig polynomials of different arity");
  TrigPolynomial out(x.num_vars_);
  const std::size_t n = x.num_vars_;
  std::vector<int> sum(n), diff(n);
  for (const auto& t1 : x.terms_) {
    for (const auto& t2 : y.terms_) {
      for (std::size_t v = 0; v < n; ++v) {
        sum[v] = t1.k[v] + t2.k[v];
        diff[v] = t1.k[v] - t2.k[v];
      }
      const double a1 = t1.cos_coeff, b1 = t1.sin_coeff;
      const double a2 = t2.cos_coeff, b2 = t2.sin_coeff;
      out.insert(sum, 0.5 * (a1 * a2 - b1 * b2), 0.5 * (a1 * b2 + b1 * a2));
      out.insert(diff, 0.5 * (a1 * a2 + b1 * b2), 0.5 * (b1 * a2 - a1 * b2));
    }
  }
  out.rebuild();
  return out;
}

nlohmann::json TrigPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  double c = 0.0;
  for (const auto& t : terms_) {
    if (std::all_of(t.k.begin(), t.k.end(), [](int v) { return v == 0; })) {
      c = t.cos_coeff;
      continue;
    }
    terms.push_back({{"k", t.k}, {"cos", t.cos_coeff}, {"sin", t.sin_coeff}});
  }
  return {{"constant", c}, {"terms", terms}};
}

TrigPolynomial TrigPolynomial::from_json(const nlohmann::json& j, std::size_t num_vars) {
  TrigPolynomial p(num_vars);
  if (j.contains("constant")) p.insert(std::vector<int>(num_vars, 0), j.at("constant").get<double>(), 0.0);
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      auto k = t.at("k").get<std::vector<int>>();
      if (k.size() > num_vars) throw DimensionError("trig term has too many frequencies");
      k.resize(num_vars, 0);
      p.insert(std::move(k), t.value("cos", 0.0), t.value("sin", 0.0));
    }
  }
  p.rebuild();
  return p;
}

}  // namespace rotvec
