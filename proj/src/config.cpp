#include "rotvec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rotvec/errors.hpp"

namespace rotvec {

namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

void require_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
}

void check_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
  require_object(j, ptr);
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(child(ptr, key), "unknown key");
    }
  }
}

const json& member(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.contains(key)) throw ConfigError(child(ptr, key), "missing required key");
  return j.at(key);
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw ConfigError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(ptr, "expected a finite number");
  return v;
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& ptr) {
  return j.contains(key) ? number(j.at(key), child(ptr, key)) : fallback;
}

double positive_or(const json& j, const std::string& key, double fallback, const std::string& ptr) {
  const double v = number_or(j, key, fallback, ptr);
  if (!(v > 0.0)) throw ConfigError(child(ptr, key), "must be positive");
  return v;
}

std::size_t count(const json& j, const std::string& ptr) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(ptr, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::size_t count_or(const json& j, const std::string& key, std::size_t fallback, const std::string& ptr) {
  return j.contains(key) ? count(j.at(key), child(ptr, key)) : fallback;
}

std::string string(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], child(ptr, i)));
  return out;
}

TrigPolynomial trig_from_json(const json& j, std::size_t num_vars, const std::string& ptr) {
  check_keys(j, ptr, {"constant", "terms"});
  if (j.contains("constant")) number(j.at("constant"), child(ptr, "constant"));
  if (j.contains("terms")) {
    const json& terms = j.at("terms");
    if (!terms.is_array()) throw ConfigError(child(ptr, "terms"), "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tp = child(child(ptr, "terms"), i);
      check_keys(terms[i], tp, {"k", "cos", "sin"});
      const json& k = member(terms[i], "k", tp);
      if (!k.is_array() || !std::all_of(k.begin(), k.end(), [](const json& e) { return e.is_number_integer(); })) {
        throw ConfigError(child(tp, "k"), "expected an array of integers");
      }
      if (k.size() > num_vars) {
        throw ConfigError(child(tp, "k"), "at most " + std::to_string(num_vars) + " frequencies allowed");
      }
      number_or(terms[i], "cos", 0.0, tp);
      number_or(terms[i], "sin", 0.0, tp);
    }
  }
  return TrigPolynomial::from_json(j, num_vars);
}

json common_defaults() {
  return {{"seed", 1},
          {"integration", {{"method", "implicit-midpoint"}, {"tol", 1e-12}, {"max_iter", 50}}}};
}

json profile_family(bool with_target) {
  json f{{"type", "pinned-profile"},
         {"pins", json::array({json::array({0.0, 0.0}), json::array({0.5, 1.0})})},
         {"n_modes", 32},
         {"basis", "odd-harmonic"}};
  if (with_target) f["slope_target"] = 2.1;
  return f;
}

json standard_space() { return {{"preset", "standard"}, {"n", 1}}; }

json orbit_search_defaults(double t_max) {
  return {{"T0", 100.0}, {"T_max", t_max}, {"h", 1e-2}, {"tol", 1e-4}};
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"example1-bound", "example1-sharpness", "example3-twisted", "pb-upper",
                                              "chord",          "nonauto-suspension", "custom"};
  return names;
}

json default_config(const std::string& experiment) {
  json d = common_defaults();
  d["experiment"] = experiment;
  if (experiment == "example1-bound") {
    d["space"] = standard_space();
    d["family"] = {{"type", "preset"}, {"name", "sin-squared-p1"}};
    d["form"] = {{"class", {{"dq1", 1.0}}}};
    d["seeds"] = {{"grid", "full"}, {"per_dim", 32}};
    d["search"] = orbit_search_defaults(1e4);
  } else if (experiment == "example1-sharpness") {
    d["space"] = standard_space();
    d["family"] = profile_family(true);
    d["form"] = {{"class", {{"dq1", 1.0}}}};
    d["seeds"] = {{"grid", "momentum"}, {"per_dim", 1024}};
    d["search"] = orbit_search_defaults(1e4);
  } else if (experiment == "example3-twisted") {
    d["space"] = {{"preset", "twisted-gamma"}, {"gamma", std::sqrt(2.0) - 1.0}};
    d["family"] = {{"type", "preset"}, {"name", "sin-squared-p1"}};
    d["x0"] = {{"p1", 0.2}};
    d["T"] = 1e4;
    d["h"] = 1e-2;
  } else if (experiment == "pb-upper") {
    d["space"] = standard_space();
    d["family"] = profile_family(false);
    d["class"] = {{"dq1", 0.5}};
    d["X"] = {{"momentum", {0.0}}};
    d["X_prime"] = {{"momentum", {0.5}}};
    d["optimizer"] = {{"restarts", 8},   {"max_evaluations", 2000}, {"perturbation", 0.05},
                      {"grid_res", 16384}, {"alpha_modes", 0}};
  } else if (experiment == "chord") {
    d["space"] = standard_space();
    d["form"] = {{"class", {{"dq1", 0.5}}}};
    d["X"] = {{"momentum", {0.0}}};
    d["X_prime"] = {{"momentum", {0.5}}};
    d["chord"] = {{"t_max", 10.0}, {"h", 1e-2}, {"time_tol", 1e-9}};
    d["p_floor"] = 1.0;
    d["expected_time"] = 1.0;
  } else if (experiment == "nonauto-suspension") {
    d["space"] = standard_space();
    d["family"] = {{"type", "preset"}, {"name", "forced-sin-squared"}, {"eps", 0.2}};
    d["form"] = {{"class", {{"dq1", 1.0}}}};
    d["seeds"] = {{"grid", "momentum"}, {"per_dim", 32}};
    d["time_one"] = {{"n0", 100}, {"n_max", 10000}, {"h", 1e-2}, {"tol", 1e-4}};
    d["suspension"] = {{"T", 1000.0}, {"h", 1e-2}, {"shift_c", -3.7}, {"shift_T", 100.0},
                       {"step7_periods", 64}, {"step7_observables", 10}};
  } else if (experiment == "custom") {
    // Everything else comes from the user.
  } else {
    throw ConfigError("/experiment", "unknown experiment '" + experiment + "'");
  }
  return d;
}

PhaseSpace space_from_json(const json& j, const std::string& ptr) {
  require_object(j, ptr);
  if (j.contains("preset")) {
    const std::string preset = string(j.at("preset"), child(ptr, "preset"));
    if (preset == "standard") {
      check_keys(j, ptr, {"preset", "n", "kind"});
      const std::size_t n = count_or(j, "n", 1, ptr);
      if (n == 0) throw ConfigError(child(ptr, "n"), "must be positive");
      const std::string kind = j.contains("kind") ? string(j.at("kind"), child(ptr, "kind")) : "torus";
      if (kind == "torus") return PhaseSpace::torus(n);
      if (kind == "cotangent") return PhaseSpace::cotangent(n);
      throw ConfigError(child(ptr, "kind"), "expected \"torus\" or \"cotangent\"");
    }
    if (preset == "twisted-gamma") {
      check_keys(j, ptr, {"preset", "gamma"});
      const double gamma = number_or(j, "gamma", std::sqrt(2.0) - 1.0, ptr);
      return {SpaceKind::torus, 2, SymplecticStructure::twisted(gamma)};
    }
    throw ConfigError(child(ptr, "preset"), "unknown space preset '" + preset + "'");
  }
  check_keys(j, ptr, {"kind", "omega"});
  const std::string kind = j.contains("kind") ? string(j.at("kind"), child(ptr, "kind")) : "torus";
  if (kind != "torus" && kind != "cotangent") throw ConfigError(child(ptr, "kind"), "expected \"torus\" or \"cotangent\"");
  const json& omega = member(j, "omega", ptr);
  const std::string op = child(ptr, "omega");
  if (!omega.is_array() || omega.empty() || omega.size() % 2 != 0) {
    throw ConfigError(op, "expected a 2n x 2n matrix");
  }
  const std::size_t d = omega.size();
  Eigen::MatrixXd m(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    const auto row = numbers(omega[r], child(op, r));
    if (row.size() != d) throw ConfigError(child(op, r), "row has the wrong length");
    for (std::size_t c = 0; c < d; ++c) m(r, c) = row[c];
  }
  try {
    return {kind == "torus" ? SpaceKind::torus : SpaceKind::cotangent_torus, d / 2, SymplecticStructure(m)};
  } catch (const DegenerateForm& e) {
    throw ConfigError(op, e.what());
  }
}

std::size_t coordinate_from_name(const std::string& name, const PhaseSpace& space, const std::string& ptr) {
  const std::size_t n = space.half_dim();
  if (name.size() >= 2 && (name[0] == 'p' || name[0] == 'q')) {
    std::size_t i = 0;
    try {
      std::size_t used = 0;
      i = std::stoul(name.substr(1), &used);
      if (used != name.size() - 1) i = 0;
    } catch (const std::exception&) {
      i = 0;
    }
    if (i >= 1 && i <= n) return name[0] == 'p' ? p_index(i - 1) : q_index(n, i - 1);
  }
  throw ConfigError(ptr, "unknown coordinate '" + name + "' (expected p1..p" + std::to_string(n) + " or q1..q" +
                             std::to_string(n) + ")");
}

CohomologyClass class_from_json(const json& j, const PhaseSpace& space, const std::string& ptr) {
  CohomologyClass a = CohomologyClass::zero(space.half_dim());
  if (j.is_array()) {
    const auto c = numbers(j, ptr);
    if (c.size() != space.dim()) throw ConfigError(ptr, "class needs " + std::to_string(space.dim()) + " entries");
    a.coeffs = c;
    return a;
  }
  if (!j.is_object()) throw ConfigError(ptr, "expected an array or an object like {\"dq1\": 0.5}");
  for (const auto& [key, value] : j.items()) {
    if (key.size() < 3 || key[0] != 'd') throw ConfigError(child(ptr, key), "expected keys like dp1 or dq2");
    a.coeffs[coordinate_from_name(key.substr(1), space, child(ptr, key))] = number(value, child(ptr, key));
  }
  return a;
}

ClosedOneForm form_from_json(const json& j, const PhaseSpace& space, const std::string& ptr) {
  check_keys(j, ptr, {"class", "potential"});
  CohomologyClass a = class_from_json(member(j, "class", ptr), space, child(ptr, "class"));
  std::optional<TrigPolynomial> g;
  if (j.contains("potential")) g = trig_from_json(j.at("potential"), space.dim(), child(ptr, "potential"));
  return make_form(std::move(a), std::move(g));
}

RegionSpec region_from_json(const json& j, const PhaseSpace& space, const std::string& ptr) {
  check_keys(j, ptr, {"momentum", "levels", "per_dim"});
  const std::size_t per_dim = count_or(j, "per_dim", 32, ptr);
  if (per_dim == 0) throw ConfigError(child(ptr, "per_dim"), "must be positive");
  if (j.contains("momentum") == j.contains("levels")) {
    throw ConfigError(ptr, "give exactly one of \"momentum\" or \"levels\"");
  }
  try {
    if (j.contains("momentum")) {
      const auto c = numbers(j.at("momentum"), child(ptr, "momentum"));
      if (c.size() != space.half_dim()) {
        throw ConfigError(child(ptr, "momentum"), "needs " + std::to_string(space.half_dim()) + " values");
      }
      return RegionSpec::momentum_level(space, c, per_dim);
    }
    const json& levels = j.at("levels");
    if (!levels.is_object() || levels.empty()) throw ConfigError(child(ptr, "levels"), "expected {\"p1\": 0.5, ...}");
    std::vector<CoordinateLevel> fixed;
    for (const auto& [key, value] : levels.items()) {
      const std::string lp = child(child(ptr, "levels"), key);
      fixed.push_back({coordinate_from_name(key, space, lp), number(value, lp)});
    }
    return RegionSpec::levels(space, std::move(fixed), per_dim);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(ptr, e.what());
  }
}

PhasePoint point_from_json(const json& j, const PhaseSpace& space, const std::string& ptr) {
  std::vector<double> x(space.dim(), 0.0);
  if (j.is_array()) {
    x = numbers(j, ptr);
    if (x.size() != space.dim()) throw ConfigError(ptr, "point needs " + std::to_string(space.dim()) + " entries");
  } else {
    require_object(j, ptr);
    for (const auto& [key, value] : j.items()) {
      x[coordinate_from_name(key, space, child(ptr, key))] = number(value, child(ptr, key));
    }
  }
  return wrap(x, space);
}

std::vector<PhasePoint> seeds_from_json(const json& j, const PhaseSpace& space, const std::string& ptr) {
  check_keys(j, ptr, {"grid", "per_dim", "lo", "hi", "points"});
  if (j.contains("points")) {
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.empty()) throw ConfigError(child(ptr, "points"), "expected a non-empty array");
    std::vector<PhasePoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(point_from_json(pts[i], space, child(child(ptr, "points"), i)));
    return out;
  }
  const std::string grid = j.contains("grid") ? string(j.at("grid"), child(ptr, "grid")) : "momentum";
  const std::size_t per_dim = count_or(j, "per_dim", 32, ptr);
  if (per_dim == 0) throw ConfigError(child(ptr, "per_dim"), "must be positive");
  const double lo = number_or(j, "lo", 0.0, ptr), hi = number_or(j, "hi", 1.0, ptr);
  if (!(hi > lo)) throw ConfigError(child(ptr, "hi"), "needs hi > lo");
  if (grid == "momentum") return momentum_seed_grid(space, per_dim, lo, hi);
  if (grid == "full") {
    if (std::pow(static_cast<double>(per_dim), static_cast<double>(space.dim())) > 1e7) {
      throw ConfigError(child(ptr, "per_dim"), "full seed grid would exceed 1e7 points");
    }
    return full_seed_grid(space, per_dim, lo, hi);
  }
  throw ConfigError(child(ptr, "grid"), "expected \"momentum\" or \"full\"");
}

IntegrateOptions integrate_from_json(const json& j, const std::string& ptr) {
  check_keys(j, ptr, {"method", "tol", "max_iter", "drift_budget"});
  IntegrateOptions o;
  if (j.contains("method")) {
    try {
      o.method = method_from_string(string(j.at("method"), child(ptr, "method")));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(child(ptr, "method"), e.what());
    }
  }
  o.tol = positive_or(j, "tol", o.tol, ptr);
  o.max_iter = static_cast<int>(count_or(j, "max_iter", static_cast<std::size_t>(o.max_iter), ptr));
  if (o.max_iter == 0) throw ConfigError(child(ptr, "max_iter"), "must be positive");
  if (j.contains("drift_budget")) o.drift_budget = positive_or(j, "drift_budget", 1.0, ptr);
  return o;
}

FamilyConfig family_from_json(const json& j, const PhaseSpace& space, const std::string& ptr) {
  require_object(j, ptr);
  const std::string type = string(member(j, "type", ptr), child(ptr, "type"));
  const std::size_t n = space.half_dim();
  FamilyConfig out;
  if (type == "preset") {
    check_keys(j, ptr, {"type", "name", "eps"});
    const std::string name = string(member(j, "name", ptr), child(ptr, "name"));
    if (name == "sin-squared-p1") {
      if (j.contains("eps")) throw ConfigError(child(ptr, "eps"), "not used by sin-squared-p1");
      out.fixed = HamiltonianSpec::sin_squared_p1(n);
    } else if (name == "forced-sin-squared") {
      out.fixed = HamiltonianSpec::forced_sin_squared(n, number_or(j, "eps", 0.2, ptr));
    } else {
      throw ConfigError(child(ptr, "name"), "unknown family preset '" + name + "'");
    }
  } else if (type == "fourier") {
    check_keys(j, ptr, {"type", "constant", "terms", "bumps"});
    json trig = json::object();
    if (j.contains("constant")) trig["constant"] = j.at("constant");
    if (j.contains("terms")) trig["terms"] = j.at("terms");
    TrigPolynomial poly = trig_from_json(trig, 2 * n + 1, ptr);
    std::vector<MomentumBump> bumps;
    if (j.contains("bumps")) {
      const json& bj = j.at("bumps");
      const std::string bp = child(ptr, "bumps");
      if (!bj.is_array()) throw ConfigError(bp, "expected an array");
      for (std::size_t i = 0; i < bj.size(); ++i) {
        const std::string ip = child(bp, i);
        check_keys(bj[i], ip, {"coord", "center", "half_width", "power", "amplitude"});
        MomentumBump b;
        b.coord = coordinate_from_name(string(member(bj[i], "coord", ip), child(ip, "coord")), space, child(ip, "coord"));
        if (b.coord >= n) throw ConfigError(child(ip, "coord"), "bumps act on momenta only");
        b.center = number_or(bj[i], "center", 0.0, ip);
        b.half_width = positive_or(bj[i], "half_width", 1.0, ip);
        b.power = static_cast<int>(count_or(bj[i], "power", 4, ip));
        if (b.power < 2) throw ConfigError(child(ip, "power"), "must be at least 2");
        b.amplitude = number_or(bj[i], "amplitude", 1.0, ip);
        bumps.push_back(b);
      }
      if (!bumps.empty() && space.kind() != SpaceKind::cotangent_torus) {
        throw ConfigError(bp, "momentum bumps need a cotangent space");
      }
    }
    if (space.kind() == SpaceKind::cotangent_torus) {
      for (std::size_t i = 0; i < n; ++i) {
        if (poly.depends_on(i)) {
          throw ConfigError(child(ptr, "terms"), "on a cotangent space F may not be periodic in the momenta");
        }
      }
    }
    out.fixed = HamiltonianSpec(n, std::move(poly), std::move(bumps), "fourier");
  } else if (type == "pinned-profile") {
    check_keys(j, ptr, {"type", "pins", "n_modes", "basis", "slope_target"});
    if (space.kind() != SpaceKind::torus) throw ConfigError(child(ptr, "type"), "pinned profiles live on tori");
    ProfileConfig pc;
    const json& pins = member(j, "pins", ptr);
    if (!pins.is_array() || pins.empty()) throw ConfigError(child(ptr, "pins"), "expected [[point, value], ...]");
    for (std::size_t i = 0; i < pins.size(); ++i) {
      const auto pv = numbers(pins[i], child(child(ptr, "pins"), i));
      if (pv.size() != 2) throw ConfigError(child(child(ptr, "pins"), i), "expected [point, value]");
      pc.pins.push_back({pv[0], pv[1]});
    }
    pc.n_modes = count_or(j, "n_modes", 32, ptr);
    if (pc.n_modes == 0) throw ConfigError(child(ptr, "n_modes"), "must be positive");
    if (j.contains("basis")) {
      try {
        pc.basis = profile_basis_from_string(string(j.at("basis"), child(ptr, "basis")));
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(child(ptr, "basis"), e.what());
      }
    }
    if (j.contains("slope_target")) pc.slope_target = positive_or(j, "slope_target", 1.0, ptr);
    try {
      ProfileFamily(pc.pins, pc.n_modes, pc.basis);
    } catch (const InfeasiblePins& e) {
      throw ConfigError(child(ptr, "pins"), e.what());
    }
    out.profile = std::move(pc);
  } else {
    throw ConfigError(child(ptr, "type"), "expected \"preset\", \"fourier\" or \"pinned-profile\"");
  }
  return out;
}

PinnedProfileResult realize_profile(const ProfileConfig& profile, std::size_t n) {
  return make_pinned_profile(n, profile.pins, profile.slope_target, profile.n_modes, profile.basis);
}

HamiltonianSpec realize_family(const FamilyConfig& family, std::size_t n) {
  if (family.fixed) return *family.fixed;
  return realize_profile(*family.profile, n).hamiltonian;
}

namespace {

// Checks everything experiment-specific without running anything.
void check_experiment(const ExperimentConfig& cfg) {
  const json& p = cfg.params;
  const std::string& e = cfg.experiment;

  std::set<std::string> allowed{"experiment", "seed", "output", "jobs", "integration"};
  const json defaults = default_config(e);
  for (const auto& [key, value] : defaults.items()) allowed.insert(key);
  if (e == "custom") {
    for (const char* k : {"space", "family", "form", "seeds", "search", "time_one", "class", "X", "X_prime", "chord",
                          "optimizer", "thresholds"}) {
      allowed.insert(k);
    }
  }
  for (const auto& [key, value] : p.items()) {
    if (!allowed.contains(key)) throw ConfigError("/" + key, "unknown key for experiment " + e);
  }

  integrate_from_json(p.at("integration"), "/integration");
  const PhaseSpace space = space_from_json(member(p, "space", ""), "/space");
  if (p.contains("family")) {
    const FamilyConfig fam = family_from_json(p.at("family"), space, "/family");
    if (e == "pb-upper" && fam.profile && fam.profile->slope_target) {
      throw ConfigError("/family/slope_target", "pb-upper optimizes the profile itself");
    }
  } else if (e != "chord" && e != "custom") {
    throw ConfigError("/family", "missing required key");
  }
  if (p.contains("form")) form_from_json(p.at("form"), space, "/form");
  if (p.contains("class")) class_from_json(p.at("class"), space, "/class");
  if (p.contains("seeds")) seeds_from_json(p.at("seeds"), space, "/seeds");
  if (p.contains("x0")) point_from_json(p.at("x0"), space, "/x0");
  std::optional<RegionSpec> x, xp;
  if (p.contains("X")) x = region_from_json(p.at("X"), space, "/X");
  if (p.contains("X_prime")) xp = region_from_json(p.at("X_prime"), space, "/X_prime");
  if (x.has_value() != xp.has_value()) throw ConfigError(x ? "/X_prime" : "/X", "X and X_prime come together");

  auto check_search = [](const json& s, const std::string& ptr) {
    check_keys(s, ptr, {"T0", "T_max", "h", "tol"});
    const double t0 = positive_or(s, "T0", 100.0, ptr), tm = positive_or(s, "T_max", 1e5, ptr);
    positive_or(s, "h", 1e-2, ptr);
    positive_or(s, "tol", 1e-4, ptr);
    if (tm < t0) throw ConfigError(child(ptr, "T_max"), "must be at least T0");
  };
  auto check_time_one = [](const json& s, const std::string& ptr) {
    check_keys(s, ptr, {"n0", "n_max", "h", "tol"});
    const std::size_t n0 = count_or(s, "n0", 100, ptr), nm = count_or(s, "n_max", 10000, ptr);
    if (n0 == 0 || nm < n0) throw ConfigError(child(ptr, "n_max"), "needs 0 < n0 <= n_max");
    const double h = positive_or(s, "h", 1e-2, ptr);
    if (h > 1.0 || std::abs(std::round(1.0 / h) * h - 1.0) > 1e-12) throw ConfigError(child(ptr, "h"), "must be 1/m");
    positive_or(s, "tol", 1e-4, ptr);
  };
  if (p.contains("search")) check_search(p.at("search"), "/search");
  if (p.contains("time_one")) check_time_one(p.at("time_one"), "/time_one");
  if (p.contains("T")) positive_or(p, "T", 1.0, "");
  if (p.contains("h")) positive_or(p, "h", 1.0, "");
  if (p.contains("p_floor")) positive_or(p, "p_floor", 1.0, "");
  if (p.contains("expected_time")) positive_or(p, "expected_time", 1.0, "");
  if (p.contains("chord")) {
    check_keys(p.at("chord"), "/chord", {"t_max", "h", "time_tol", "level_tol"});
    for (const char* k : {"t_max", "h", "time_tol", "level_tol"}) positive_or(p.at("chord"), k, 1.0, "/chord");
  }
  if (p.contains("optimizer")) {
    const json& o = p.at("optimizer");
    check_keys(o, "/optimizer", {"restarts", "max_evaluations", "perturbation", "grid_res", "alpha_modes"});
    if (count_or(o, "restarts", 8, "/optimizer") == 0) throw ConfigError("/optimizer/restarts", "must be positive");
    count_or(o, "max_evaluations", 2000, "/optimizer");
    positive_or(o, "perturbation", 0.05, "/optimizer");
    if (count_or(o, "grid_res", 16384, "/optimizer") < 16) throw ConfigError("/optimizer/grid_res", "must be >= 16");
    count_or(o, "alpha_modes", 0, "/optimizer");
  }
  if (p.contains("suspension")) {
    const json& s = p.at("suspension");
    check_keys(s, "/suspension", {"T", "h", "shift_c", "shift_T", "step7_periods", "step7_observables"});
    positive_or(s, "T", 1000.0, "/suspension");
    positive_or(s, "h", 1e-2, "/suspension");
    number_or(s, "shift_c", -3.7, "/suspension");
    positive_or(s, "shift_T", 100.0, "/suspension");
    if (count_or(s, "step7_periods", 64, "/suspension") == 0) throw ConfigError("/suspension/step7_periods", "must be positive");
    count_or(s, "step7_observables", 10, "/suspension");
  }
  if (p.contains("thresholds")) {
    const json& t = p.at("thresholds");
    check_keys(t, "/thresholds", {"min_abs_pairing", "max_abs_pairing", "max_chord_time", "max_pb"});
    for (const auto& [key, value] : t.items()) number(value, "/thresholds/" + key);
  }

  if (e == "custom") {
    member(p, "form", "");
    if (!p.contains("family") && !x) throw ConfigError("/family", "custom runs need a family or regions X, X_prime");
    if (x && !p.contains("chord") && !p.contains("optimizer")) {
      throw ConfigError("/X", "regions need a \"chord\" or \"optimizer\" section");
    }
    if (p.contains("optimizer") && !p.contains("class")) throw ConfigError("/class", "pb needs a class");
    if (p.contains("optimizer") && !x) throw ConfigError("/X", "pb needs regions X and X_prime");
  }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  if (!j.contains("experiment")) throw ConfigError("/experiment", "missing required key");
  ExperimentConfig cfg;
  cfg.experiment = string(j.at("experiment"), "/experiment");
  json params = default_config(cfg.experiment);
  // Top-level sections replace the defaults wholesale.
  for (const auto& [key, value] : j.items()) params[key] = value;
  const json& seed = params.at("seed");
  if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<long long>() < 0)) {
    throw ConfigError("/seed", "expected a non-negative integer");
  }
  cfg.seed = seed.get<std::uint64_t>();
  if (params.contains("output")) cfg.output = string(params.at("output"), "/output");
  if (params.contains("jobs")) {
    cfg.jobs = count(params.at("jobs"), "/jobs");
    if (*cfg.jobs == 0) throw ConfigError("/jobs", "must be positive");
  }
  cfg.params = std::move(params);
  try {
    check_experiment(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace rotvec
