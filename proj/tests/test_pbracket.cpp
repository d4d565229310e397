#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracle_values.hpp"
#include "rotvec/bracket.hpp"
#include "rotvec/chord.hpp"
#include "rotvec/errors.hpp"
#include "rotvec/pb.hpp"

using namespace rotvec;
using std::numbers::pi;

namespace {

PhasePoint at(const PhaseSpace& space, std::vector<double> x) { return wrap(x, space); }

TrigPolynomial pendulum_poly() {
  TrigPolynomial t(3);
  t.add_term(std::vector<int>{1, 0, 0}, -0.5, 0.0);
  t.add_term(std::vector<int>{0, 1, 0}, 0.1, 0.0);
  return t;
}

}  // namespace

TEST_CASE("bracket examples") {
  const auto t2 = PhaseSpace::torus(1);
  const auto f = HamiltonianSpec::sin_squared_p1(1);
  CHECK(bracket(f, make_form(CohomologyClass::dq(1, 0)), t2, at(t2, {0.25, 0.0})) ==
        doctest::Approx(pi).epsilon(1e-13));
  TrigPolynomial sp(3);
  sp.add_term(std::vector<int>{1, 0, 0}, 0.0, 1.0 / (2 * pi));
  CHECK(bracket(HamiltonianSpec(1, sp), make_form(CohomologyClass::dq(1, 0)), t2, at(t2, {0.1, 0.3})) ==
        doctest::Approx(oracle::bracket_p01).epsilon(1e-13));
  CHECK(bracket(f, make_form(CohomologyClass::dp(1, 0)), t2, at(t2, {0.25, 0.0})) == 0.0);
  CHECK(bracket(HamiltonianSpec::constant(1, 4.0), make_form(CohomologyClass::dq(1, 0)), t2, at(t2, {0.3, 0.3})) ==
        0.0);
}

TEST_CASE("both sides of the bracket identity agree") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> k(-2, 2);
  const auto t4 = PhaseSpace::torus(2);
  const auto tw = PhaseSpace(SpaceKind::torus, 2, SymplecticStructure::twisted(std::sqrt(2.0) - 1.0));
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& space = trial % 2 ? t4 : tw;
    TrigPolynomial t(5), g(4);
    for (int i = 0; i < 4; ++i) {
      t.add_term(std::vector<int>{k(rng), k(rng), k(rng), k(rng), k(rng)}, u(rng), u(rng));
      g.add_term(std::vector<int>{k(rng), k(rng), k(rng), k(rng)}, u(rng), u(rng));
    }
    const HamiltonianSpec f(2, t);
    const auto alpha = make_form(CohomologyClass{{u(rng), u(rng), u(rng), u(rng)}}, g);
    const auto x = at(space, {u(rng), u(rng), u(rng), u(rng)});
    const double s = u(rng);
    const auto both = bracket_both(f, alpha, space, x, s);
    CHECK(std::abs(both.df_sgrad_alpha - both.alpha_sgrad_f) <=
          1e-10 * std::max(1.0, std::abs(both.df_sgrad_alpha)));
    CHECK(bracket_polynomial(f, alpha, space).value(x.lift, s) ==
          doctest::Approx(both.df_sgrad_alpha).epsilon(1e-10));
  }
}

TEST_CASE("bracket is bilinear") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto t2 = PhaseSpace::torus(1);
  const HamiltonianSpec f(1, pendulum_poly());
  const auto g = HamiltonianSpec::sin_squared_p1(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = at(t2, {u(rng), u(rng)});
    const double lambda = u(rng);
    const CohomologyClass a{{u(rng), u(rng)}}, b{{u(rng), u(rng)}};
    const CohomologyClass ab{{a.coeffs[0] + lambda * b.coeffs[0], a.coeffs[1] + lambda * b.coeffs[1]}};
    const double lhs = bracket(f, make_form(ab), t2, x);
    const double rhs = bracket(f, make_form(a), t2, x) + lambda * bracket(f, make_form(b), t2, x);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
    const double lf = bracket(f + lambda * g, make_form(a), t2, x);
    const double rf = bracket(f, make_form(a), t2, x) + lambda * bracket(g, make_form(a), t2, x);
    CHECK(std::abs(lf - rf) <= 1e-12);
  }
}

TEST_CASE("sup norm examples") {
  TrigPolynomial c(1);
  c.add_term(std::vector<int>{1}, 1.0, 0.0);
  const auto s = sup_norm(c, 512);
  CHECK(s.grid_max == doctest::Approx(1.0));
  CHECK(s.pad == doctest::Approx(oracle::sup_pad_cos_512).epsilon(1e-12));
  CHECK(s.certified - 1.0 <= 0.01);
  CHECK(s.certified >= 1.0);

  CHECK(sup_norm(TrigPolynomial(2), 64).certified == 0.0);
  const auto k = sup_norm(TrigPolynomial::constant(2, -3.0), 64);
  CHECK(k.certified == 3.0);
  CHECK(k.pad == 0.0);
}

TEST_CASE("sup norm certificates are upper bounds and tighten") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> k(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    TrigPolynomial t(1);
    for (int i = 0; i < 5; ++i) t.add_term(std::vector<int>{k(rng)}, u(rng), u(rng));
    const auto coarse = sup_norm(t, 512), fine = sup_norm(t, 2048);
    double dense = 0.0;
    for (int i = 0; i < 100000; ++i) dense = std::max(dense, std::abs(t.value(std::vector<double>{i / 100000.0})));
    CHECK(coarse.certified >= dense - 1e-12);
    CHECK(fine.certified >= dense - 1e-12);
    CHECK(fine.certified <= coarse.certified + 1e-12);
  }
}

TEST_CASE("averaged bracket") {
  const auto t2 = PhaseSpace::torus(1);
  const auto f = HamiltonianSpec::sin_squared_p1(1);
  // On an invariant circle the average is the orbit speed.
  CHECK(averaged_bracket(f, make_form(CohomologyClass::dq(1, 0)), t2, at(t2, {0.25, 0.0}), 10.0, 1e-2) ==
        doctest::Approx(pi).epsilon(1e-10));
  CHECK(averaged_bracket(HamiltonianSpec::constant(1, 1.0), make_form(CohomologyClass::dq(1, 0)), t2,
                         at(t2, {0.2, 0.1}), 10.0, 1e-2) == 0.0);
}

TEST_CASE("averaged bracket matches the pushed-forward field") {
  // α_T(sgrad F)(x) = (1/T) ∫ α(Dφ_t sgrad F(x)) dt with Dφ_t from centered
  // differences of the flow.
  const auto t2 = PhaseSpace::torus(1);
  const HamiltonianSpec f(1, pendulum_poly());
  const auto field = VectorField::hamiltonian(t2, f);
  const CohomologyClass a{{0.3, 1.0}};
  const double T = 10.0, h = 1e-3, eps = 1e-6;
  for (const auto& x0 : {std::vector<double>{0.1, 0.2}, std::vector<double>{0.37, 0.8}}) {
    const auto v = field(x0);
    auto xp = x0, xm = x0;
    for (std::size_t i = 0; i < 2; ++i) {
      xp[i] += eps * v[i];
      xm[i] -= eps * v[i];
    }
    // RK4 here: the midpoint map transports the field of a slightly modified
    // Hamiltonian, and the twist of this field amplifies the difference.
    IntegrateOptions rk;
    rk.method = Method::rk4;
    const auto tp = integrate(field, at(t2, xp), T, h, rk);
    const auto tm = integrate(field, at(t2, xm), T, h, rk);
    double fd = 0.0;
    for (std::size_t k = 0; k < tp.size(); ++k) {
      const double w = (k == 0 || k + 1 == tp.size()) ? 0.5 : 1.0;
      double d = 0.0;
      for (std::size_t i = 0; i < 2; ++i) d += a.coeffs[i] * (tp.point(k)[i] - tm.point(k)[i]) / (2 * eps);
      fd += w * d;
    }
    fd /= static_cast<double>(tp.size() - 1);
    CHECK(averaged_bracket(f, make_form(a), t2, at(t2, x0), T, h, rk) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("pb with a fixed Hamiltonian") {
  const auto t2 = PhaseSpace::torus(1);
  const auto x = RegionSpec::momentum_level(t2, {0.0});
  const auto xp = RegionSpec::momentum_level(t2, {0.5});
  // {sin²(π p1), (3/π) dq1} = 3 sin(2π p1).
  const PbProblem prob(t2, x, xp, CohomologyClass::dq(1, 0, 3.0 / pi), HamiltonianSpec::sin_squared_p1(1));
  const auto r = pb_upper_bound(prob);
  CHECK(r.value >= 3.0);
  CHECK(r.value <= 3.0 + 1e-3);
  CHECK(r.audit.winner.ok);
  CHECK(r.audit.family_dimension == 0u);

  // The constraint F ≥ 1 on X' fails for -sin².
  const PbProblem bad(t2, x, xp, CohomologyClass::dq(1, 0), -1.0 * HamiltonianSpec::sin_squared_p1(1));
  CHECK_THROWS_AS(pb_upper_bound(bad), InfeasibleFamily);

  CHECK_THROWS_AS(PbProblem(t2, x, x, CohomologyClass::dq(1, 0), HamiltonianSpec::sin_squared_p1(1)),
                  InvalidArgument);
}

TEST_CASE("pb over the pinned profile family") {
  const auto t2 = PhaseSpace::torus(1);
  const ProfileFamily fam({{0.0, 0.0}, {0.5, 1.0}}, 32, ProfileBasis::odd_harmonic);
  const PbProblem prob(t2, RegionSpec::momentum_level(t2, {0.0}), RegionSpec::momentum_level(t2, {0.5}),
                       CohomologyClass::dq(1, 0, 0.5), fam);
  CHECK(prob.family_dimension() == 15u);
  PbOptions o;
  o.restarts = 2;
  o.max_evaluations = 600;
  o.grid_res = 4096;
  const auto r = pb_upper_bound(prob, o);
  CHECK(r.audit.winner.ok);
  CHECK(r.value >= 1.0);
  // Odd harmonics cannot beat the LP optimum.
  CHECK(r.audit.min_certified_seen >= 0.5 * oracle::lp_min_slope_32_odd - 1e-9);
  CHECK(r.value <= 1.2);
  CHECK(prob.validate(r.best_f).ok);

  // Same seed, same answer.
  const auto again = pb_upper_bound(prob, o);
  CHECK(again.value == r.value);
  CHECK(again.f_params == r.f_params);
}

TEST_CASE("chords") {
  const auto t2 = PhaseSpace::torus(1);
  const auto x = RegionSpec::momentum_level(t2, {0.0}, 16);
  const auto xp = RegionSpec::momentum_level(t2, {0.5}, 16);
  auto r = chord_search(make_form(CohomologyClass::dq(1, 0, 0.5)), t2, x, xp);
  REQUIRE(r.found());
  CHECK(std::abs(r.chord->time - 1.0) <= 1e-9);
  CHECK(r.seeds_with_chord == r.seeds);
  CHECK(xp.contains(r.chord->end, 1e-8));

  r = chord_search(make_form(CohomologyClass::dq(1, 0)), t2, x, xp);
  REQUIRE(r.found());
  CHECK(std::abs(r.chord->time - 0.5) <= 1e-9);

  const auto t4 = PhaseSpace::torus(2);
  r = chord_search(make_form(CohomologyClass::dq(2, 1)), t4, RegionSpec::momentum_level(t4, {0.0, 0.0}, 4),
                   RegionSpec::levels(t4, {{0, 0.5}}, 4));
  CHECK_FALSE(r.found());
  CHECK(r.seeds_with_chord == 0u);
}

TEST_CASE("chord time against the pb floor") {
  // pb ≥ 1 for the Example-1 pair, so a chord exists within 1/1.
  const auto t2 = PhaseSpace::torus(1);
  const auto r = chord_search(make_form(CohomologyClass::dq(1, 0, 0.5)), t2,
                              RegionSpec::momentum_level(t2, {0.0}, 8), RegionSpec::momentum_level(t2, {0.5}, 8));
  REQUIRE(r.found());
  CHECK(r.chord->time <= 1.0 + 1e-6);
}
