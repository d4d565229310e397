#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracle_values.hpp"
#include "rotvec/errors.hpp"
#include "rotvec/integrator.hpp"
#include "rotvec/profile.hpp"
#include "rotvec/vector_field.hpp"

using namespace rotvec;
using std::numbers::pi;

namespace {

const double kGamma = std::sqrt(2.0) - 1.0;

PhaseSpace twisted() { return {SpaceKind::torus, 2, SymplecticStructure::twisted(kGamma)}; }

PhasePoint at(const PhaseSpace& space, std::vector<double> x) { return wrap(x, space); }

HamiltonianSpec generic_f() {
  TrigPolynomial t(5);
  t.add_term(std::vector<int>{1, 0, 0, 0, 0}, -0.5, 0.0);
  t.add_term(std::vector<int>{0, 1, 1, 0, 0}, 0.1, 0.05);
  t.add_term(std::vector<int>{0, 0, 1, -1, 0}, 0.0, 0.07);
  return HamiltonianSpec(2, t);
}

}  // namespace

TEST_CASE("sgrad of forms") {
  const auto t2 = PhaseSpace::torus(1);
  auto v = sgrad_form(make_form(CohomologyClass::dq(1, 0, 0.5)), t2, at(t2, {0.3, 0.1}));
  CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(v[1]) <= 1e-15);

  v = sgrad_form(make_form(CohomologyClass::zero(1)), t2, at(t2, {0.3, 0.1}));
  CHECK(v == std::vector<double>{0.0, 0.0});

  const auto tw = twisted();
  v = sgrad_form(make_form(CohomologyClass::dq(2, 0)), tw, at(tw, {0.1, 0.2, 0.3, 0.4}));
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(v[i]) <= 1e-14);
}

TEST_CASE("sgrad of Hamiltonians") {
  const auto t2 = PhaseSpace::torus(1);
  TrigPolynomial p1(3);
  p1.add_term(std::vector<int>{1, 0, 0}, 0.0, 1.0 / (2 * pi));  // ≈ p1 near 0
  auto v = sgrad(HamiltonianSpec(1, p1), t2, at(t2, {0.0, 0.3}));
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(v[0]) <= 1e-15);

  v = sgrad(HamiltonianSpec::constant(1, 2.0), t2, at(t2, {0.2, 0.3}));
  CHECK(v == std::vector<double>{0.0, 0.0});

  const auto tw = twisted();
  for (double p : {0.1, 0.2, 0.35}) {
    v = sgrad(HamiltonianSpec::sin_squared_p1(2), tw, at(tw, {p, 0.4, 0.1, 0.7}));
    const double c = pi * std::sin(2 * pi * p);
    CHECK(std::abs(v[0]) <= 1e-14);
    CHECK(std::abs(v[1]) <= 1e-14);
    CHECK(v[2] == doctest::Approx(c).epsilon(1e-13));
    CHECK(v[3] == doctest::Approx(-kGamma * c).epsilon(1e-13));
  }
  v = sgrad(HamiltonianSpec::sin_squared_p1(2), tw, at(tw, {0.2, 0.0, 0.0, 0.0}));
  CHECK(v[2] == doctest::Approx(oracle::twisted_speed_q1).epsilon(1e-14));
  CHECK(v[3] == doctest::Approx(oracle::twisted_speed_q2).epsilon(1e-14));
}

TEST_CASE("defining identity of sgrad F") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& space : {PhaseSpace::torus(2), twisted()}) {
    const auto f = generic_f();
    for (int i = 0; i < 100; ++i) {
      const auto x = at(space, {u(rng), u(rng), u(rng), u(rng)});
      const auto v = sgrad(f, space, x);
      const auto df = f.grad(x);
      for (int j = 0; j < 10; ++j) {
        std::vector<double> w{u(rng), u(rng), u(rng), u(rng)};
        double dfw = 0.0;
        for (int k = 0; k < 4; ++k) dfw += df[k] * w[k];
        CHECK(std::abs(space.omega()(v, w) + dfw) <= 1e-12);
      }
    }
  }
}

TEST_CASE("raise solves the contraction equation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto omega = SymplecticStructure::twisted(kGamma);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> beta{u(rng), u(rng), u(rng), u(rng)};
    const auto v = omega.raise(beta);
    const auto back = omega.contract(v);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(back[k] - beta[k]) <= 1e-12);
  }
}

TEST_CASE("integrate examples") {
  const auto t2 = PhaseSpace::torus(1);
  const auto field = VectorField::hamiltonian(t2, HamiltonianSpec::sin_squared_p1(1));
  const auto traj = integrate(field, at(t2, {0.25, 0.0}), 1.0, 1e-3);
  CHECK(traj.size() == 1001u);
  CHECK(std::abs(traj.back()[0] - 0.25) <= 1e-10);
  CHECK(std::abs(traj.back()[1] - pi) <= 1e-6);

  const auto zero = VectorField::hamiltonian(t2, HamiltonianSpec::zero(1));
  const auto still = integrate(zero, at(t2, {0.3, 0.6}), 2.0, 0.1);
  for (std::size_t i = 0; i < still.size(); ++i) {
    CHECK(still.point(i)[0] == 0.3);
    CHECK(still.point(i)[1] == 0.6);
  }

  const auto loc = VectorField::locally_hamiltonian(t2, make_form(CohomologyClass::dq(1, 0, 0.5)));
  const auto moved = integrate(loc, at(t2, {0.0, 0.0}), 1.0, 1e-2);
  CHECK(moved.back()[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("time grid: fixed step, shorter last step") {
  const auto t2 = PhaseSpace::torus(1);
  const auto field = VectorField::hamiltonian(t2, HamiltonianSpec::sin_squared_p1(1));
  const auto traj = integrate(field, at(t2, {0.1, 0.0}), 1.05, 0.1);
  CHECK(traj.size() == 12u);
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) CHECK(traj.times[i] == doctest::Approx(0.1 * i));
  CHECK(traj.times.back() == 1.05);
  CHECK(step_count(1.0, 0.1) == 10u);
  CHECK(step_count(100.0, 0.01) == 10000u);
  CHECK_THROWS_AS(integrate(field, at(t2, {0.1, 0.0}), 0.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(integrate(field, at(t2, {0.1, 0.0}), 1.0, -0.1), InvalidArgument);
}

TEST_CASE("energy conservation over T = 1e4") {
  const auto t2 = PhaseSpace::torus(1);
  const auto tw = twisted();
  const auto profile = make_pinned_profile(1, {{0.0, 0.0}, {0.5, 1.0}}, std::nullopt, 32,
                                           ProfileBasis::odd_harmonic).hamiltonian;
  struct Case {
    PhaseSpace space;
    HamiltonianSpec f;
    std::vector<double> x0;
  };
  for (const auto& c : {Case{t2, HamiltonianSpec::sin_squared_p1(1), {0.2, 0.0}}, Case{tw, HamiltonianSpec::sin_squared_p1(2), {0.2, 0.0, 0.0, 0.0}},
                        Case{t2, profile, {0.37, 0.1}}}) {
    const auto field = VectorField::hamiltonian(c.space, c.f);
    const auto traj = integrate(field, wrap(c.x0, c.space), 1e4, 1e-2);
    CHECK(traj.max_drift <= 1e-8);
  }
}

TEST_CASE("drift on a non-integrable field stays small and is reported") {
  const auto t4 = PhaseSpace::torus(2);
  const auto field = VectorField::hamiltonian(t4, generic_f());
  IntegrateOptions o;
  o.drift_budget = 1e-4;
  auto traj = integrate(field, at(t4, {0.1, 0.2, 0.3, 0.4}), 100.0, 1e-2, o);
  CHECK(traj.max_drift > 0.0);
  CHECK(traj.within_budget());
  // Second order: a tenth of the step, a hundredth of the drift.
  const auto fine = integrate(field, at(t4, {0.1, 0.2, 0.3, 0.4}), 100.0, 1e-3, o);
  CHECK(fine.max_drift <= 0.02 * traj.max_drift);
  o.drift_budget = 1e-7;
  traj = integrate(field, at(t4, {0.1, 0.2, 0.3, 0.4}), 100.0, 1e-2, o);
  CHECK_FALSE(traj.within_budget());
}

TEST_CASE("reversibility and flow property") {
  const auto t4 = PhaseSpace::torus(2);
  const auto field = VectorField::hamiltonian(t4, generic_f());
  const auto x0 = at(t4, {0.1, 0.2, 0.3, 0.4});
  const auto fwd = integrate(field, x0, 20.0, 1e-2);
  IntegrateOptions back;
  back.backward = true;
  back.start_time = 20.0;
  const auto bwd = integrate(field, wrap(fwd.back(), t4), 20.0, 1e-2, back);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(bwd.back()[i] - x0.lift[i]) <= 1e-8);

  const auto a = integrate(field, x0, 7.0, 1e-2);
  IntegrateOptions later;
  later.start_time = 7.0;
  const auto b = integrate(field, wrap(a.back(), t4), 5.0, 1e-2, later);
  const auto whole = integrate(field, x0, 12.0, 1e-2);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(b.back()[i] - whole.back()[i]) <= 1e-8);
}

TEST_CASE("RK4 cross-check") {
  const auto t4 = PhaseSpace::torus(2);
  const auto field = VectorField::hamiltonian(t4, generic_f());
  const auto x0 = at(t4, {0.1, 0.2, 0.3, 0.4});
  IntegrateOptions rk;
  rk.method = Method::rk4;
  // Midpoint is second order, so it gets the finer step.
  const auto a = integrate(field, x0, 5.0, 1e-4);
  const auto b = integrate(field, x0, 5.0, 1e-3, rk);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(a.back()[i] - b.back()[i]) <= 1e-6);
  CHECK(method_from_string("rk4") == Method::rk4);
  CHECK(method_from_string("implicit-midpoint") == Method::implicit_midpoint);
  CHECK_THROWS(method_from_string("euler"));
}

TEST_CASE("non-convergent fixed point is reported") {
  const auto t2 = PhaseSpace::torus(1);
  TrigPolynomial t(3);
  t.add_term(std::vector<int>{1, 0, 0}, 50.0, 0.0);
  t.add_term(std::vector<int>{0, 1, 0}, 50.0, 0.0);
  const auto field = VectorField::hamiltonian(t2, HamiltonianSpec(1, t));
  bool stiff = false;
  try {
    integrate(field, at(t2, {0.1, 0.2}), 1.0, 0.5);
  } catch (const StiffStep&) {
    stiff = true;
  } catch (const BlowUp&) {
    stiff = true;
  }
  CHECK(stiff);
}

TEST_CASE("time-one map") {
  const auto t2 = PhaseSpace::torus(1);
  const auto f = HamiltonianSpec::sin_squared_p1(1);
  const auto x0 = at(t2, {0.3, 0.1});
  const auto m = time_one_map(f, t2, x0, 1e-2);
  const auto direct = integrate(VectorField::hamiltonian(t2, f), x0, 1.0, 1e-2);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(m.image.lift[i] - direct.back()[i]) <= 1e-12);
  CHECK(m.loop.size() == 101u);

  const auto id = time_one_map(HamiltonianSpec::zero(1), t2, x0, 0.25);
  CHECK(id.image.lift == x0.lift);

  const auto forced = HamiltonianSpec::forced_sin_squared(1, 0.2);
  const auto on_x = time_one_map(forced, t2, at(t2, {0.0, 0.4}), 1e-2);
  for (std::size_t i = 0; i < on_x.loop.size(); ++i) CHECK(on_x.loop.point(i)[0] == 0.0);
  // The field's p-component vanishes on p1 = 0 for every s.
  for (double s : {0.0, 0.3, 0.77}) CHECK(sgrad(forced, t2, at(t2, {0.0, 0.4}), s)[0] == 0.0);

  CHECK_THROWS_AS(time_one_map(f, t2, x0, 0.3), InvalidArgument);
}

TEST_CASE("trajectory CSV") {
  const auto t2 = PhaseSpace::torus(1);
  const auto traj = integrate(VectorField::hamiltonian(t2, HamiltonianSpec::sin_squared_p1(1)), at(t2, {0.25, 0.9}),
                              0.5, 0.1);
  const auto path = std::filesystem::temp_directory_path() / "rotvec_traj_test.csv";
  traj.write_csv(path.string(), t2);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("t,") == 0);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 6);
  std::filesystem::remove(path);
}
