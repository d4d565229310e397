#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracle_values.hpp"
#include "rotvec/bracket.hpp"
#include "rotvec/suspension.hpp"

using namespace rotvec;
using std::numbers::pi;

namespace {

const PhaseSpace kT2 = PhaseSpace::torus(1);

PhasePoint at(std::vector<double> x) { return wrap(x, kT2); }

HamiltonianSpec forced() { return HamiltonianSpec::forced_sin_squared(1, 0.2); }

// (1/N) Σ δ_{φ^k x0} for the time-one map of f.
EmpiricalMeasure iterate_measure(const HamiltonianSpec& f, std::vector<double> x0, std::size_t N, double h) {
  const auto traj = integrate(VectorField::hamiltonian(kT2, f), at(x0), static_cast<double>(N), h);
  const auto m = static_cast<std::size_t>(std::llround(1.0 / h));
  EmpiricalMeasure mu;
  mu.dim = 2;
  for (std::size_t k = 0; k < N; ++k) {
    const auto p = traj.point(k * m);
    mu.lifts.insert(mu.lifts.end(), p.begin(), p.end());
    mu.times.push_back(0.0);
    mu.weights.push_back(1.0 / static_cast<double>(N));
  }
  return mu;
}

}  // namespace

TEST_CASE("stab") {
  const auto x = RegionSpec::momentum_level(kT2, {0.0}, 8);
  const auto sx = stab(x);
  CHECK_FALSE(sx.is_empty());
  CHECK(sx.contains(make_extended(std::vector<double>{0.0, 0.4}, 0.0, 0.7, kT2)));
  CHECK_FALSE(sx.contains(make_extended(std::vector<double>{0.0, 0.4}, 0.1, 0.7, kT2)));
  CHECK_FALSE(sx.contains(make_extended(std::vector<double>{0.2, 0.4}, 0.0, 0.7, kT2)));
  const auto g = sx.grid(kT2, 4);
  CHECK(g.size() == 32u);
  for (const auto& z : g) CHECK(sx.contains(z));
  CHECK(stab(RegionSpec::empty(kT2)).is_empty());
}

TEST_CASE("suspension flow examples") {
  // Autonomous F: r stays put and x follows the ordinary flow.
  const SuspendedHamiltonian auto_h(kT2, HamiltonianSpec::sin_squared_p1(1));
  const auto z0 = make_extended(std::vector<double>{0.25, 0.0}, 0.3, 0.4, kT2);
  const auto a = suspension_flow(auto_h, z0, 10.0, 1e-2);
  for (double r : a.r) CHECK(r == 0.3);
  CHECK(a.point(a.size() - 1)[1] == doctest::Approx(10.0 * pi).epsilon(1e-12));

  const SuspendedHamiltonian h(kT2, forced());
  const auto z1 = make_extended(std::vector<double>{0.1, 0.2}, 0.0, 0.25, kT2);
  const auto b = suspension_flow(h, z1, 1e3, 1e-2);
  for (std::size_t i = 0; i < b.size(); i += 997) CHECK(b.s[i] - 0.25 == doctest::Approx(b.times[i]).epsilon(1e-14));
  CHECK(b.max_drift <= 1e-8);
  CHECK(std::abs(b.energy.back() - h.eval(z1)) <= 1e-8);
}

TEST_CASE("r stays within the range of F") {
  const SuspendedHamiltonian h(kT2, forced());
  const auto range = value_range(forced().trig(), 1024);
  const double width = range.max - range.min + 2 * range.pad;
  for (const auto& x : {std::vector<double>{0.1, 0.2}, std::vector<double>{0.6, 0.9}}) {
    const auto t = suspension_flow(h, make_extended(x, 0.0, 0.0, kT2), 1e3, 1e-2);
    CHECK(t.max_abs_r <= width + 1e-6);
  }
}

TEST_CASE("shift equivariance") {
  const SuspendedHamiltonian h(kT2, forced());
  const auto z = make_extended(std::vector<double>{0.13, 0.4}, 0.0, 0.0, kT2);
  CHECK(shift_equivariance_check(h, z, 0.0, 10.0, 1e-2) == 0.0);
  CHECK(shift_equivariance_check(h, z, 1.0, 10.0, 1e-2) <= 1e-8);
  CHECK(shift_equivariance_check(h, z, -3.7, 100.0, 1e-2) <= 1e-7);
}

TEST_CASE("time-one pairing examples") {
  const auto dq = make_form(CohomologyClass::dq(1, 0));
  const auto x = EmpiricalMeasure::point_mass(std::vector<double>{0.25, 0.0});
  const auto zero = rotation_pairing_time_one(x, HamiltonianSpec::zero(1), kT2, dq, 1e-2);
  CHECK(zero.loop == 0.0);
  CHECK(zero.double_integral == 0.0);

  // An autonomous F reproduces the flow pairing.
  const auto f = HamiltonianSpec::sin_squared_p1(1);
  const auto mu = iterate_measure(f, {0.2, 0.0}, 50, 1e-2);
  const auto tp = rotation_pairing_time_one(mu, f, kT2, dq, 1e-2);
  const auto flow_mu = empirical_measure(integrate(VectorField::hamiltonian(kT2, f), at({0.2, 0.0}), 50.0, 1e-2));
  CHECK(std::abs(tp.loop - rotation_pairing(flow_mu, f, kT2, dq)) <= 1e-6);
  CHECK_FALSE(tp.quadrature_warning);
}

TEST_CASE("time-one pairing of the forced family") {
  const auto dq = make_form(CohomologyClass::dq(1, 0));
  const auto f = forced();
  for (const auto& [p, expected] : {std::pair{0.25, oracle::time_one_avg_p025}, std::pair{0.1, oracle::time_one_avg_p01}}) {
    const auto mu = iterate_measure(f, {p, 0.0}, 20, 1e-2);
    const auto tp = rotation_pairing_time_one(mu, f, kT2, dq, 1e-2);
    CHECK(tp.loop == doctest::Approx(expected).epsilon(1e-8));
    CHECK(tp.discrepancy <= 1e-6);
  }

  TimeOneSearchOptions o;
  o.n0 = 50;
  o.n_max = 200;
  const auto r = time_one_orbit_search(f, dq, kT2, momentum_seed_grid(kT2, 16), o);
  CHECK(std::abs(r.best_value) >= 2.0 - 1e-2);
  CHECK(std::abs(r.best_value - r.best_double_integral) <= 1e-6);
  CHECK(r.measure.size() == r.iterates);
}

TEST_CASE("orbit measure of the suspension matches the time-one measure") {
  const auto f = forced();
  const double h = 1e-2;
  const std::size_t N = 16;
  const SuspendedHamiltonian sh(kT2, f);
  const auto sigma = suspension_flow(sh, make_extended(std::vector<double>{0.3, 0.1}, 0.0, 0.0, kT2),
                                     static_cast<double>(N), h)
                         .projected_measure();
  const auto mu = iterate_measure(f, {0.3, 0.1}, N, h);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ExtendedObservable> gs;
  for (int i = 0; i < 10; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const int kp = i % 3, kq = 1 + i % 2, ks = i % 2;
    gs.push_back([=](std::span<const double> x, double s) {
      return a * std::cos(2 * pi * (kp * x[0] + kq * x[1] + ks * s)) + b * std::sin(2 * pi * (kq * x[1] - s)) + c;
    });
  }
  // An observable of s alone sees only the phase distribution.
  gs.push_back([](std::span<const double>, double s) { return std::cos(2 * pi * s); });
  const double d = step7_correspondence_check(sigma, mu, f, kT2, gs, h);
  CHECK(d <= 1e-8);

  // μ from a different orbit does not match.
  const auto other = iterate_measure(f, {0.05, 0.7}, N, h);
  const std::vector<ExtendedObservable> q1{[](std::span<const double> x, double) { return std::sin(2 * pi * x[0]); }};
  CHECK(step7_correspondence_check(sigma, other, f, kT2, q1, h) > 0.1);
}
