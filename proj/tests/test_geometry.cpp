#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rotvec/errors.hpp"
#include "rotvec/geometry.hpp"
#include "rotvec/region.hpp"

using namespace rotvec;
using std::numbers::pi;

TEST_CASE("wrap reduces periodic coordinates and keeps the lift") {
  const auto t2 = PhaseSpace::torus(1);
  auto x = wrap(std::vector<double>{1.25, -0.5}, t2);
  CHECK(x.wrapped[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(x.wrapped[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x.lift[0] == 1.25);
  CHECK(x.lift[1] == -0.5);

  x = wrap(std::vector<double>{0.0, 0.0}, t2);
  CHECK(x.wrapped == std::vector<double>{0.0, 0.0});

  x = wrap(std::vector<double>{3.0, 2.0}, t2);
  CHECK(x.wrapped == std::vector<double>{0.0, 0.0});
  CHECK(x.lift == std::vector<double>{3.0, 2.0});

  CHECK_THROWS_AS(wrap(std::vector<double>{NAN, 0.0}, t2), InvalidPoint);
  CHECK_THROWS_AS(wrap(std::vector<double>{INFINITY, 0.0}, t2), InvalidPoint);
  CHECK_THROWS_AS(wrap(std::vector<double>{0.0}, t2), DimensionError);
}

TEST_CASE("cotangent momenta are not wrapped") {
  const auto m = PhaseSpace::cotangent(1);
  const auto x = wrap(std::vector<double>{2.5, 2.5}, m);
  CHECK(x.wrapped[0] == 2.5);
  CHECK(x.wrapped[1] == doctest::Approx(0.5));
  CHECK_FALSE(m.periodic(0));
  CHECK(m.periodic(1));
}

TEST_CASE("eval_form") {
  const auto t2 = PhaseSpace::torus(1);
  const auto x0 = wrap(std::vector<double>{0.0, 0.0}, t2);
  const std::vector<double> dq{0.0, 1.0};
  CHECK(eval_form(make_form(CohomologyClass::dq(1, 0)), dq, x0) == 1.0);
  CHECK(eval_form(make_form(CohomologyClass::dq(1, 0, 0.5)), dq, x0) == 0.5);

  // g = sin(2π q1)/(2π): g'(0) = 1.
  TrigPolynomial g(2);
  g.add_term(std::vector<int>{0, 1}, 0.0, 1.0 / (2.0 * pi));
  CHECK(eval_form(make_form(CohomologyClass::zero(1), g), dq, x0) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(eval_form(make_form(CohomologyClass::dq(1, 0)), std::vector<double>{1.0}, x0), DimensionError);
}

TEST_CASE("pair") {
  const RotationVector e_q{{0.0, 1.0}}, e_p{{1.0, 0.0}}, two_q{{0.0, 2.0}};
  CHECK(pair(CohomologyClass::dq(1, 0), e_q) == 1.0);
  CHECK(pair(CohomologyClass::dq(1, 0, 0.5), two_q) == 1.0);
  CHECK(pair(CohomologyClass::dq(1, 0), e_p) == 0.0);
  CHECK_THROWS_AS(pair(CohomologyClass::dq(2, 0), e_q), DimensionError);
}

TEST_CASE("pair is bilinear") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    CohomologyClass a{{u(rng), u(rng), u(rng), u(rng)}};
    const RotationVector rho{{u(rng), u(rng), u(rng), u(rng)}};
    const double lambda = u(rng);
    CohomologyClass la = a;
    for (auto& c : la.coeffs) c *= lambda;
    CHECK(std::abs(pair(la, rho) - lambda * pair(a, rho)) <= 1e-14 * std::max(1.0, std::abs(pair(la, rho))) * 10);
  }
}

TEST_CASE("flux of a translation") {
  const auto t2 = PhaseSpace::torus(1);
  auto a = flux_of_translation(std::vector<double>{0.5, 0.0}, t2);
  CHECK(a.coeffs[0] == doctest::Approx(0.0));
  CHECK(a.coeffs[1] == doctest::Approx(0.5));

  a = flux_of_translation(std::vector<double>{0.0, 0.0}, t2);
  CHECK(a.coeffs == std::vector<double>{0.0, 0.0});

  const PhaseSpace tw(SpaceKind::torus, 2, SymplecticStructure::twisted(std::sqrt(2.0) - 1.0));
  a = flux_of_translation(std::vector<double>{1.0, 0.0, 0.0, 0.0}, tw);
  CHECK(a.coeffs[0] == doctest::Approx(0.0));
  CHECK(a.coeffs[1] == doctest::Approx(0.0));
  CHECK(a.coeffs[2] == doctest::Approx(1.0));
  CHECK(a.coeffs[3] == doctest::Approx(0.0));
}

TEST_CASE("symplectic structures are antisymmetric and invertible") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& omega : {SymplecticStructure::standard(1), SymplecticStructure::standard(3),
                            SymplecticStructure::twisted(std::sqrt(2.0) - 1.0), SymplecticStructure::twisted(0.7)}) {
    const std::size_t d = omega.dimension();
    CHECK((omega.matrix() * omega.inverse() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a(d), b(d);
      for (auto& e : a) e = u(rng);
      for (auto& e : b) e = u(rng);
      CHECK(std::abs(omega(a, b) + omega(b, a)) <= 1e-12);
    }
  }
  Eigen::MatrixXd sym(2, 2);
  sym << 0, 1, 1, 0;
  CHECK_THROWS_AS(SymplecticStructure{sym}, DegenerateForm);
  CHECK_THROWS_AS(SymplecticStructure{Eigen::MatrixXd::Zero(2, 2)}, DegenerateForm);
}

TEST_CASE("loop integral of a closed form depends only on its class") {
  const auto t4 = PhaseSpace::torus(2);
  TrigPolynomial g(4);
  g.add_term(std::vector<int>{1, 0, 2, 0}, 0.3, -0.2);
  g.add_term(std::vector<int>{0, 1, 1, -1}, 0.1, 0.4);
  const auto alpha = make_form(CohomologyClass{{0.2, -0.1, 0.75, 0.3}}, g);
  // q1 -> q1 + 1 from a generic base point, Simpson's rule.
  const std::size_t N = 2000;
  std::vector<double> x{0.13, 0.71, 0.0, 0.42}, v{0.0, 0.0, 1.0, 0.0};
  double integral = 0.0;
  for (std::size_t i = 0; i <= N; ++i) {
    x[2] = static_cast<double>(i) / N;
    const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    integral += w * eval_form(alpha, v, wrap(x, t4));
  }
  integral /= 3.0 * N;
  CHECK(std::abs(integral - 0.75) <= 1e-8);
}

TEST_CASE("regions") {
  const auto t4 = PhaseSpace::torus(2);
  const auto l = RegionSpec::momentum_level(t4, {0.0, 0.0});
  CHECK(l.grid().size() == 32u * 32u);
  for (const auto& p : l.grid()) CHECK(l.contains(p));

  const auto lp = RegionSpec::levels(t4, {{0, 0.5}, {1, 0.0}}, 8);
  CHECK(lp.grid().size() == 64u);
  for (const auto& p : lp.grid()) {
    CHECK(lp.contains(p));
    CHECK_FALSE(l.contains(p));
  }
  // Periodic levels are taken mod 1.
  CHECK(lp.contains(wrap(std::vector<double>{1.5, 2.0, 0.3, 0.1}, t4)));
  CHECK(RegionSpec::empty(t4).is_empty());
  CHECK_FALSE(l.is_empty());
}
