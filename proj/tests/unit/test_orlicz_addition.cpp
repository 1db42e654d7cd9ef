#include <doctest.h>

#include <cmath>
#include <numbers>

#include "starbody/errors.hpp"
#include "starbody/orlicz_addition.hpp"
#include "starbody/random_bodies.hpp"
#include "support/oracles.hpp"

using namespace starbody;

TEST_CASE("solve_lambda examples") {
  const double ones[] = {1.0, 1.0};
  CHECK(solve_lambda(ones, ones, OrliczFunction::power_neg(1)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // 2 (e^lambda - 1) = e - 1
  CHECK(oracle::rel_err(solve_lambda(ones, ones, OrliczFunction::exp_reciprocal()),
                        std::log((std::numbers::e + 1) / 2)) < 1e-13);
  const double rhos[] = {3.0, 0.7};
  const double weights[] = {1.0, 0.0};
  CHECK(solve_lambda(rhos, weights, OrliczFunction::exp_reciprocal()) == 3.0);
}

TEST_CASE("solve_lambda errors") {
  const double rhos[] = {1.0, 2.0};
  const double zeros[] = {0.0, 0.0};
  CHECK_THROWS_AS(solve_lambda(rhos, zeros, OrliczFunction::power_neg(1)), ArgumentError);
  const double short_weights[] = {1.0};
  CHECK_THROWS_AS(solve_lambda(rhos, short_weights, OrliczFunction::power_neg(1)), ArgumentError);
  const double negative[] = {1.0, -1.0};
  CHECK_THROWS_AS(solve_lambda(rhos, negative, OrliczFunction::power_neg(1)), ArgumentError);
}

TEST_CASE("solve_lambda residual for a bisected user function") {
  auto f = OrliczFunction::user_defined([](double t) { return 1.0 / t + 1.0 / (t * t * t); });
  const double rhos[] = {0.7, 1.9, 1.1};
  const double weights[] = {1.0, 0.3, 2.0};
  const double lambda = solve_lambda(rhos, weights, f);
  double g = 0.0;
  for (int j = 0; j < 3; ++j) g += weights[j] * f(rhos[j] / lambda);
  CHECK(oracle::rel_err(g, f.at_one()) < 1e-12);
}

TEST_CASE("single fractional weight uses the inverse") {
  const double rho[] = {2.0};
  const double w[] = {0.25};
  // 0.25 (2/lambda)^{-2} = 1  =>  lambda = 4
  CHECK(solve_lambda(rho, w, OrliczFunction::power_neg(2)) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("combine examples") {
  const auto rule = build_rule(3, 8);
  const auto b1 = StarBody::ball(3, 1.0);
  const auto b2 = StarBody::ball(3, 2.0);
  const auto half = orlicz_harmonic_combine({{{b1, 1.0}, {b1, 1.0}}, OrliczFunction::power_neg(2), {}}, rule);
  for (double v : half.sample(rule)) REQUIRE(oracle::rel_err(v, std::sqrt(0.5)) < 1e-14);
  const auto harmonic = orlicz_combine_pair(OrliczFunction::power_neg(1), b1, b2, 1.0, rule);
  for (double v : harmonic.sample(rule)) REQUIRE(oracle::rel_err(v, 2.0 / 3.0) < 1e-14);
  Rng rng(3);
  const auto k = random_ellipsoid(3, rng);
  const auto same = orlicz_combine_pair(OrliczFunction::exp_reciprocal(), k, b2, 0.0, rule);
  CHECK(same.sample(rule) == k.sample(rule));
}

TEST_CASE("classical combinations") {
  const auto rule = build_rule(2, 8);
  const auto b1 = StarBody::ball(2, 1.0);
  const auto b2 = StarBody::ball(2, 2.0);
  for (double v : classical_radial_combine(RadialCombination::Radial, 0, b1, b2, rule).sample(rule)) {
    CHECK(v == 3.0);
  }
  for (double v : classical_radial_combine(RadialCombination::PRadial, 2, b1, b2, rule).sample(rule)) {
    CHECK(v == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  }
  for (double v : classical_radial_combine(RadialCombination::PHarmonic, 1, b1, b2, rule).sample(rule)) {
    CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(classical_radial_combine(RadialCombination::PRadial, 0, b1, b2, rule), ArgumentError);
  CHECK_THROWS_AS(classical_radial_combine(RadialCombination::PHarmonic, 0.5, b1, b2, rule),
                  ArgumentError);
}

TEST_CASE("property: PowerNeg combination equals the p-harmonic closed form") {
  for (int n : {2, 3}) {
    const auto rule = build_rule(n, n == 2 ? 64 : 16);
    for (int draw = 0; draw < 10; ++draw) {
      Rng rng(derive_seed(1, "lp-consistency", n, draw));
      const auto k = random_ellipsoid(n, rng);
      const auto l = random_ellipsoid(n, rng);
      for (double p : {1.0, 2.0, 3.0}) {
        const auto a = orlicz_combine_pair(OrliczFunction::power_neg(p), k, l, 1.0, rule).sample(rule);
        const auto rk = k.sample(rule);
        const auto rl = l.sample(rule);
        for (std::size_t i = 0; i < a.size(); ++i) {
          // Independent closed form in long double.
          const long double ref =
              std::pow(std::pow((long double)rk[i], -p) + std::pow((long double)rl[i], -p), -1.0L / p);
          REQUIRE(std::abs(a[i] - (double)ref) < 1e-11 * (double)ref);
        }
      }
    }
  }
}

TEST_CASE("property: combination lies strictly inside every summand") {
  const auto rule = build_rule(3, 10);
  for (int draw = 0; draw < 10; ++draw) {
    Rng rng(derive_seed(2, "inside", 3, draw));
    const auto k = random_perturbed_ball(3, rng);
    const auto l = random_ellipsoid(3, rng);
    const auto m = random_ellipsoid(3, rng);
    const auto c = orlicz_harmonic_combine(
        {{{k, 1.0}, {l, 1.0}, {m, 1.0}}, OrliczFunction::exp_reciprocal(), {}}, rule);
    const auto rc = c.sample(rule), rk = k.sample(rule), rl = l.sample(rule), rm = m.sample(rule);
    for (std::size_t i = 0; i < rc.size(); ++i) REQUIRE(rc[i] < std::min({rk[i], rl[i], rm[i]}));
  }
}

TEST_CASE("property: continuity in eps") {
  const auto rule = build_rule(3, 10);
  Rng rng(4);
  const auto k = random_ellipsoid(3, rng);
  const auto l = random_perturbed_ball(3, rng);
  double previous = INFINITY;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const double d = radial_hausdorff(orlicz_combine_pair(OrliczFunction::exp_reciprocal(), k, l, eps, rule), k, rule);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < 1e-5);
}

TEST_CASE("property: GL(n) equivariance of the combination") {
  const auto rule = build_rule(3, 10);
  const auto f = OrliczFunction::exp_reciprocal();
  for (int draw = 0; draw < 5; ++draw) {
    Rng rng(derive_seed(3, "equivariance", 3, draw));
    const auto k = random_ellipsoid(3, rng);
    const auto l = random_perturbed_ball(3, rng);
    const LinearMap a(Matrix(random_rotation(3, rng) * random_unimodular(3, rng).matrix() * 1.4));
    const double eps = 0.37;
    const auto transformed =
        orlicz_combine_pair(f, StarBody::linear_image(a, k), StarBody::linear_image(a, l), eps, rule)
            .sample(rule);
    // A(K + eps.L) at u: solve at the non-unit direction A^{-1} u, using the
    // degree -1 extension of both radial functions.
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto u = rule.node(i);
      const Vector x = a.inverse() * Eigen::Map<const Vector>(u.data(), 3);
      const double rhos[] = {k.rho(x), l.rho(x)};
      const double weights[] = {1.0, eps};
      REQUIRE(oracle::rel_err(transformed[i], solve_lambda(rhos, weights, f)) < 1e-10);
    }
  }
}

TEST_CASE("property: commutativity is exact") {
  const auto rule = build_rule(3, 8);
  Rng rng(5);
  const auto k = random_ellipsoid(3, rng);
  const auto l = random_perturbed_ball(3, rng);
  for (const auto& f : {OrliczFunction::power_neg(1.5), OrliczFunction::exp_reciprocal()}) {
    const auto a = orlicz_combine_pair(f, k, l, 1.0, rule).sample(rule);
    const auto b = orlicz_combine_pair(f, l, k, 1.0, rule).sample(rule);
    CHECK(a == b);
  }
}

TEST_CASE("multivariate root") {
  const MultivariateOrlicz f = [](std::span<const double> t) {
    return 1.0 / t[0] + 1.0 / (t[1] * t[1]) + std::exp(-t[0] * t[1]);
  };
  const double rhos[] = {0.8, 1.7};
  const double lambda = solve_lambda_multivariate(rhos, f);
  const double args[] = {rhos[0] / lambda, rhos[1] / lambda};
  const double ones[] = {1.0, 1.0};
  CHECK(oracle::rel_err(f(args), f(ones)) < 1e-12);

  const auto rule = build_rule(2, 8);
  const StarBody bodies[] = {StarBody::ball(2, 1.0), StarBody::ball(2, 1.0)};
  for (double v : orlicz_multivariate_combine(bodies, f, rule).sample(rule)) CHECK(v == 1.0);
}
