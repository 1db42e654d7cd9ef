#include <doctest.h>

#include <cmath>
#include <numbers>

#include "starbody/dual_volumes.hpp"
#include "starbody/errors.hpp"
#include "starbody/random_bodies.hpp"
#include "support/oracles.hpp"

using namespace starbody;

namespace {

const double kKappa3 = oracle::kappa(3);

StarBody ball(double r) { return StarBody::ball(3, r); }

}  // namespace

TEST_CASE("volume examples") {
  const auto rule = build_rule(3, 32);
  CHECK(oracle::rel_err(volume(ball(1), rule), kKappa3) < 1e-13);
  const double axes[] = {1.0, 2.0, 3.0};
  CHECK(std::abs(volume(StarBody::ellipsoid_axes(axes), build_rule(3, 34)) - 6 * kKappa3) < 1e-8);
  CHECK(oracle::rel_err(volume(StarBody::ball(2, 2.0), build_rule(2, 16)), 4 * std::numbers::pi) < 1e-14);
}

TEST_CASE("dual mixed volume examples") {
  const auto rule = build_rule(3, 16);
  Rng rng(1);
  const auto k = random_perturbed_ball(3, rng);
  const StarBody same[] = {k, k, k};
  CHECK(oracle::rel_err(dual_mixed_volume(same, rule), volume(k, rule)) < 1e-14);
  const StarBody balls[] = {ball(1), ball(2), ball(3)};
  CHECK(oracle::rel_err(dual_mixed_volume(balls, rule), 6 * kKappa3) < 1e-13);
  CHECK(oracle::rel_err(dual_quermass(ball(2), 1, rule), 4 * kKappa3) < 1e-13);
  const StarBody two[] = {ball(1), ball(2)};
  CHECK_THROWS_AS(dual_mixed_volume(two, rule), ArgumentError);
  CHECK_THROWS_AS(dual_quermass(ball(1), 3, rule), ArgumentError);
}

TEST_CASE("tuple specialisations agree with direct integrals") {
  const auto rule = build_rule(3, 12);
  Rng rng(2);
  const auto k = random_ellipsoid(3, rng);
  const auto l = random_perturbed_ball(3, rng);
  const auto rk = k.sample(rule), rl = l.sample(rule);
  auto direct = [&](auto fn) {
    std::vector<double> v(rk.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(rk[i], rl[i]);
    return oracle::weighted_sum(rule, v) / 3.0;
  };
  CHECK(oracle::rel_err(first_dual_mixed_volume(k, l, rule), direct([](double a, double b) { return a * a * b; })) < 1e-13);
  CHECK(oracle::rel_err(dual_mixed_quermass(k, l, 1, rule), direct([](double a, double b) { return a * b; })) < 1e-13);
  CHECK(oracle::rel_err(dual_quermass(k, 2, rule), direct([](double a, double) { return a; })) < 1e-13);
  const auto f = OrliczFunction::exp_reciprocal();
  CHECK(oracle::rel_err(orlicz_dual_mixed_volume(f, k, l, rule),
                        direct([&](double a, double b) { return std::expm1(a / b) * a * a * a; })) < 1e-13);
  CHECK(oracle::rel_err(orlicz_dual_quermass(f, k, l, 1, rule),
                        direct([&](double a, double b) { return std::expm1(a / b) * a * a; })) < 1e-13);
  CHECK(oracle::rel_err(lp_dual_quermass(2.5, k, l, 1, rule),
                        direct([](double a, double b) { return std::pow(a, 4.5) * std::pow(b, -2.5); })) < 1e-13);
}

TEST_CASE("Orlicz multiple dual mixed volume examples") {
  const auto rule = build_rule(3, 16);
  Rng rng(3);
  const auto k = random_perturbed_ball(3, rng);
  const StarBody ks[] = {k, k, k};
  const auto f = OrliczFunction::exp_reciprocal();
  CHECK(oracle::rel_err(orlicz_multiple_dmv(f, k, ks, rule), f.at_one() * volume(k, rule)) < 1e-13);

  const StarBody balls[] = {ball(1), ball(2), ball(2)};
  CHECK(oracle::rel_err(orlicz_multiple_dmv(OrliczFunction::power_neg(2), ball(2), balls, rule),
                        32 * kKappa3) < 1e-13);
  CHECK(oracle::rel_err(lp_dual_quermass(2, ball(1), ball(2), 0, rule), kKappa3 / 4) < 1e-13);
}

TEST_CASE("closed forms for balls") {
  const auto rule = build_rule(3, 32);
  const auto f = OrliczFunction::power_neg(2);
  const std::vector<FunctionalSpec> specs = {
      functional::Volume{ball(2)},
      functional::DualMixed{{ball(1), ball(2), ball(3)}},
      functional::FirstDual{ball(2), ball(3)},
      functional::DualQuermass{ball(2), 1},
      functional::DualMixedQuermass{ball(2), ball(0.5), 1},
      functional::OrliczMultiple{f, ball(2), {ball(1), ball(2), ball(2)}},
      functional::OrliczDual{f, ball(3), ball(0.5)},
      functional::OrliczQuermass{f, ball(3), ball(0.5), 2},
      functional::LpDual{2, ball(1), ball(2), 0},
      functional::LpMultiple{3, ball(1), {ball(2), ball(0.5), ball(1)}},
  };
  for (const auto& spec : specs) {
    const auto exact = ball_closed_form(spec);
    REQUIRE(exact.has_value());
    INFO(functional_name(spec));
    CHECK(oracle::rel_err(evaluate(spec, rule), *exact) < 1e-12);
  }
  CHECK(*ball_closed_form(specs[5]) == doctest::Approx(32 * kKappa3).epsilon(1e-14));
  Rng rng(4);
  CHECK_FALSE(ball_closed_form(functional::Volume{random_ellipsoid(3, rng)}).has_value());
}

TEST_CASE("extrapolation to zero") {
  // D(eps) = 2 - 3 eps + eps^2 - 5 eps^3
  const auto eps = halving_schedule(0.1, 6);
  std::vector<double> d;
  for (double e : eps) d.push_back(2 - 3 * e + e * e - 5 * e * e * e);
  CHECK(extrapolate_to_zero(eps, d).value == doctest::Approx(2.0).epsilon(1e-12));
  std::vector<double> gaps;
  for (double e : eps) gaps.push_back(0.7 * e);
  CHECK(observed_order(eps, gaps) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("first variation examples with balls") {
  const auto rule = build_rule(3, 8);
  const StarBody ks[] = {ball(1), ball(1), ball(1)};
  const auto eps = halving_schedule(1e-2, 7);
  const auto r1 = first_variation_check(OrliczFunction::power_neg(1), ball(1), ks, rule, eps);
  CHECK(oracle::rel_err(r1.extrapolated.value, -kKappa3) < 1e-8);
  CHECK(oracle::rel_err(r1.target, -kKappa3) < 1e-13);
  CHECK(r1.order > 0.9);

  const auto r2 = first_variation_check(OrliczFunction::power_neg(2), ball(1), ks, rule, eps);
  CHECK(oracle::rel_err(r2.extrapolated.value, -kKappa3 / 2) < 1e-8);
  CHECK(oracle::rel_err(r2.target, -kKappa3 / 2) < 1e-13);

  const double three[] = {1e-2, 1e-3, 1e-4};
  const auto r3 = first_variation_check(OrliczFunction::power_neg(1), ball(1), ks, rule, three);
  CHECK(std::abs(r3.gaps[1]) < std::abs(r3.gaps[0]));
  CHECK(std::abs(r3.gaps[2]) < std::abs(r3.gaps[1]));
}

TEST_CASE("first variation on random bodies, all limit forms") {
  const auto rule = build_rule(3, 16);
  const auto eps = halving_schedule(1e-2, 7);
  for (int draw = 0; draw < 3; ++draw) {
    Rng rng(derive_seed(9, "variation-unit", 3, draw));
    const auto l1 = random_perturbed_ball(3, rng);
    const StarBody ks[] = {random_ellipsoid(3, rng), random_ellipsoid(3, rng), random_perturbed_ball(3, rng)};
    for (const auto& f : {OrliczFunction::power_neg(1), OrliczFunction::power_neg(2.5),
                          OrliczFunction::exp_reciprocal()}) {
      const auto r = first_variation_check(f, l1, ks, rule, eps);
      CHECK(r.relative_gap < 1e-4);
      CHECK(r.order >= 0.9);
      CHECK(r.volume_form_relative_gap < 1e-6);
      if (f.kind() == OrliczFunction::Kind::PowerNeg) {
        CHECK(*r.lp_multiple_relative_gap < 1e-4);
        CHECK(*r.lp_two_body_relative_gap < 1e-4);
      }
    }
  }
}

TEST_CASE("first variation rejects bad schedules") {
  const auto rule = build_rule(3, 4);
  const StarBody ks[] = {ball(1), ball(1), ball(1)};
  const double increasing[] = {1e-3, 1e-2};
  CHECK_THROWS_AS(first_variation_check(OrliczFunction::power_neg(1), ball(1), ks, rule, increasing),
                  ArgumentError);
  const double single[] = {1e-3};
  CHECK_THROWS_AS(first_variation_check(OrliczFunction::power_neg(1), ball(1), ks, rule, single),
                  ArgumentError);
}
