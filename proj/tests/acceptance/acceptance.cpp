// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "starbody/dual_volumes.hpp"
#include "starbody/inequalities.hpp"
#include "starbody/orlicz_addition.hpp"
#include "starbody/random_bodies.hpp"
#include "support/oracles.hpp"

using namespace starbody;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(bool ok, const char* label, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", label, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Independent evaluations of the built-in class-C functions.
struct PhiOracle {
  OrliczFunction f;
  std::function<long double(long double)> eval;
};

std::vector<PhiOracle> phi_oracles() {
  return {{OrliczFunction::power_neg(1.0), [](long double t) { return 1.0L / t; }},
          {OrliczFunction::power_neg(2.0), [](long double t) { return 1.0L / (t * t); }},
          {OrliczFunction::exp_reciprocal(), [](long double t) { return std::expm1(1.0L / t); }},
          {inv_plus_inv_square(), [](long double t) { return 1.0L / t + 1.0L / (t * t); }},
          {OrliczFunction::power_neg(1.5), [](long double t) { return std::pow(t, -1.5L); }}};
}

StarBody random_star(int n, Rng& rng) {
  return rng.uniform() < 0.5 ? random_ellipsoid(n, rng) : random_perturbed_ball(n, rng);
}

// ---------------------------------------------------------------------------

void ball_oracles() {
  const auto start = Clock::now();
  const int n = 3;
  const auto rule = build_rule(n, 32);
  const double kappa = oracle::kappa(n);
  const double radii[] = {0.5, 1.0, 2.0, 3.0};
  const double exponents[] = {1.0, 1.5, 2.0, 3.0};
  auto phis = phi_oracles();
  phis.erase(phis.begin() + 3, phis.end());
  auto b = [&](double r) { return StarBody::ball(n, r); };

  double worst = 0.0;
  int cases = 0;
  auto compare = [&](double value, double exact) {
    worst = std::max(worst, oracle::rel_err(value, exact));
    ++cases;
  };

  for (double r : radii) {
    compare(volume(b(r), rule), kappa * r * r * r);
    for (int i = 0; i < n; ++i) compare(dual_quermass(b(r), i, rule), kappa * std::pow(r, n - i));
  }
  for (double r1 : radii) {
    for (double r2 : radii) {
      compare(first_dual_mixed_volume(b(r1), b(r2), rule), kappa * r1 * r1 * r2);
      for (int i = 0; i < n; ++i) {
        compare(dual_mixed_quermass(b(r1), b(r2), i, rule), kappa * std::pow(r1, n - i - 1) * r2);
        for (double p : exponents) {
          compare(lp_dual_quermass(p, b(r1), b(r2), i, rule), kappa * std::pow(r1, n - i + p) * std::pow(r2, -p));
        }
      }
      for (double r3 : radii) {
        const StarBody tuple[] = {b(r1), b(r2), b(r3)};
        compare(dual_mixed_volume(tuple, rule), kappa * r1 * r2 * r3);
      }
    }
  }
  for (const auto& [f, phi] : phis) {
    for (double rk : radii) {
      for (double rl : radii) {
        const double ratio = static_cast<double>(phi(static_cast<long double>(rl) / rk));
        compare(orlicz_dual_mixed_volume(f, b(rk), b(rl), rule), kappa * ratio * std::pow(rk, n));
        for (int i = 0; i < n; ++i) {
          compare(orlicz_dual_quermass(f, b(rk), b(rl), i, rule), kappa * ratio * std::pow(rk, n - i));
        }
      }
    }
    for (double s : radii) {
      for (double r1 : radii) {
        for (double r2 : radii) {
          for (double r3 : radii) {
            const StarBody ks[] = {b(r1), b(r2), b(r3)};
            const double phi_ratio = static_cast<double>(phi(static_cast<long double>(r1) / s));
            compare(orlicz_multiple_dmv(f, b(s), ks, rule), kappa * phi_ratio * s * r2 * r3);
            if (&f == &phis.front().f) {
              for (double p : exponents) {
                compare(lp_multiple_dmv(p, b(s), ks, rule), kappa * std::pow(r1 / s, -p) * s * r2 * r3);
              }
            }
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  report(worst <= 1e-10 && elapsed < 5.0, "ball_oracles",
         fmt("%d closed forms, max rel err %.3e (tol 1e-10), %.2f s (limit 5 s)", cases, worst, elapsed));
}

// ---------------------------------------------------------------------------

void addition_consistency() {
  const int n = 3;
  const auto rule = build_rule(n, default_level(n));
  double worst = 0.0;
  int pairs = 0;
  for (int draw = 0; draw < 20; ++draw) {
    Rng rng(derive_seed(2024, "addition", n, draw));
    const auto k = random_ellipsoid(n, rng);
    const auto l = random_ellipsoid(n, rng);
    const auto rk = k.sample(rule), rl = l.sample(rule);
    for (double p : {1.0, 2.0, 3.0}) {
      const CombinationSpec spec{{{k, 1.0}, {l, 1.0}}, OrliczFunction::power_neg(p), {}};
      const auto sum = orlicz_harmonic_combine(spec, rule).sample(rule);
      for (std::size_t i = 0; i < sum.size(); ++i) {
        const long double exact =
            std::pow(std::pow(static_cast<long double>(rk[i]), -p) + std::pow(static_cast<long double>(rl[i]), -p),
                     -1.0L / p);
        worst = std::max(worst, static_cast<double>(std::abs(sum[i] - exact) / exact));
      }
    }
    ++pairs;
  }
  report(worst <= 1e-11, "addition_consistency",
         fmt("%d ellipsoid pairs x p in {1,2,3}, max nodewise rel err %.3e (tol 1e-11)", pairs, worst));
}

// ---------------------------------------------------------------------------

void variational_identity() {
  const int n = 3;
  const auto rule = build_rule(n, default_level(n));
  const auto eps = halving_schedule(1e-2, 7);
  const auto phis = phi_oracles();
  double worst_gap = 0.0, worst_order = 1e300;
  for (int draw = 0; draw < 10; ++draw) {
    Rng rng(derive_seed(2024, "variation", n, draw));
    const auto& f = phis[static_cast<std::size_t>(draw) % phis.size()].f;
    const auto l1 = random_star(n, rng);
    const std::vector<StarBody> ks{random_star(n, rng), random_star(n, rng), random_star(n, rng)};
    const auto r = first_variation_check(f, l1, ks, rule, eps);
    worst_gap = std::max(worst_gap, std::abs(r.relative_gap));
    worst_order = std::min(worst_order, r.order);
  }
  report(worst_gap <= 1e-4 && worst_order >= 0.9, "variational_identity",
         fmt("10 instances, max rel gap %.3e (tol 1e-4), min observed order %.3f (min 0.9)", worst_gap, worst_order));
}

// ---------------------------------------------------------------------------

void inequality_suite() {
  const auto start = Clock::now();
  const SuiteConfig config = default_suite_config();
  const auto suite = run_suite(config);
  const double elapsed = seconds_since(start);

  // Every required statement must be exercised on every random draw.
  const char* required[] = {"dual_af",
                            "orlicz_af_jensen",
                            "orlicz_af",
                            "orlicz_af_volumes",
                            "orlicz_minkowski_quermass",
                            "orlicz_isoperimetric",
                            "orlicz_sum_identity",
                            "orlicz_sum_identity_scaled",
                            "orlicz_bm",
                            "orlicz_bm_af",
                            "lp_bm_af",
                            "orlicz_bm_quermass",
                            "orlicz_bm_volumes",
                            "lp_bm_volumes",
                            "orlicz_af_variational",
                            "dual_minkowski_quermass",
                            "radial_minkowski_quermass",
                            "harmonic_minkowski",
                            "harmonic_bm",
                            "lp_minkowski",
                            "lp_bm",
                            "lp_minkowski_quermass",
                            "lp_bm_quermass"};
  std::string missing;
  for (const char* name : required) {
    for (int n : config.dimensions) {
      const auto count = std::count_if(suite.records.begin(), suite.records.end(), [&](const SuiteRecord& r) {
        return r.report.name == name && r.dimension == n && r.family == "random";
      });
      if (count < config.draws) missing += fmt(" %s(n=%d:%ld)", name, n, static_cast<long>(count));
    }
  }

  double min_slack = 1e300;
  double worst_equality = 0.0;
  int violations = 0, equality_cases = 0, equality_misses = 0;
  for (const auto& rec : suite.records) {
    const auto& r = rec.report;
    if (!r.identity) min_slack = std::min(min_slack, r.slack / std::max(1.0, std::max(std::abs(r.lhs), std::abs(r.rhs))));
    if (!r.passed()) ++violations;
    if (rec.family == "dilates") {
      ++equality_cases;
      worst_equality = std::max(worst_equality, std::abs(r.relative_slack));
      if (!r.equality_expected || !r.equality_detected) ++equality_misses;
    }
  }
  int distinguish_failures = 0;
  for (const auto& d : suite.distinctions) distinguish_failures += d.passed ? 0 : 1;

  const bool ok = missing.empty() && violations == 0 && min_slack >= -1e-9 && equality_misses == 0 &&
                  worst_equality <= 1e-6 && distinguish_failures == 0 && elapsed < 600.0;
  report(ok, "inequality_suite",
         fmt("%zu records over n={2,3}, %d draws each; failures %d; min scaled slack %.3e (tol -1e-9); "
             "%d dilate cases, max |rel slack| %.3e (tol 1e-6), misses %d; distinguisher failures %d; %.1f s%s%s",
             suite.records.size(), config.draws, violations, min_slack, equality_cases, worst_equality,
             equality_misses, distinguish_failures, elapsed, missing.empty() ? "" : "; under-covered:",
             missing.c_str()));
}

// ---------------------------------------------------------------------------

void discrete_jensen() {
  const auto phis = phi_oracles();
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const int n = 2 + draw % 2;
    const auto rule = build_rule(n, default_level(n));
    Rng rng(derive_seed(2024, "jensen", n, draw));
    const auto& phi = phis[static_cast<std::size_t>(draw) % phis.size()];
    const auto l1 = random_star(n, rng);
    std::vector<StarBody> ks;
    std::vector<std::vector<double>> samples;
    for (int j = 0; j < n; ++j) {
      ks.push_back(random_star(n, rng));
      samples.push_back(ks.back().sample(rule));
    }
    const double expected = oracle::discrete_jensen_slack(rule, l1.sample(rule), samples, phi.eval);
    const auto reports = check_orlicz_af(phi.f, l1, ks, 1, rule);
    const auto it = std::find_if(reports.begin(), reports.end(),
                                 [](const InequalityReport& r) { return r.name == "orlicz_af_jensen"; });
    worst = std::max(worst, std::abs(it->slack - expected));
  }
  report(worst <= 1e-12, "discrete_jensen", fmt("20 draws, max |slack - oracle| %.3e (tol 1e-12)", worst));
}

// ---------------------------------------------------------------------------

void invariance() {
  const int n = 3;
  const auto coarse = build_rule(n, 32);
  const auto fine = build_rule(n, 64);
  const auto phis = phi_oracles();
  double worst_coarse = 0.0, worst_fine = 0.0, worst_equivariance = 0.0;
  for (int draw = 0; draw < 10; ++draw) {
    Rng rng(derive_seed(2024, "invariance", n, draw));
    const auto& f = phis[static_cast<std::size_t>(draw) % phis.size()].f;
    const LinearMap a = random_unimodular(n, rng);
    const auto l1 = random_star(n, rng);
    std::vector<StarBody> ks, mapped;
    for (int j = 0; j < n; ++j) {
      ks.push_back(random_star(n, rng));
      mapped.push_back(StarBody::linear_image(a, ks.back()));
    }
    const auto al1 = StarBody::linear_image(a, l1);
    for (auto [rule, worst] : {std::pair{&coarse, &worst_coarse}, std::pair{&fine, &worst_fine}}) {
      *worst = std::max(*worst, oracle::rel_err(orlicz_multiple_dmv(f, al1, mapped, *rule),
                                                orlicz_multiple_dmv(f, l1, ks, *rule)));
    }

    // rho(A(K +phi L), u) = rho(K +phi L, A^{-1} u), evaluated through homogeneity.
    Rng grng(derive_seed(2024, "equivariance", n, draw));
    Matrix g = random_rotation(n, grng);
    for (int i = 0; i < n; ++i) g.col(i) *= grng.log_uniform(0.5, 2.0);
    const LinearMap gl(g);
    const auto& k = ks[0];
    const auto& l = ks[1];
    const auto image = orlicz_combine_pair(f, StarBody::linear_image(gl, k), StarBody::linear_image(gl, l), 1.0, coarse)
                           .sample(coarse);
    const double ones[] = {1.0, 1.0};
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const auto u = coarse.node(i);
      const Vector x = gl.inverse() * Eigen::Map<const Vector>(u.data(), n);
      const double rhos[] = {k.rho(x), l.rho(x)};
      const double direct = solve_lambda(rhos, ones, f);
      worst_equivariance = std::max(worst_equivariance, oracle::rel_err(image[i], direct));
    }
  }
  report(worst_coarse < 1e-6 && worst_fine < 1e-8 && worst_equivariance <= 1e-10, "invariance",
         fmt("SL(n) rel change %.3e at level 32 (tol 1e-6), %.3e at level 64 (tol 1e-8); "
             "GL(n) equivariance max nodewise rel err %.3e (tol 1e-10)",
             worst_coarse, worst_fine, worst_equivariance));
}

// ---------------------------------------------------------------------------

void structural_properties() {
  const auto phis = phi_oracles();
  double positivity_min = 1e300, collapse = 0.0, homogeneity = 0.0, linearity = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const int n = 2 + draw % 2;
    const auto rule = build_rule(n, default_level(n));
    Rng rng(derive_seed(2024, "structure", n, draw));
    const auto& f = phis[static_cast<std::size_t>(draw) % phis.size()].f;
    const auto l1 = random_star(n, rng);
    std::vector<StarBody> ks;
    for (int j = 0; j < n; ++j) ks.push_back(random_star(n, rng));
    const double base = orlicz_multiple_dmv(f, l1, ks, rule);
    positivity_min = std::min(positivity_min, base);

    collapse = std::max(collapse, oracle::rel_err(orlicz_multiple_dmv(f, ks[0], ks, rule),
                                                  f.at_one() * dual_mixed_volume(ks, rule)));
    const std::vector<StarBody> diagonal(static_cast<std::size_t>(n), ks[0]);
    collapse = std::max(collapse, oracle::rel_err(orlicz_multiple_dmv(f, ks[0], diagonal, rule),
                                                  f.at_one() * volume(ks[0], rule)));

    std::vector<double> lambdas;
    for (int j = 0; j < n; ++j) lambdas.push_back(rng.log_uniform(0.25, 4.0));
    std::vector<StarBody> scaled;
    double factor = 1.0;
    for (int j = 0; j < n; ++j) {
      scaled.push_back(ks[static_cast<std::size_t>(j)].scaled(lambdas[static_cast<std::size_t>(j)]));
      factor *= lambdas[static_cast<std::size_t>(j)];
    }
    homogeneity = std::max(homogeneity, oracle::rel_err(orlicz_multiple_dmv(f, l1.scaled(lambdas[0]), scaled, rule),
                                                        factor * base));

    const double a = rng.log_uniform(0.25, 4.0), c = rng.log_uniform(0.25, 4.0);
    const auto other = random_star(n, rng);
    auto with_second = [&](const StarBody& body) {
      auto tuple = ks;
      tuple[1] = body;
      return orlicz_multiple_dmv(f, l1, tuple, rule);
    };
    linearity = std::max(linearity, oracle::rel_err(with_second(radial_linear_combine(a, ks[1], c, other, rule)),
                                                    a * base + c * with_second(other)));
  }
  const bool ok = positivity_min > 0.0 && collapse <= 1e-12 && homogeneity <= 1e-12 && linearity <= 1e-12;
  report(ok, "structural_properties",
         fmt("50 draws: min value %.3e (> 0); collapse %.3e, homogeneity %.3e, back-variable linearity %.3e "
             "(tol 1e-12)",
             positivity_min, collapse, homogeneity, linearity));
}

// ---------------------------------------------------------------------------

void distinguisher() {
  const int n = 3;
  const auto rule = build_rule(n, default_level(n));
  const auto probes = default_probes(n, 7);
  const auto f = OrliczFunction::power_neg(2.0);
  int found = 0, distinct = 0, spurious = 0;
  double min_distance = 1e300;
  for (int draw = 0; distinct < 10 && draw < 1000; ++draw) {
    Rng rng(derive_seed(2024, "distinguish", n, draw));
    const auto k = random_star(n, rng);
    const auto l = random_star(n, rng);
    const std::vector<StarBody> rest{random_star(n, rng), random_star(n, rng)};
    const double distance = radial_hausdorff(k, l, rule);
    if (distance < 0.05) continue;
    ++distinct;
    min_distance = std::min(min_distance, distance);
    if (distinguish_bodies(f, k, l, rest, probes, rule).found) ++found;
    if (distinguish_bodies(f, k, k, rest, probes, rule).found) ++spurious;
    if (distinguish_bodies(f, k, k.scaled(1.0 + 1e-12), rest, probes, rule).found) ++spurious;
  }
  report(distinct == 10 && found == 10 && spurious == 0, "distinguisher",
         fmt("%d/%d distinct pairs separated (min radial Hausdorff %.3f); %d witnesses for identical bodies", found,
             distinct, min_distance, spurious));
}

}  // namespace

int main() {
  ball_oracles();
  addition_consistency();
  variational_identity();
  inequality_suite();
  discrete_jensen();
  invariance();
  structural_properties();
  distinguisher();
  std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
