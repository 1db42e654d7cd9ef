#include "starbody/dual_volumes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "starbody/errors.hpp"

namespace starbody {
namespace {

using Samples = std::vector<double>;

void check_dimension(const StarBody& b, const SphereRule& rule, const char* what) {
  if (b.dimension() != rule.dimension()) {
    throw ArgumentError(std::string(what) + ": body of dimension " +
                        std::to_string(b.dimension()) + " on a rule of dimension " +
                        std::to_string(rule.dimension()));
  }
}

void check_tuple(std::span<const StarBody> bodies, const SphereRule& rule, const char* what) {
  const auto n = static_cast<std::size_t>(rule.dimension());
  if (bodies.size() != n) {
    throw ArgumentError(std::string(what) + ": expected " + std::to_string(n) + " bodies, got " +
                        std::to_string(bodies.size()));
  }
  for (const auto& b : bodies) check_dimension(b, rule, what);
}

void check_index(int i, int n, const char* what) {
  if (i < 0 || i >= n) {
    throw ArgumentError(std::string(what) + ": index i must satisfy 0 <= i < " +
                        std::to_string(n));
  }
}

// (1/n) sum_i w_i prod_j rho_j(u_i), with the products formed in tuple order.
double product_integral(std::span<const StarBody> bodies, const SphereRule& rule) {
  std::vector<double> values(rule.size(), 1.0);
  for (const auto& b : bodies) {
    const Samples s = b.sample(rule);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] *= s[i];
  }
  return integrate(rule, values) / rule.dimension();
}

double neville_error(double a, double b, double c) {
  return std::max(std::abs(a - b), std::abs(a - c));
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double ball_radius_of(const StarBody& b) {
  const auto r = b.ball_radius();
  return r ? *r : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<StarBody> repeat_with_balls(const StarBody& k, int copies, int balls) {
  if (copies < 0 || balls < 0) throw ArgumentError("tuple: negative multiplicity");
  std::vector<StarBody> out(static_cast<std::size_t>(copies), k);
  const StarBody unit = StarBody::ball(k.dimension(), 1.0);
  out.insert(out.end(), static_cast<std::size_t>(balls), unit);
  return out;
}

double volume(const StarBody& k, const SphereRule& rule) {
  check_dimension(k, rule, "volume");
  const Samples s = k.sample(rule);
  std::vector<double> values(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) values[i] = std::pow(s[i], rule.dimension());
  return integrate(rule, values) / rule.dimension();
}

double dual_mixed_volume(std::span<const StarBody> bodies, const SphereRule& rule) {
  check_tuple(bodies, rule, "dual_mixed_volume");
  return product_integral(bodies, rule);
}

double first_dual_mixed_volume(const StarBody& k, const StarBody& l, const SphereRule& rule) {
  auto tuple = repeat_with_balls(k, rule.dimension() - 1, 0);
  tuple.push_back(l);
  return dual_mixed_volume(tuple, rule);
}

double dual_quermass(const StarBody& k, int i, const SphereRule& rule) {
  check_index(i, rule.dimension(), "dual_quermass");
  return dual_mixed_volume(repeat_with_balls(k, rule.dimension() - i, i), rule);
}

double dual_mixed_quermass(const StarBody& k, const StarBody& l, int i, const SphereRule& rule) {
  check_index(i, rule.dimension(), "dual_mixed_quermass");
  auto tuple = repeat_with_balls(k, rule.dimension() - i - 1, i);
  tuple.push_back(l);
  return dual_mixed_volume(tuple, rule);
}

double orlicz_multiple_dmv(const OrliczFunction& f, const StarBody& l1,
                           std::span<const StarBody> ks, const SphereRule& rule) {
  check_tuple(ks, rule, "orlicz_multiple_dmv");
  check_dimension(l1, rule, "orlicz_multiple_dmv");
  const Samples lead = l1.sample(rule);
  const Samples first = ks[0].sample(rule);
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(first[i] / lead[i]) * lead[i];
  for (std::size_t j = 1; j < ks.size(); ++j) {
    const Samples s = ks[j].sample(rule);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] *= s[i];
  }
  return integrate(rule, values) / rule.dimension();
}

double orlicz_dual_mixed_volume(const OrliczFunction& f, const StarBody& k, const StarBody& l,
                                const SphereRule& rule) {
  return orlicz_dual_quermass(f, k, l, 0, rule);
}

double orlicz_dual_quermass(const OrliczFunction& f, const StarBody& k, const StarBody& l, int i,
                            const SphereRule& rule) {
  check_index(i, rule.dimension(), "orlicz_dual_quermass");
  std::vector<StarBody> ks{l};
  const auto rest = repeat_with_balls(k, rule.dimension() - i - 1, i);
  ks.insert(ks.end(), rest.begin(), rest.end());
  return orlicz_multiple_dmv(f, k, ks, rule);
}

double lp_dual_quermass(double p, const StarBody& k, const StarBody& l, int i,
                        const SphereRule& rule) {
  return orlicz_dual_quermass(OrliczFunction::power_neg(p), k, l, i, rule);
}

double lp_multiple_dmv(double p, const StarBody& l1, std::span<const StarBody> ks,
                       const SphereRule& rule) {
  return orlicz_multiple_dmv(OrliczFunction::power_neg(p), l1, ks, rule);
}

std::string functional_name(const FunctionalSpec& spec) {
  static const char* const kNames[] = {"volume",          "dual_mixed",     "first_dual",
                                       "dual_quermass",   "dual_mixed_quermass",
                                       "orlicz_multiple", "orlicz_dual",    "orlicz_quermass",
                                       "lp_dual",         "lp_multiple"};
  return kNames[spec.index()];
}

double evaluate(const FunctionalSpec& spec, const SphereRule& rule) {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        using namespace functional;
        if constexpr (std::is_same_v<S, Volume>) {
          return volume(s.k, rule);
        } else if constexpr (std::is_same_v<S, DualMixed>) {
          return dual_mixed_volume(s.bodies, rule);
        } else if constexpr (std::is_same_v<S, FirstDual>) {
          return first_dual_mixed_volume(s.k, s.l, rule);
        } else if constexpr (std::is_same_v<S, DualQuermass>) {
          return dual_quermass(s.k, s.i, rule);
        } else if constexpr (std::is_same_v<S, DualMixedQuermass>) {
          return dual_mixed_quermass(s.k, s.l, s.i, rule);
        } else if constexpr (std::is_same_v<S, OrliczMultiple>) {
          return orlicz_multiple_dmv(s.f, s.l1, s.ks, rule);
        } else if constexpr (std::is_same_v<S, OrliczDual>) {
          return orlicz_dual_mixed_volume(s.f, s.k, s.l, rule);
        } else if constexpr (std::is_same_v<S, OrliczQuermass>) {
          return orlicz_dual_quermass(s.f, s.k, s.l, s.i, rule);
        } else if constexpr (std::is_same_v<S, LpDual>) {
          return lp_dual_quermass(s.p, s.k, s.l, s.i, rule);
        } else {
          return lp_multiple_dmv(s.p, s.l1, s.ks, rule);
        }
      },
      spec);
}

std::optional<double> ball_closed_form(const FunctionalSpec& spec) {
  const double value = std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        using namespace functional;
        auto prod = [](std::span<const StarBody> bodies, std::size_t from) {
          double r = 1.0;
          for (std::size_t j = from; j < bodies.size(); ++j) r *= ball_radius_of(bodies[j]);
          return r;
        };
        if constexpr (std::is_same_v<S, Volume>) {
          const int n = s.k.dimension();
          return std::pow(ball_radius_of(s.k), n) * unit_ball_volume(n);
        } else if constexpr (std::is_same_v<S, DualMixed>) {
          if (s.bodies.empty()) return std::numeric_limits<double>::quiet_NaN();
          return prod(s.bodies, 0) * unit_ball_volume(s.bodies[0].dimension());
        } else if constexpr (std::is_same_v<S, FirstDual>) {
          const int n = s.k.dimension();
          return std::pow(ball_radius_of(s.k), n - 1) * ball_radius_of(s.l) *
                 unit_ball_volume(n);
        } else if constexpr (std::is_same_v<S, DualQuermass>) {
          const int n = s.k.dimension();
          return std::pow(ball_radius_of(s.k), n - s.i) * unit_ball_volume(n);
        } else if constexpr (std::is_same_v<S, DualMixedQuermass>) {
          const int n = s.k.dimension();
          return std::pow(ball_radius_of(s.k), n - s.i - 1) * ball_radius_of(s.l) *
                 unit_ball_volume(n);
        } else if constexpr (std::is_same_v<S, OrliczMultiple>) {
          if (s.ks.empty()) return std::numeric_limits<double>::quiet_NaN();
          const double lead = ball_radius_of(s.l1);
          const double first = ball_radius_of(s.ks[0]);
          return s.f(first / lead) * lead * prod(s.ks, 1) * unit_ball_volume(s.l1.dimension());
        } else if constexpr (std::is_same_v<S, OrliczDual> || std::is_same_v<S, OrliczQuermass>) {
          int i = 0;
          if constexpr (std::is_same_v<S, OrliczQuermass>) i = s.i;
          const int n = s.k.dimension();
          const double r = ball_radius_of(s.k);
          return s.f(ball_radius_of(s.l) / r) * std::pow(r, n - i) * unit_ball_volume(n);
        } else if constexpr (std::is_same_v<S, LpDual>) {
          const int n = s.k.dimension();
          return std::pow(ball_radius_of(s.k), n - s.i + s.p) *
                 std::pow(ball_radius_of(s.l), -s.p) * unit_ball_volume(n);
        } else {
          if (s.ks.empty()) return std::numeric_limits<double>::quiet_NaN();
          const double lead = ball_radius_of(s.l1);
          const double first = ball_radius_of(s.ks[0]);
          return std::pow(first / lead, -s.p) * lead * prod(s.ks, 1) *
                 unit_ball_volume(s.l1.dimension());
        }
      },
      spec);
  if (std::isnan(value)) return std::nullopt;
  return value;
}

Extrapolation extrapolate_to_zero(std::span<const double> eps, std::span<const double> values) {
  if (eps.size() != values.size() || eps.empty()) {
    throw ArgumentError("extrapolate: need matching, non-empty eps and values");
  }
  const std::size_t m = eps.size();
  std::vector<std::vector<double>> t(m, std::vector<double>(m, 0.0));
  Extrapolation best{values.back(), std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < m; ++k) {
    t[k][0] = values[k];
    if (k > 0) {
      const double e = std::abs(values[k] - values[k - 1]);
      if (e < best.error_estimate) best = {values[k], e};
    }
    for (std::size_t j = 1; j <= k; ++j) {
      t[k][j] = t[k][j - 1] + (t[k][j - 1] - t[k - 1][j - 1]) * eps[k] / (eps[k - j] - eps[k]);
      const double e = neville_error(t[k][j], t[k][j - 1], t[k - 1][j - 1]);
      if (e <= best.error_estimate) best = {t[k][j], e};
    }
  }
  return best;
}

double observed_order(std::span<const double> eps, std::span<const double> gaps) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < eps.size() && k < gaps.size(); ++k) {
    if (!(std::abs(gaps[k]) > 0.0) || !(eps[k] > 0.0)) continue;
    const double x = std::log(eps[k]);
    const double y = std::log(std::abs(gaps[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = count * sxx - sx * sx;
  return denom == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (count * sxy - sx * sy) / denom;
}

std::vector<double> halving_schedule(double first, int count) {
  if (!(first > 0.0) || count < 1) throw ArgumentError("halving_schedule: bad arguments");
  std::vector<double> eps(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) eps[k] = std::ldexp(first, -k);
  return eps;
}

VariationReport first_variation_check(const OrliczFunction& f, const StarBody& l1,
                                      std::span<const StarBody> ks, const SphereRule& rule,
                                      std::span<const double> eps, const SolverOptions& solver) {
  check_tuple(ks, rule, "first_variation_check");
  if (eps.size() < 2) throw ArgumentError("first_variation_check: need at least two eps values");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0) || (k > 0 && !(eps[k] < eps[k - 1]))) {
      throw ArgumentError("first_variation_check: eps must be positive and strictly decreasing");
    }
  }
  const int n = rule.dimension();
  VariationReport report;
  report.eps.assign(eps.begin(), eps.end());

  std::vector<StarBody> tuple(ks.begin(), ks.end());
  tuple[0] = l1;
  const double base = dual_mixed_volume(tuple, rule);
  const double base_volume = volume(l1, rule);

  report.orlicz_value = orlicz_multiple_dmv(f, l1, ks, rule);
  report.derivative_at_one = f.right_derivative_at_one();
  report.target = report.orlicz_value / report.derivative_at_one;

  for (double e : eps) {
    const StarBody moved = orlicz_combine_pair(f, l1, ks[0], e, rule, solver);
    tuple[0] = moved;
    report.quotients.push_back((dual_mixed_volume(tuple, rule) - base) / e);
    report.gaps.push_back(report.quotients.back() - report.target);
    report.first_dual_quotients.push_back(
        (first_dual_mixed_volume(l1, moved, rule) - base_volume) / e);
    report.volume_quotients.push_back((volume(moved, rule) - base_volume) / (n * e));
  }
  report.extrapolated = extrapolate_to_zero(eps, report.quotients);
  report.relative_gap = relative_difference(report.extrapolated.value, report.target);
  report.order = observed_order(eps, report.gaps);

  report.first_dual_limit = extrapolate_to_zero(eps, report.first_dual_quotients).value;
  report.volume_limit = extrapolate_to_zero(eps, report.volume_quotients).value;
  report.volume_form_relative_gap = relative_difference(report.first_dual_limit, report.volume_limit);

  if (f.kind() == OrliczFunction::Kind::PowerNeg) {
    const double p = f.exponent();
    std::vector<double> multiple, two_body;
    for (double e : eps) {
      const StarBody moved =
          classical_radial_combine(RadialCombination::PHarmonic, p, l1, ks[0], rule, e);
      tuple[0] = moved;
      multiple.push_back((dual_mixed_volume(tuple, rule) - base) / e);
      two_body.push_back((volume(moved, rule) - base_volume) / e);
    }
    const double multiple_limit = extrapolate_to_zero(eps, multiple).value;
    const double two_body_limit = extrapolate_to_zero(eps, two_body).value;
    report.lp_multiple_relative_gap =
        relative_difference(multiple_limit, lp_multiple_dmv(p, l1, ks, rule) / -p);
    report.lp_two_body_relative_gap =
        relative_difference(-p / n * two_body_limit, lp_dual_quermass(p, l1, ks[0], 0, rule));
  }
  return report;
}

}  // namespace starbody
