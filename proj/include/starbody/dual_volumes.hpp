#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "starbody/orlicz_addition.hpp"
#include "starbody/orlicz_function.hpp"
#include "starbody/sphere_rule.hpp"
#include "starbody/star_body.hpp"

namespace starbody {

/// V(K) = (1/n) int rho_K^n dS.
double volume(const StarBody& k, const SphereRule& rule);

/// (1/n) int rho_{K_1} ... rho_{K_n} dS over exactly n bodies.
double dual_mixed_volume(std::span<const StarBody> bodies, const SphereRule& rule);

/// V_1(K, L): tuple (K x (n-1), L).
double first_dual_mixed_volume(const StarBody& k, const StarBody& l, const SphereRule& rule);
/// W_i(K): tuple (K x (n-i), B x i).
double dual_quermass(const StarBody& k, int i, const SphereRule& rule);
/// W_i(K, L): tuple (K x (n-i-1), B x i, L).
double dual_mixed_quermass(const StarBody& k, const StarBody& l, int i, const SphereRule& rule);

/// (1/n) int phi(rho_{K_1} / rho_{L_1}) rho_{L_1} rho_{K_2} ... rho_{K_n} dS.
double orlicz_multiple_dmv(const OrliczFunction& f, const StarBody& l1,
                           std::span<const StarBody> ks, const SphereRule& rule);
/// V_phi(K, L): L_1 = K, K_1 = L, K_2 = ... = K_n = K.
double orlicz_dual_mixed_volume(const OrliczFunction& f, const StarBody& k, const StarBody& l,
                                const SphereRule& rule);
/// W_{phi,i}(K, L): L_1 = K, K_1 = L, K_2..K_{n-i} = K, the last i bodies B.
double orlicz_dual_quermass(const OrliczFunction& f, const StarBody& k, const StarBody& l, int i,
                            const SphereRule& rule);
/// W_{-p,i}(K, L) = (1/n) int rho_K^{n-i+p} rho_L^{-p} dS through the Orlicz
/// quermassintegral with phi = t^{-p}; i = 0 gives V_{-p}(K, L).
double lp_dual_quermass(double p, const StarBody& k, const StarBody& l, int i,
                        const SphereRule& rule);
/// V_{-p}(L_1, K_1, ..., K_n).
double lp_multiple_dmv(double p, const StarBody& l1, std::span<const StarBody> ks,
                       const SphereRule& rule);

/// `copies` copies of K followed by `balls` unit balls.
std::vector<StarBody> repeat_with_balls(const StarBody& k, int copies, int balls);

namespace functional {
struct Volume {
  StarBody k;
};
struct DualMixed {
  std::vector<StarBody> bodies;
};
struct FirstDual {
  StarBody k, l;
};
struct DualQuermass {
  StarBody k;
  int i = 0;
};
struct DualMixedQuermass {
  StarBody k, l;
  int i = 0;
};
struct OrliczMultiple {
  OrliczFunction f;
  StarBody l1;
  std::vector<StarBody> ks;
};
struct OrliczDual {
  OrliczFunction f;
  StarBody k, l;
};
struct OrliczQuermass {
  OrliczFunction f;
  StarBody k, l;
  int i = 0;
};
struct LpDual {
  double p = 1.0;
  StarBody k, l;
  int i = 0;
};
struct LpMultiple {
  double p = 1.0;
  StarBody l1;
  std::vector<StarBody> ks;
};
}  // namespace functional

using FunctionalSpec =
    std::variant<functional::Volume, functional::DualMixed, functional::FirstDual,
                 functional::DualQuermass, functional::DualMixedQuermass,
                 functional::OrliczMultiple, functional::OrliczDual, functional::OrliczQuermass,
                 functional::LpDual, functional::LpMultiple>;

/// Identifier used by scenes and reports, e.g. "orlicz_quermass".
std::string functional_name(const FunctionalSpec& spec);

double evaluate(const FunctionalSpec& spec, const SphereRule& rule);

/// Closed form with the exact kappa_n when every body is a Ball shape.
std::optional<double> ball_closed_form(const FunctionalSpec& spec);

/// Extrapolation of a sequence of one-sided difference quotients D(eps_k)
/// to eps -> 0 (Neville table, entry with the smallest error estimate).
struct Extrapolation {
  double value = 0.0;
  double error_estimate = 0.0;
};
Extrapolation extrapolate_to_zero(std::span<const double> eps, std::span<const double> values);

/// Least-squares slope of log|gap| against log eps.
double observed_order(std::span<const double> eps, std::span<const double> gaps);

struct VariationReport {
  std::vector<double> eps;
  /// [V(L_1 +_phi eps.K_1, K_2, ...) - V(L_1, K_2, ...)] / eps
  std::vector<double> quotients;
  /// quotient - target
  std::vector<double> gaps;
  Extrapolation extrapolated;
  double orlicz_value = 0.0;  ///< V_phi(L_1, K_1, ..., K_n)
  double derivative_at_one = 0.0;
  double target = 0.0;  ///< orlicz_value / phi'(1)
  double relative_gap = 0.0;
  double order = 0.0;

  /// Two-body form with K = L_1, L = K_1: quotients of V_1(K, K +_phi eps.L)
  /// and V(K +_phi eps.L) / n, their extrapolated limits and relative gap.
  std::vector<double> first_dual_quotients;
  std::vector<double> volume_quotients;
  double first_dual_limit = 0.0;
  double volume_limit = 0.0;
  double volume_form_relative_gap = 0.0;

  /// phi = t^{-p} only: the multiple-body limit form (1/-p) V_{-p}(L_1, K_1, ...)
  /// and the two-body form V_{-p}(K, L) = -(p/n) lim [V(K +_p eps.L) - V(K)] / eps.
  std::optional<double> lp_multiple_relative_gap;
  std::optional<double> lp_two_body_relative_gap;
};

/// First-variation check: compares the difference quotient of the dual mixed
/// volume along L_1 +_phi eps.K_1 with V_phi(L_1, K_1, ..., K_n) / phi'(1).
/// `eps` must be positive and strictly decreasing with at least two entries.
VariationReport first_variation_check(const OrliczFunction& f, const StarBody& l1,
                                      std::span<const StarBody> ks, const SphereRule& rule,
                                      std::span<const double> eps,
                                      const SolverOptions& solver = {});

/// eps_k = first / 2^k for k = 0..count-1.
std::vector<double> halving_schedule(double first, int count);

}  // namespace starbody
