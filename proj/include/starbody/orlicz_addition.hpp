#pragma once

#include <functional>
#include <span>
#include <vector>

#include "starbody/orlicz_function.hpp"
#include "starbody/sphere_rule.hpp"
#include "starbody/star_body.hpp"

namespace starbody {

struct SolverOptions {
  double rtol = 1e-12;
  int max_iter = 200;
};

/// The unique lambda > 0 with sum_j w_j phi(rho_j / lambda) = phi(1).
///
/// Terms with w_j == 0 are dropped; the remaining ones are put in a canonical
/// order first, so the result does not depend on the order of the terms.
/// A single active term with weight 1 returns its rho exactly.
double solve_lambda(std::span<const double> rhos, std::span<const double> weights,
                    const OrliczFunction& f, const SolverOptions& options = {});

/// A function of m variables, strictly decreasing in each of them.
using MultivariateOrlicz = std::function<double(std::span<const double>)>;

/// The unique lambda > 0 with F(rho_1 / lambda, ..., rho_m / lambda) = F(1, ..., 1).
double solve_lambda_multivariate(std::span<const double> rhos, const MultivariateOrlicz& f,
                                 const SolverOptions& options = {});

struct CombinationTerm {
  StarBody body;
  double weight = 1.0;
};

struct CombinationSpec {
  std::vector<CombinationTerm> terms;
  OrliczFunction f;
  SolverOptions solver;
};

/// Nodewise Orlicz harmonic combination, tabulated on the rule. Weights all 1
/// give K_1 +_phi ... +_phi K_m; weights (1, eps) give K +_phi eps.L.
StarBody orlicz_harmonic_combine(const CombinationSpec& spec, const SphereRule& rule);

/// K +_phi eps.L on the rule.
StarBody orlicz_combine_pair(const OrliczFunction& f, const StarBody& k, const StarBody& l,
                             double eps, const SphereRule& rule,
                             const SolverOptions& options = {});

/// Nodewise combination for a multivariate F, tabulated on the rule.
StarBody orlicz_multivariate_combine(std::span<const StarBody> bodies,
                                     const MultivariateOrlicz& f, const SphereRule& rule,
                                     const SolverOptions& options = {});

enum class RadialCombination { Radial, PRadial, PHarmonic };

/// Closed-form radial combinations, tabulated on the rule:
///   Radial     rho_K + rho_L
///   PRadial    (rho_K^p + rho_L^p)^{1/p}, p != 0
///   PHarmonic  (rho_K^{-p} + eps rho_L^{-p})^{-1/p}, p >= 1
/// `eps` scales the second body in the harmonic case only.
StarBody classical_radial_combine(RadialCombination kind, double p, const StarBody& k,
                                  const StarBody& l, const SphereRule& rule, double eps = 1.0);

/// lambda_1 K +~ lambda_2 L: rho = lambda_1 rho_K + lambda_2 rho_L.
StarBody radial_linear_combine(double lambda1, const StarBody& k, double lambda2,
                               const StarBody& l, const SphereRule& rule);

}  // namespace starbody
