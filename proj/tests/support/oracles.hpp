#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "starbody/sphere_rule.hpp"

namespace oracle {

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Surface integral of u_1^a_1 ... u_n^a_n over S^{n-1}.
inline double sphere_moment(std::span<const int> a) {
  double log_num = 0.0;
  double total = 0.0;
  for (int k : a) {
    if (k % 2 != 0) return 0.0;
    log_num += std::lgamma(0.5 * (k + 1));
    total += k;
  }
  return 2.0 * std::exp(log_num - std::lgamma(0.5 * (total + a.size())));
}

// Plain long double accumulation of w_i f_i, independent of the library's
// pairwise reduction.
inline double weighted_sum(const starbody::SphereRule& rule, std::span<const double> f) {
  long double s = 0.0L;
  const auto w = rule.weights();
  for (std::size_t i = 0; i < f.size(); ++i) s += static_cast<long double>(w[i]) * f[i];
  return static_cast<double>(s);
}

inline double kappa(int n) { return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

}  // namespace oracle

namespace oracle {

// Jensen gap of the discrete measure mu_i ~ w_i rho_L1 prod_{j>=2} rho_Kj,
// scaled by its mass: D (E_mu[phi(g)] - phi(E_mu[g])) with g = rho_K1 / rho_L1.
template <class Phi>
double discrete_jensen_slack(const starbody::SphereRule& rule, std::span<const double> rho_l1,
                             const std::vector<std::vector<double>>& rho_ks, Phi phi) {
  const auto w = rule.weights();
  const int n = rule.dimension();
  long double mass = 0.0L, mean_g = 0.0L, mean_phi = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) {
    long double m = static_cast<long double>(w[i]) * rho_l1[i];
    for (std::size_t j = 1; j < rho_ks.size(); ++j) m *= rho_ks[j][i];
    const long double g = static_cast<long double>(rho_ks[0][i]) / rho_l1[i];
    mass += m;
    mean_g += m * g;
    mean_phi += m * phi(g);
  }
  mean_g /= mass;
  mean_phi /= mass;
  const long double d = mass / n;
  return static_cast<double>(d * (mean_phi - phi(mean_g)));
}

}  // namespace oracle
