#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace starbody {

/// Largest supported ambient dimension. Rule size grows as level^{n-1}.
inline constexpr int kMaxDimension = 6;

/// Volume of the unit ball, kappa_n = pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);
/// Surface area of S^{n-1}, omega_n = n * kappa_n.
double unit_sphere_area(int n);

/// Identity of a rule. Two rules built from the same key are bit-identical.
struct RuleKey {
  int dimension = 0;
  int level = 0;
  friend bool operator==(const RuleKey&, const RuleKey&) = default;
};

/// Quadrature rule on S^{n-1} for the (n-1)-dimensional surface measure.
///
/// n = 2 is the trapezoid rule with 2*level equispaced angles. For n >= 3
/// the rule is built recursively: level-point Gauss rules for the weight
/// (1 - t^2)^{(n-3)/2} in the first coordinate t, times the rule on S^{n-2}
/// scaled by sqrt(1 - t^2). At n = 3 that weight is 1, i.e. Gauss-Legendre in
/// the polar cosine times a 2*level-point trapezoid in the azimuth.
/// Every rule integrates polynomials of degree <= exact_degree = 2*level - 1
/// exactly.
class SphereRule {
 public:
  SphereRule(int dimension, int level);

  int dimension() const noexcept { return key_.dimension; }
  int level() const noexcept { return key_.level; }
  int exact_degree() const noexcept { return 2 * key_.level - 1; }
  const RuleKey& key() const noexcept { return key_; }
  std::size_t size() const noexcept { return weights_.size(); }

  std::span<const double> node(std::size_t i) const {
    return {nodes_.data() + i * static_cast<std::size_t>(key_.dimension),
            static_cast<std::size_t>(key_.dimension)};
  }
  std::span<const double> weights() const noexcept { return weights_; }
  /// Pairwise sum of the weights; approximates omega_n.
  double weight_sum() const noexcept { return weight_sum_; }

 private:
  RuleKey key_;
  std::vector<double> nodes_;  // row-major, size() x dimension
  std::vector<double> weights_;
  double weight_sum_ = 0.0;
};

/// Equivalent to SphereRule(n, level); throws ArgumentError for n < 2,
/// n > kMaxDimension or level < 1.
SphereRule build_rule(int n, int level);

/// Default refinement level for dimension n (256 nodes on the circle,
/// level 32 on S^2, level 16 on S^3).
int default_level(int n);

/// Deterministic pairwise (tree) summation.
double pairwise_sum(std::span<const double> values);

/// Sum of w_i * values[i] with pairwise reduction. Throws IntegrandError
/// naming the first node whose value is not finite.
double integrate(const SphereRule& rule, std::span<const double> values);

/// Evaluates f at every node, then integrates as above.
double integrate(const SphereRule& rule,
                 const std::function<double(std::span<const double>)>& f);

/// Nodes and weights of the level-point Gauss rule on [-1, 1] for the weight
/// (1 - t^2)^alpha, alpha > -1. Nodes ascending.
void gauss_gegenbauer(int points, double alpha, std::vector<double>& nodes,
                      std::vector<double>& weights);

}  // namespace starbody
