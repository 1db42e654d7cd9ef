#include "starbody/sphere_rule.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "starbody/errors.hpp"

namespace starbody {
namespace {

constexpr std::size_t kPairwiseBlock = 8;

double pairwise_sum_range(const double* data, std::size_t count) {
  if (count <= kPairwiseBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += data[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum_range(data, half) + pairwise_sum_range(data + half, count - half);
}

// Monic three-term recurrence coefficient for the weight (1 - t^2)^alpha.
double gegenbauer_beta(int k, double alpha) {
  const double s = 2.0 * k + 2.0 * alpha;
  return k * (k + 2.0 * alpha) / (s * s - 1.0);
}

// Values of the monic p_{m-1}, p_m and p_m' at t.
void monic_eval(int m, double alpha, double t, double& prev, double& value, double& deriv) {
  double p0 = 1.0, p1 = t;
  double d0 = 0.0, d1 = 1.0;
  if (m == 0) {
    prev = 0.0;
    value = 1.0;
    deriv = 0.0;
    return;
  }
  for (int k = 1; k < m; ++k) {
    const double b = gegenbauer_beta(k, alpha);
    const double p2 = t * p1 - b * p0;
    const double d2 = p1 + t * d1 - b * d0;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  prev = p0;
  value = p1;
  deriv = d1;
}

void append_circle(int level, std::vector<double>& nodes, std::vector<double>& weights) {
  const int m = 2 * level;
  const double step = 2.0 * std::numbers::pi / m;
  for (int k = 0; k < m; ++k) {
    const double angle = step * k;
    nodes.push_back(std::cos(angle));
    nodes.push_back(std::sin(angle));
    weights.push_back(step);
  }
}

void build_nodes(int n, int level, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n == 2) {
    append_circle(level, nodes, weights);
    return;
  }
  std::vector<double> sub_nodes, sub_weights;
  build_nodes(n - 1, level, sub_nodes, sub_weights);

  std::vector<double> t, w;
  gauss_gegenbauer(level, 0.5 * (n - 3), t, w);

  const std::size_t sub_dim = static_cast<std::size_t>(n - 1);
  nodes.reserve(t.size() * sub_weights.size() * static_cast<std::size_t>(n));
  weights.reserve(t.size() * sub_weights.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double s = std::sqrt((1.0 - t[j]) * (1.0 + t[j]));
    for (std::size_t q = 0; q < sub_weights.size(); ++q) {
      nodes.push_back(t[j]);
      for (std::size_t c = 0; c < sub_dim; ++c) nodes.push_back(s * sub_nodes[q * sub_dim + c]);
      weights.push_back(w[j] * sub_weights[q]);
    }
  }
}

}  // namespace

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

void gauss_gegenbauer(int points, double alpha, std::vector<double>& nodes,
                      std::vector<double>& weights) {
  if (points < 1) throw ArgumentError("gauss_gegenbauer: need at least one point");
  if (!(alpha > -1.0)) throw ArgumentError("gauss_gegenbauer: alpha must exceed -1");
  nodes.assign(static_cast<std::size_t>(points), 0.0);
  weights.assign(static_cast<std::size_t>(points), 0.0);
  const double mu0 =
      std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 1.5);
  if (points == 1) {
    weights[0] = mu0;
    return;
  }

  // Golub-Welsch for starting values, then Newton on the recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd sub(points - 1);
  for (int k = 1; k < points; ++k) sub[k - 1] = std::sqrt(gegenbauer_beta(k, alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& guess = solver.eigenvalues();

  double norm = mu0;  // integral of p_{points-1}^2 against the weight
  for (int k = 1; k < points; ++k) norm *= gegenbauer_beta(k, alpha);

  const int half = points / 2;
  for (int i = 0; i < half; ++i) {
    double t = guess[i];
    double prev = 0.0, value = 0.0, deriv = 0.0;
    for (int iter = 0; iter < 8; ++iter) {
      monic_eval(points, alpha, t, prev, value, deriv);
      const double dt = value / deriv;
      t -= dt;
      if (std::abs(dt) < 1e-17) break;
    }
    monic_eval(points, alpha, t, prev, value, deriv);
    const double wt = norm / (prev * deriv);
    // Symmetric placement keeps odd moments at exactly zero.
    nodes[i] = t;
    nodes[points - 1 - i] = -t;
    weights[i] = wt;
    weights[points - 1 - i] = wt;
  }
  if (points % 2 == 1) {
    double prev = 0.0, value = 0.0, deriv = 0.0;
    monic_eval(points, alpha, 0.0, prev, value, deriv);
    nodes[half] = 0.0;
    weights[half] = norm / (prev * deriv);
  }
}

SphereRule::SphereRule(int dimension, int level) : key_{dimension, level} {
  if (dimension < 2 || dimension > kMaxDimension) {
    throw ArgumentError("sphere rule: dimension must be in [2, " + std::to_string(kMaxDimension) +
                        "], got " + std::to_string(dimension));
  }
  if (level < 1) throw ArgumentError("sphere rule: level must be >= 1");
  build_nodes(dimension, level, nodes_, weights_);
  weight_sum_ = pairwise_sum(weights_);
}

SphereRule build_rule(int n, int level) { return SphereRule(n, level); }

int default_level(int n) {
  switch (n) {
    case 2:
      return 128;
    case 3:
      return 32;
    case 4:
      return 16;
    default:
      return 8;
  }
}

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

double integrate(const SphereRule& rule, std::span<const double> values) {
  if (values.size() != rule.size()) {
    throw ArgumentError("integrate: " + std::to_string(values.size()) + " values for a rule of " +
                        std::to_string(rule.size()) + " nodes");
  }
  std::vector<double> terms(values.size());
  const auto w = rule.weights();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw IntegrandError("integrand is not finite at node " + std::to_string(i));
    }
    terms[i] = w[i] * values[i];
  }
  return pairwise_sum(terms);
}

double integrate(const SphereRule& rule,
                 const std::function<double(std::span<const double>)>& f) {
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) values[i] = f(rule.node(i));
  return integrate(rule, values);
}

}  // namespace starbody
