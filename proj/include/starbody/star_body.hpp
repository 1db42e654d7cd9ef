#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starbody/sphere_rule.hpp"

namespace starbody {

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDimension, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDimension, kMaxDimension>;

/// An element of GL(n) with its inverse precomputed. Construction rejects
/// singular maps and maps with condition number above 1e8.
class LinearMap {
 public:
  static constexpr double kMaxCondition = 1e8;

  explicit LinearMap(Matrix a);
  static LinearMap identity(int n);
  static LinearMap scaling(int n, double s);
  static LinearMap diagonal(std::span<const double> d);

  int dimension() const noexcept { return static_cast<int>(a_.rows()); }
  const Matrix& matrix() const noexcept { return a_; }
  const Matrix& inverse() const noexcept { return inv_; }
  double det() const noexcept { return det_; }
  double condition_number() const noexcept { return cond_; }
  /// |det A - (+-1)| <= 1e-12
  bool is_unimodular() const noexcept { return std::abs(std::abs(det_) - 1.0) <= 1e-12; }

  /// this * inner
  LinearMap compose(const LinearMap& inner) const;

 private:
  Matrix a_;
  Matrix inv_;
  double det_ = 0.0;
  double cond_ = 0.0;
};

/// A star body about the origin, described by a strictly positive continuous
/// radial function on S^{n-1}. Immutable value type; copies share state.
class StarBody {
 public:
  enum class Shape { Ball, Ellipsoid, PerturbedBall, Tabulated, LinearImage };

  static StarBody ball(int n, double r);
  /// The image of the unit ball under A: rho(u) = 1 / |A^{-1} u|.
  static StarBody ellipsoid(const LinearMap& a);
  static StarBody ellipsoid_axes(std::span<const double> axes);
  /// rho(u) = r0 * exp(sum_k c_k g_k(u)) with the fixed basis of
  /// perturbation_basis(); missing coefficients are zero.
  static StarBody perturbed_ball(int n, double r0, std::vector<double> coeffs);
  /// Radial values at the nodes of the rule identified by `key`. The body can
  /// only be sampled on that rule.
  static StarBody tabulated(RuleKey key, std::vector<double> values);
  /// rho(AK, u) = rho(K, A^{-1} u), with the degree -1 extension of rho(K, .).
  static StarBody linear_image(const LinearMap& a, const StarBody& inner);

  /// lambda K. Balls and tabulated bodies stay in their shape.
  StarBody scaled(double lambda) const;

  int dimension() const noexcept;
  Shape shape() const noexcept;

  /// rho(K, x) for nonzero x, extended off the sphere by homogeneity of
  /// degree -1. Throws ArgumentError for x = 0, a dimension mismatch, or a
  /// tabulated body.
  double rho(std::span<const double> x) const;
  double rho(const Vector& x) const { return rho(std::span<const double>(x.data(), x.size())); }

  /// Radial values at every node of the rule.
  std::vector<double> sample(const SphereRule& rule) const;

  /// Radius when the body is a Ball shape.
  std::optional<double> ball_radius() const;
  std::string describe() const;

 private:
  struct Impl;
  explicit StarBody(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  double rho_unit(std::span<const double> u) const;

  std::shared_ptr<const Impl> impl_;
};

/// Number of angular basis functions used by perturbed balls in dimension n:
/// n linear terms u_i, n(n-1)/2 products u_i u_j (i < j), then n - 1 terms
/// u_i^2 - 1/n.
int perturbation_basis_size(int n);
double perturbation_basis(int k, std::span<const double> u);

/// max over nodes of |rho(K, u) - rho(L, u)|.
double radial_hausdorff(const StarBody& k, const StarBody& l, const SphereRule& rule);

/// True when max and min of rho(K, u) / rho(L, u) over the nodes differ by at
/// most rtol relative to the max.
bool is_dilate_pair(const StarBody& k, const StarBody& l, const SphereRule& rule,
                    double rtol = 1e-9);

/// Every pair in the list is a dilate pair.
bool are_mutual_dilates(std::span<const StarBody> bodies, const SphereRule& rule, double rtol);

}  // namespace starbody
