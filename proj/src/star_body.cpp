#include "starbody/star_body.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <variant>

#include "starbody/errors.hpp"

namespace starbody {
namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::string format_matrix(const Matrix& a) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (Eigen::Index j = 0; j < a.cols(); ++j) os << (j ? "," : "") << a(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace

LinearMap::LinearMap(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() < 2 || a_.rows() > kMaxDimension) {
    throw ArgumentError("linear map: matrix must be square with dimension in [2, " +
                        std::to_string(kMaxDimension) + "]");
  }
  if (!a_.allFinite()) throw ArgumentError("linear map: non-finite entry");
  Eigen::JacobiSVD<Matrix> svd(a_);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) throw ArgumentError("linear map: singular matrix");
  cond_ = smax / smin;
  if (cond_ > kMaxCondition) {
    throw ArgumentError("linear map: condition number " + std::to_string(cond_) +
                        " exceeds 1e8");
  }
  Eigen::PartialPivLU<Matrix> lu(a_);
  inv_ = lu.inverse();
  det_ = lu.determinant();
}

LinearMap LinearMap::identity(int n) { return LinearMap(Matrix::Identity(n, n)); }

LinearMap LinearMap::scaling(int n, double s) { return LinearMap(s * Matrix::Identity(n, n)); }

LinearMap LinearMap::diagonal(std::span<const double> d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = d[static_cast<std::size_t>(i)];
  return LinearMap(std::move(a));
}

LinearMap LinearMap::compose(const LinearMap& inner) const {
  if (inner.dimension() != dimension()) throw ArgumentError("compose: dimension mismatch");
  return LinearMap(Matrix(a_ * inner.a_));
}

struct BallShape {
  double r;
};
struct EllipsoidShape {
  LinearMap map;
};
struct PerturbedShape {
  double r0;
  std::vector<double> coeffs;
};
struct TabulatedShape {
  RuleKey key;
  std::vector<double> values;
};
struct ImageShape {
  LinearMap map;
  StarBody inner;
};

struct StarBody::Impl {
  int n;
  std::variant<BallShape, EllipsoidShape, PerturbedShape, TabulatedShape, ImageShape> shape;
};

int perturbation_basis_size(int n) { return n + n * (n - 1) / 2 + (n - 1); }

double perturbation_basis(int k, std::span<const double> u) {
  const int n = static_cast<int>(u.size());
  if (k < 0 || k >= perturbation_basis_size(n)) throw ArgumentError("perturbation basis index");
  if (k < n) return u[k];
  k -= n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (k == 0) return u[i] * u[j];
      --k;
    }
  }
  return u[k] * u[k] - 1.0 / n;
}

StarBody StarBody::ball(int n, double r) {
  if (n < 2 || n > kMaxDimension) throw ArgumentError("ball: unsupported dimension");
  if (!(r > 0.0) || !std::isfinite(r)) throw ArgumentError("ball: radius must be positive");
  return StarBody(std::make_shared<const Impl>(Impl{n, BallShape{r}}));
}

StarBody StarBody::ellipsoid(const LinearMap& a) {
  return StarBody(std::make_shared<const Impl>(Impl{a.dimension(), EllipsoidShape{a}}));
}

StarBody StarBody::ellipsoid_axes(std::span<const double> axes) {
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (!(axes[i] > 0.0) || !std::isfinite(axes[i])) {
      throw ArgumentError("ellipsoid: axes[" + std::to_string(i) + "] must be positive");
    }
  }
  return ellipsoid(LinearMap::diagonal(axes));
}

StarBody StarBody::perturbed_ball(int n, double r0, std::vector<double> coeffs) {
  if (n < 2 || n > kMaxDimension) throw ArgumentError("perturbed ball: unsupported dimension");
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw ArgumentError("perturbed ball: r0 must be > 0");
  if (static_cast<int>(coeffs.size()) > perturbation_basis_size(n)) {
    throw ArgumentError("perturbed ball: at most " + std::to_string(perturbation_basis_size(n)) +
                        " coefficients in dimension " + std::to_string(n));
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw ArgumentError("perturbed ball: non-finite coefficient");
  }
  return StarBody(
      std::make_shared<const Impl>(Impl{n, PerturbedShape{r0, std::move(coeffs)}}));
}

StarBody StarBody::tabulated(RuleKey key, std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw ArgumentError("tabulated body: value at node " + std::to_string(i) +
                          " is not positive");
    }
  }
  const int n = key.dimension;
  return StarBody(std::make_shared<const Impl>(Impl{n, TabulatedShape{key, std::move(values)}}));
}

StarBody StarBody::linear_image(const LinearMap& a, const StarBody& inner) {
  if (a.dimension() != inner.dimension()) throw ArgumentError("linear image: dimension mismatch");
  return StarBody(std::make_shared<const Impl>(Impl{a.dimension(), ImageShape{a, inner}}));
}

StarBody StarBody::scaled(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("scale must be positive");
  if (const auto* b = std::get_if<BallShape>(&impl_->shape)) return ball(impl_->n, lambda * b->r);
  if (const auto* t = std::get_if<TabulatedShape>(&impl_->shape)) {
    std::vector<double> values = t->values;
    for (double& v : values) v *= lambda;
    return tabulated(t->key, std::move(values));
  }
  return linear_image(LinearMap::scaling(impl_->n, lambda), *this);
}

int StarBody::dimension() const noexcept { return impl_->n; }

StarBody::Shape StarBody::shape() const noexcept {
  return static_cast<Shape>(impl_->shape.index());
}

std::optional<double> StarBody::ball_radius() const {
  if (const auto* b = std::get_if<BallShape>(&impl_->shape)) return b->r;
  return std::nullopt;
}

double StarBody::rho_unit(std::span<const double> u) const {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallShape>) {
          return s.r;
        } else if constexpr (std::is_same_v<S, PerturbedShape>) {
          double e = 0.0;
          for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
            if (s.coeffs[k] != 0.0) e += s.coeffs[k] * perturbation_basis(static_cast<int>(k), u);
          }
          return s.r0 * std::exp(e);
        } else {
          return rho(u);
        }
      },
      impl_->shape);
}

double StarBody::rho(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != impl_->n) {
    throw ArgumentError("rho: expected a vector of dimension " + std::to_string(impl_->n));
  }
  const double len = norm(x);
  if (!(len > 0.0)) throw ArgumentError("rho: zero direction");
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallShape>) {
          return s.r / len;
        } else if constexpr (std::is_same_v<S, EllipsoidShape>) {
          const Eigen::Map<const Vector> v(x.data(), static_cast<Eigen::Index>(x.size()));
          return 1.0 / (s.map.inverse() * v).norm();
        } else if constexpr (std::is_same_v<S, PerturbedShape>) {
          Vector u(impl_->n);
          for (int i = 0; i < impl_->n; ++i) u[i] = x[i] / len;
          return rho_unit(std::span<const double>(u.data(), u.size())) / len;
        } else if constexpr (std::is_same_v<S, TabulatedShape>) {
          throw ArgumentError("tabulated body can only be sampled on its own rule (n=" +
                              std::to_string(s.key.dimension) +
                              ", level=" + std::to_string(s.key.level) + ")");
        } else {
          const Eigen::Map<const Vector> v(x.data(), static_cast<Eigen::Index>(x.size()));
          const Vector y = s.map.inverse() * v;
          return s.inner.rho(y);
        }
      },
      impl_->shape);
}

std::vector<double> StarBody::sample(const SphereRule& rule) const {
  if (rule.dimension() != impl_->n) {
    throw ArgumentError("sample: body of dimension " + std::to_string(impl_->n) +
                        " on a rule of dimension " + std::to_string(rule.dimension()));
  }
  if (const auto* t = std::get_if<TabulatedShape>(&impl_->shape)) {
    if (!(t->key == rule.key()) || t->values.size() != rule.size()) {
      throw ArgumentError("tabulated body bound to rule (n=" + std::to_string(t->key.dimension) +
                          ", level=" + std::to_string(t->key.level) +
                          ") sampled on level " + std::to_string(rule.level()));
    }
    return t->values;
  }
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) values[i] = rho_unit(rule.node(i));
  return values;
}

std::string StarBody::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallShape>) {
          os << "ball(n=" << impl_->n << ",r=" << s.r << ')';
        } else if constexpr (std::is_same_v<S, EllipsoidShape>) {
          os << "ellipsoid(A=" << format_matrix(s.map.matrix()) << ')';
        } else if constexpr (std::is_same_v<S, PerturbedShape>) {
          os << "perturbed_ball(n=" << impl_->n << ",r0=" << s.r0 << ",coeffs=[";
          for (std::size_t k = 0; k < s.coeffs.size(); ++k) os << (k ? "," : "") << s.coeffs[k];
          os << "])";
        } else if constexpr (std::is_same_v<S, TabulatedShape>) {
          os << "tabulated(n=" << s.key.dimension << ",level=" << s.key.level << ')';
        } else {
          os << "linear_image(A=" << format_matrix(s.map.matrix()) << ',' << s.inner.describe()
             << ')';
        }
      },
      impl_->shape);
  return os.str();
}

double radial_hausdorff(const StarBody& k, const StarBody& l, const SphereRule& rule) {
  if (k.dimension() != l.dimension()) throw ArgumentError("radial_hausdorff: dimension mismatch");
  const auto a = k.sample(rule);
  const auto b = l.sample(rule);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool is_dilate_pair(const StarBody& k, const StarBody& l, const SphereRule& rule, double rtol) {
  if (!(rtol > 0.0)) throw ArgumentError("is_dilate_pair: rtol must be positive");
  if (k.dimension() != l.dimension()) return false;
  const auto a = k.sample(rule);
  const auto b = l.sample(rule);
  double lo = a[0] / b[0];
  double hi = lo;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double q = a[i] / b[i];
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return hi - lo <= rtol * hi;
}

bool are_mutual_dilates(std::span<const StarBody> bodies, const SphereRule& rule, double rtol) {
  for (std::size_t i = 1; i < bodies.size(); ++i) {
    if (!is_dilate_pair(bodies[0], bodies[i], rule, rtol)) return false;
  }
  return true;
}

}  // namespace starbody
