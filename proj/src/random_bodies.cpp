#include "starbody/random_bodies.hpp"

#include <cmath>
#include <numbers>

#include "starbody/errors.hpp"

namespace starbody {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

double Rng::log_uniform(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ArgumentError("log_uniform: need 0 < lo <= hi");
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::normal() {
  // 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::integer(int lo, int hi) {
  if (hi < lo) throw ArgumentError("integer: empty range");
  const auto span = static_cast<double>(hi - lo + 1);
  const int k = lo + static_cast<int>(uniform() * span);
  return k > hi ? hi : k;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, int dimension, int draw) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a(name));
  h = splitmix64(h ^ static_cast<std::uint64_t>(dimension));
  return splitmix64(h ^ static_cast<std::uint64_t>(draw));
}

Matrix random_rotation(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

LinearMap random_unimodular(int n, Rng& rng, double spread) {
  if (!(spread >= 1.0)) throw ArgumentError("random_unimodular: spread must be >= 1");
  const Matrix left = random_rotation(n, rng);
  const Matrix right = random_rotation(n, rng);
  Vector d(n);
  double log_det = 0.0;
  for (int i = 0; i < n; ++i) {
    d[i] = rng.log_uniform(1.0 / spread, spread);
    log_det += std::log(d[i]);
  }
  d *= std::exp(-log_det / n);
  return LinearMap(Matrix(left * d.asDiagonal() * right));
}

StarBody random_ellipsoid(int n, Rng& rng, const GeneratorOptions& options) {
  Vector axes(n);
  for (int i = 0; i < n; ++i) axes[i] = rng.log_uniform(options.axis_min, options.axis_max);
  Matrix a = axes.asDiagonal();
  if (options.rotate) a = random_rotation(n, rng) * a;
  return StarBody::ellipsoid(LinearMap(std::move(a)));
}

StarBody random_perturbed_ball(int n, Rng& rng, const GeneratorOptions& options) {
  const double r0 = rng.log_uniform(options.radius_min, options.radius_max);
  std::vector<double> coeffs(static_cast<std::size_t>(perturbation_basis_size(n)));
  for (double& c : coeffs) c = rng.uniform(-options.coeff_scale, options.coeff_scale);
  return StarBody::perturbed_ball(n, r0, std::move(coeffs));
}

StarBody random_body(BodyFamily family, int n, Rng& rng, const GeneratorOptions& options) {
  return family == BodyFamily::Ellipsoid ? random_ellipsoid(n, rng, options)
                                         : random_perturbed_ball(n, rng, options);
}

std::vector<StarBody> BodyGenerator::generate() const {
  Rng rng(seed);
  std::vector<StarBody> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(random_body(family, dimension, rng, options));
  return out;
}

}  // namespace starbody
