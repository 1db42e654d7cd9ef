#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "starbody/star_body.hpp"

namespace starbody {

/// Seeded stream with a portable mapping from 64-bit words to doubles, so a
/// seed produces the same bodies with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi);
  /// Standard normal by Box-Muller (one value per call).
  double normal();
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

/// Seed for one draw of a named check, independent of the draw order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, int dimension, int draw);

/// Haar-distributed rotation (det +1).
Matrix random_rotation(int n, Rng& rng);

/// Unimodular map R1 diag(d) R2 with log-uniform stretches in [1/spread, spread]
/// normalised to det 1.
LinearMap random_unimodular(int n, Rng& rng, double spread = 1.5);

enum class BodyFamily { Ellipsoid, PerturbedBall };

struct GeneratorOptions {
  double axis_min = 0.5;
  double axis_max = 2.0;
  bool rotate = true;
  double coeff_scale = 0.3;
  double radius_min = 0.5;
  double radius_max = 2.0;
};

/// Ellipsoid R diag(a) B with a log-uniform in [axis_min, axis_max].
StarBody random_ellipsoid(int n, Rng& rng, const GeneratorOptions& options = {});
/// Perturbed ball with r0 log-uniform in [radius_min, radius_max] and every
/// coefficient uniform in [-coeff_scale, coeff_scale].
StarBody random_perturbed_ball(int n, Rng& rng, const GeneratorOptions& options = {});
StarBody random_body(BodyFamily family, int n, Rng& rng, const GeneratorOptions& options = {});

/// Deterministic stream of `count` bodies of one family.
struct BodyGenerator {
  std::uint64_t seed = 0;
  BodyFamily family = BodyFamily::Ellipsoid;
  int dimension = 3;
  int count = 0;
  GeneratorOptions options;

  std::vector<StarBody> generate() const;
};

}  // namespace starbody
