#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starbody/orlicz_addition.hpp"
#include "starbody/orlicz_function.hpp"
#include "starbody/random_bodies.hpp"
#include "starbody/sphere_rule.hpp"
#include "starbody/star_body.hpp"

namespace starbody {

struct Tolerances {
  /// holds <=> slack >= -validity * max(1, |lhs|, |rhs|)
  double validity = 1e-9;
  /// equality_detected <=> |relative_slack| <= equality
  double equality = 1e-6;
  /// Bodies count as dilates for the expected-equality verdict.
  double dilate_rtol = 1e-6;
  /// Below this ratio spread a detected equality is not reported as unexpected.
  double near_dilate_rtol = 2e-2;
};

struct CheckOptions {
  Tolerances tolerances;
  SolverOptions solver;
  /// Harness self-test: swap both sides of every inequality.
  bool flip_orientation = false;
};

/// Stable 16-hex-digit FNV-1a digest of a description string.
std::string text_digest(const std::string& text);

/// One verified statement, normalised so that slack = lhs - rhs >= 0 means
/// the inequality holds. Identities hold when |slack| <= tolerance.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double relative_slack = 0.0;
  double tolerance = 0.0;
  bool identity = false;
  bool holds = false;
  bool equality_detected = false;
  bool equality_expected = false;
  /// Equality detected although the relevant bodies are not even near dilates.
  bool equality_unexpected = false;
  std::string inputs_digest;

  bool passed() const noexcept {
    return holds && (!equality_expected || equality_detected) && !equality_unexpected;
  }
};

/// Dual Aleksandrov-Fenchel: V(K_1..K_n) <= prod_{i<=r} V(K_i x r, K_{r+1}..K_n)^{1/r}.
std::vector<InequalityReport> check_dual_af(std::span<const StarBody> ks, int r,
                                            const SphereRule& rule, const CheckOptions& options = {});

/// Dual Orlicz-Aleksandrov-Fenchel family for V_phi(L_1, K_1..K_n): the
/// Jensen form, the r-form, the volume form (r = n), the L_p form with the
/// exponent of `f` when it is t^{-p}, and the p = 1 chain.
std::vector<InequalityReport> check_orlicz_af(const OrliczFunction& f, const StarBody& l1,
                                              std::span<const StarBody> ks, int r,
                                              const SphereRule& rule,
                                              const CheckOptions& options = {});

/// Orlicz dual Minkowski inequalities for the i-th quermassintegrals of K, L
/// and their L_p (exponent p) and classical specialisations.
std::vector<InequalityReport> check_orlicz_minkowski_quermass(
    const OrliczFunction& f, const StarBody& k, const StarBody& l, int i, std::optional<double> p,
    const SphereRule& rule, const CheckOptions& options = {});

/// Orlicz dual isoperimetric inequality and its L_p and classical forms.
std::vector<InequalityReport> check_isoperimetric(const OrliczFunction& f, const StarBody& k,
                                                  int i, std::optional<double> p,
                                                  const SphereRule& rule,
                                                  const CheckOptions& options = {});

/// phi(1) V(Q, K_2..K_n) = V_phi(Q, K_1, K_2..) + eps V_phi(Q, L_1, K_2..) for
/// Q = K_1 +_phi eps.L_1, at eps = 1 and at the given eps. `rest` is K_2..K_n.
std::vector<InequalityReport> check_sum_identity(const OrliczFunction& f, const StarBody& k1,
                                                 const StarBody& l1, std::span<const StarBody> rest,
                                                 double eps, const SphereRule& rule,
                                                 const CheckOptions& options = {});

/// Dual Orlicz-Brunn-Minkowski family: the eps-form, the r-form (r >= 2),
/// quermassintegral form (i < n - 1), volume forms, L_p forms with exponent
/// p, and the variational dual Orlicz-Aleksandrov-Fenchel form.
std::vector<InequalityReport> check_orlicz_bm(const OrliczFunction& f, const StarBody& k1,
                                              const StarBody& l1, std::span<const StarBody> rest,
                                              double eps, int r, int i, std::optional<double> p,
                                              const SphereRule& rule,
                                              const CheckOptions& options = {});

struct WitnessReport {
  bool found = false;
  int probe_index = -1;
  /// "shared_first" (V_phi(Q, K, ..) vs V_phi(Q, L, ..)) or "normalised_second".
  std::string form;
  double difference = 0.0;  ///< relative difference at the witness
  double tolerance = 0.0;
  int probes_tested = 0;
  /// radial_hausdorff(K, L) <= tolerance: no witness may exist.
  bool bodies_within_tolerance = false;
  std::string probe;

  bool consistent() const noexcept { return !(bodies_within_tolerance && found); }
};

/// Probe family: axis-aligned ellipsoids, rotated ellipsoids and low-order
/// perturbed balls in equal thirds.
std::vector<StarBody> default_probes(int n, std::uint64_t seed, int count = 64);

/// Searches the probes for a Q separating K and L through the Orlicz
/// multiple dual mixed volume. `rest` is K_2..K_n.
WitnessReport distinguish_bodies(const OrliczFunction& f, const StarBody& k, const StarBody& l,
                                 std::span<const StarBody> rest, std::span<const StarBody> probes,
                                 const SphereRule& rule, double tolerance = 1e-8);

// ---------------------------------------------------------------------------
// Seeded suite

/// Check groups known to the suite, in run order.
const std::vector<std::string>& suite_check_names();

struct SuiteConfig {
  std::vector<std::string> checks;
  std::vector<int> dimensions{2, 3};
  int draws = 100;
  /// Extra draws per check and dimension built from dilates (equality cases).
  int equality_draws = 10;
  std::uint64_t seed = 42;
  /// Rule level; default_level(n) when unset.
  std::optional<int> quad_level;
  std::vector<OrliczFunction> phis;
  std::vector<BodyFamily> families{BodyFamily::Ellipsoid, BodyFamily::PerturbedBall};
  GeneratorOptions generator;
  double eps_min = 0.1;
  double eps_max = 10.0;
  std::vector<double> lp_exponents{1.0, 1.5, 2.0, 3.0};
  int probes = 64;
  CheckOptions options;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

SuiteConfig default_suite_config();

struct SuiteRecord {
  std::string check;
  int dimension = 0;
  int draw = 0;
  /// "random", "dilates" or "partial_dilates".
  std::string family;
  InequalityReport report;
};

struct DistinguishRecord {
  int dimension = 0;
  int draw = 0;
  /// "distinct" (a witness is required) or "identical" (none allowed).
  std::string family;
  WitnessReport report;
  bool passed = false;
};

struct SubCheckSummary {
  std::string name;
  int count = 0;
  int failures = 0;
  double min_relative_slack = 0.0;
  int equality_expected = 0;
  int equality_detected = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<SuiteRecord> records;
  std::vector<DistinguishRecord> distinctions;
  std::vector<SubCheckSummary> summary;
  int failures = 0;

  bool passed() const noexcept { return failures == 0; }
};

/// Runs every selected check over config.draws seeded random draws and the
/// equality families in each dimension. Records are sorted by check name,
/// sub-check name, dimension, family and draw.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace starbody
