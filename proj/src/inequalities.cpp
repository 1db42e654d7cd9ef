#include "starbody/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "starbody/dual_volumes.hpp"
#include "starbody/errors.hpp"

namespace starbody {

std::string text_digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

using Bodies = std::vector<StarBody>;

class Digest {
 public:
  explicit Digest(const SphereRule& rule) {
    os_.precision(17);
    os_ << "rule=" << rule.dimension() << '/' << rule.level();
  }
  Digest& phi(const OrliczFunction& f) {
    os_ << ";phi=" << f.name();
    return *this;
  }
  Digest& body(const char* label, const StarBody& k) {
    os_ << ';' << label << '=' << k.describe();
    return *this;
  }
  Digest& bodies(const char* label, std::span<const StarBody> ks) {
    os_ << ';' << label << "=[";
    for (std::size_t j = 0; j < ks.size(); ++j) os_ << (j ? "," : "") << ks[j].describe();
    os_ << ']';
    return *this;
  }
  Digest& value(const char* label, double v) {
    os_ << ';' << label << '=' << v;
    return *this;
  }
  std::string str() const { return text_digest(os_.str()); }

 private:
  std::ostringstream os_;
};

struct Expectation {
  bool expected = false;
  /// False when equality is plausible without exact dilates.
  bool flag_unexpected = true;
};

class Builder {
 public:
  Builder(const SphereRule& rule, const CheckOptions& options, std::string digest)
      : rule_(rule), options_(options), digest_(std::move(digest)) {}

  /// Equality expected iff the listed bodies are dilates; an equality seen
  /// on bodies that are not even near dilates is flagged.
  Expectation dilates(std::span<const StarBody> set, bool strict = true) const {
    const auto& tol = options_.tolerances;
    Expectation e;
    e.expected = set.size() < 2 || are_mutual_dilates(set, rule_, tol.dilate_rtol);
    e.flag_unexpected = strict && !(set.size() < 2 || are_mutual_dilates(set, rule_, tol.near_dilate_rtol));
    return e;
  }

  void inequality(std::string name, double lhs, double rhs, Expectation e) {
    emit(std::move(name), lhs, rhs, e, false);
  }
  void identity(std::string name, double lhs, double rhs) {
    emit(std::move(name), lhs, rhs, {true, false}, true);
  }

  std::vector<InequalityReport> take() { return std::move(out_); }

 private:
  void emit(std::string name, double lhs, double rhs, Expectation e, bool is_identity) {
    if (options_.flip_orientation) std::swap(lhs, rhs);
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = lhs - rhs;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    r.relative_slack = scale > 0.0 ? r.slack / scale : 0.0;
    r.tolerance = options_.tolerances.validity * std::max(1.0, scale);
    r.identity = is_identity;
    const bool finite = std::isfinite(lhs) && std::isfinite(rhs);
    r.holds = finite && (is_identity ? std::abs(r.slack) <= r.tolerance : r.slack >= -r.tolerance);
    r.equality_detected = finite && std::abs(r.relative_slack) <= options_.tolerances.equality;
    r.equality_expected = e.expected;
    r.equality_unexpected = r.equality_detected && !e.expected && e.flag_unexpected;
    r.inputs_digest = digest_;
    out_.push_back(std::move(r));
  }

  const SphereRule& rule_;
  const CheckOptions& options_;
  std::string digest_;
  std::vector<InequalityReport> out_;
};

void require_dimension(std::span<const StarBody> ks, const SphereRule& rule, const char* what) {
  for (const auto& k : ks) {
    if (k.dimension() != rule.dimension()) {
      throw ArgumentError(std::string(what) + ": body dimension does not match the rule");
    }
  }
}

void require_p(std::optional<double> p, const char* what) {
  if (p && !(*p >= 1.0 && std::isfinite(*p))) {
    throw ArgumentError(std::string(what) + ": p must be >= 1");
  }
}

Bodies concat(const StarBody& head, std::span<const StarBody> tail) {
  Bodies out;
  out.reserve(tail.size() + 1);
  out.push_back(head);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

/// prod_{i<r} V(K_i x r, K_r..K_{n-1})^{1/r}
double af_product(std::span<const StarBody> ks, int r, const SphereRule& rule) {
  const auto n = ks.size();
  double prod = 1.0;
  for (int i = 0; i < r; ++i) {
    Bodies tuple(static_cast<std::size_t>(r), ks[static_cast<std::size_t>(i)]);
    tuple.insert(tuple.end(), ks.begin() + r, ks.begin() + static_cast<std::ptrdiff_t>(n));
    prod *= std::pow(dual_mixed_volume(tuple, rule), 1.0 / r);
  }
  return prod;
}

double product_of_volumes(std::span<const StarBody> ks, const SphereRule& rule) {
  double prod = 1.0;
  for (const auto& k : ks) prod *= volume(k, rule);
  return prod;
}

Bodies prefix(std::span<const StarBody> ks, int count) {
  return Bodies(ks.begin(), ks.begin() + count);
}

}  // namespace

std::vector<InequalityReport> check_dual_af(std::span<const StarBody> ks, int r,
                                            const SphereRule& rule, const CheckOptions& options) {
  const int n = rule.dimension();
  if (static_cast<int>(ks.size()) != n) throw ArgumentError("check_dual_af: need exactly n bodies");
  if (r < 1 || r > n) throw ArgumentError("check_dual_af: r must lie in [1, n]");
  require_dimension(ks, rule, "check_dual_af");

  Builder b(rule, options, Digest(rule).bodies("K", ks).value("r", r).str());
  const double dmv = dual_mixed_volume(ks, rule);
  const double af = af_product(ks, r, rule);
  if (r == 1) {
    b.identity("dual_af", af, dmv);
  } else {
    b.inequality("dual_af", af, dmv, b.dilates(prefix(ks, r)));
  }
  return b.take();
}

std::vector<InequalityReport> check_orlicz_af(const OrliczFunction& f, const StarBody& l1,
                                              std::span<const StarBody> ks, int r,
                                              const SphereRule& rule,
                                              const CheckOptions& options) {
  const int n = rule.dimension();
  if (static_cast<int>(ks.size()) != n) throw ArgumentError("check_orlicz_af: need exactly n bodies");
  if (r < 1 || r > n) throw ArgumentError("check_orlicz_af: r must lie in [1, n]");
  require_dimension(ks, rule, "check_orlicz_af");
  require_dimension(std::span(&l1, 1), rule, "check_orlicz_af");

  Builder b(rule, options, Digest(rule).phi(f).body("L1", l1).bodies("K", ks).value("r", r).str());
  const bool strict = f.strictly_convex();

  const double v_phi = orlicz_multiple_dmv(f, l1, ks, rule);
  const Bodies with_l1 = concat(l1, ks.subspan(1));
  const double d = dual_mixed_volume(with_l1, rule);
  const double dmv = dual_mixed_volume(ks, rule);
  const double af = af_product(ks, r, rule);
  const double vol_mean = std::pow(product_of_volumes(ks, rule), 1.0 / n);

  const Bodies l1_k1{l1, ks[0]};
  const Bodies l1_kr = concat(l1, prefix(ks, r));
  const Bodies l1_all = concat(l1, ks);
  b.inequality("orlicz_af_jensen", v_phi, d * f(dmv / d), b.dilates(l1_k1, strict));
  b.inequality("orlicz_af", v_phi, d * f(af / d), b.dilates(l1_kr, strict));
  b.inequality("orlicz_af_volumes", v_phi, d * f(vol_mean / d), b.dilates(l1_all, strict));

  if (f.kind() == OrliczFunction::Kind::PowerNeg) {
    const double p = f.exponent();
    const double v_p = lp_multiple_dmv(p, l1, ks, rule);
    b.inequality("lp_af", std::pow(af, p), std::pow(d, p + 1.0) / v_p, b.dilates(l1_kr));
  }

  const double v_1 = lp_multiple_dmv(1.0, l1, ks, rule);
  b.inequality("harmonic_af", v_1, d * d / af, b.dilates(l1_kr));
  b.inequality("harmonic_af_volumes", std::pow(v_1, n), std::pow(d, 2.0 * n) / product_of_volumes(ks, rule),
               b.dilates(l1_all));

  const double v_1_shared = lp_multiple_dmv(1.0, ks[0], ks, rule);
  if (r == 1) {
    b.identity("harmonic_af_shared_first", v_1_shared, dmv * dmv / af);
  } else {
    b.inequality("harmonic_af_shared_first", v_1_shared, dmv * dmv / af, b.dilates(prefix(ks, r)));
  }
  return b.take();
}

std::vector<InequalityReport> check_orlicz_minkowski_quermass(
    const OrliczFunction& f, const StarBody& k, const StarBody& l, int i, std::optional<double> p,
    const SphereRule& rule, const CheckOptions& options) {
  const int n = rule.dimension();
  if (i < 0 || i > n - 1) throw ArgumentError("check_orlicz_minkowski_quermass: i must lie in [0, n-1]");
  require_p(p, "check_orlicz_minkowski_quermass");
  const Bodies pair{k, l};
  require_dimension(pair, rule, "check_orlicz_minkowski_quermass");

  Digest digest(rule);
  digest.phi(f).body("K", k).body("L", l).value("i", i);
  if (p) digest.value("p", *p);
  Builder b(rule, options, digest.str());
  const bool strict = f.strictly_convex();
  const auto same = b.dilates(pair);
  const double m = n - i;

  const double wk = dual_quermass(k, i, rule);
  const double wl = dual_quermass(l, i, rule);
  const double vk = volume(k, rule);
  const double vl = volume(l, rule);

  b.inequality("orlicz_minkowski_quermass", orlicz_dual_quermass(f, k, l, i, rule),
               wk * f(std::pow(wl / wk, 1.0 / m)), b.dilates(pair, strict));
  b.inequality("orlicz_minkowski", orlicz_dual_mixed_volume(f, k, l, rule),
               vk * f(std::pow(vl / vk, 1.0 / n)), b.dilates(pair, strict));

  if (p) {
    b.inequality("lp_minkowski_quermass", std::pow(lp_dual_quermass(*p, k, l, i, rule), m),
                 std::pow(wk, m + *p) * std::pow(wl, -*p), same);
    b.inequality("lp_minkowski", std::pow(lp_dual_quermass(*p, k, l, 0, rule), n),
                 std::pow(vk, n + *p) * std::pow(vl, -*p), same);
  }

  const double harmonic_rhs = std::pow(vk, n + 1.0) / vl;
  b.inequality("harmonic_minkowski", std::pow(lp_dual_quermass(1.0, k, l, 0, rule), n), harmonic_rhs,
               same);
  Bodies multiple(static_cast<std::size_t>(n), k);
  multiple[0] = l;
  b.inequality("harmonic_minkowski_multiple", std::pow(lp_multiple_dmv(1.0, k, multiple, rule), n),
               harmonic_rhs, same);
  b.inequality("harmonic_minkowski_quermass", std::pow(lp_dual_quermass(1.0, k, l, i, rule), m),
               std::pow(wk, m + 1.0) / wl, same);

  const double mixed = std::pow(wk, m - 1.0) * wl;
  const double w_kl = std::pow(dual_mixed_quermass(k, l, i, rule), m);
  const StarBody radial = classical_radial_combine(RadialCombination::Radial, 1.0, k, l, rule);
  const double radial_lhs = std::pow(wk, 1.0 / m) + std::pow(wl, 1.0 / m);
  const double radial_rhs = std::pow(dual_quermass(radial, i, rule), 1.0 / m);
  if (i == n - 1) {
    b.identity("dual_minkowski_quermass", mixed, w_kl);
    b.identity("radial_minkowski_quermass", radial_lhs, radial_rhs);
  } else {
    b.inequality("dual_minkowski_quermass", mixed, w_kl, same);
    b.inequality("radial_minkowski_quermass", radial_lhs, radial_rhs, same);
  }
  return b.take();
}

std::vector<InequalityReport> check_isoperimetric(const OrliczFunction& f, const StarBody& k,
                                                  int i, std::optional<double> p,
                                                  const SphereRule& rule,
                                                  const CheckOptions& options) {
  const int n = rule.dimension();
  if (i < 0 || i > n - 1) throw ArgumentError("check_isoperimetric: i must lie in [0, n-1]");
  require_p(p, "check_isoperimetric");
  require_dimension(std::span(&k, 1), rule, "check_isoperimetric");

  Digest digest(rule);
  digest.phi(f).body("K", k).value("i", i);
  if (p) digest.value("p", *p);
  Builder b(rule, options, digest.str());
  const StarBody ball = StarBody::ball(n, 1.0);
  const Bodies pair{k, ball};
  const auto round = b.dilates(pair);
  const double m = n - i;
  // Ball volume and kappa from the same rule, so dilates of B stay exact.
  const double kappa = rule.weight_sum() / n;

  const double wk = dual_quermass(k, i, rule);
  b.inequality("orlicz_isoperimetric", orlicz_dual_quermass(f, k, ball, i, rule) / wk,
               f(std::pow(kappa / wk, 1.0 / m)), b.dilates(pair, f.strictly_convex()));
  if (p) {
    b.inequality("lp_isoperimetric", std::pow(lp_dual_quermass(*p, k, ball, i, rule) / kappa, m),
                 std::pow(wk / kappa, m + *p), round);
  }
  b.inequality("harmonic_isoperimetric", std::pow(lp_dual_quermass(1.0, k, ball, 0, rule) / kappa, n),
               std::pow(volume(k, rule) / kappa, n + 1.0), round);
  return b.take();
}

std::vector<InequalityReport> check_sum_identity(const OrliczFunction& f, const StarBody& k1,
                                                 const StarBody& l1, std::span<const StarBody> rest,
                                                 double eps, const SphereRule& rule,
                                                 const CheckOptions& options) {
  const int n = rule.dimension();
  if (static_cast<int>(rest.size()) != n - 1) throw ArgumentError("check_sum_identity: need n-1 trailing bodies");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("check_sum_identity: eps must be positive");
  require_dimension(rest, rule, "check_sum_identity");
  require_dimension(Bodies{k1, l1}, rule, "check_sum_identity");

  Builder b(rule, options,
            Digest(rule).phi(f).body("K1", k1).body("L1", l1).bodies("rest", rest).value("eps", eps).str());
  const Bodies with_k1 = concat(k1, rest);
  const Bodies with_l1 = concat(l1, rest);
  auto one = [&](const char* name, double scale) {
    const StarBody q = orlicz_combine_pair(f, k1, l1, scale, rule, options.solver);
    const double lhs = f.at_one() * dual_mixed_volume(concat(q, rest), rule);
    const double rhs = orlicz_multiple_dmv(f, q, with_k1, rule) + scale * orlicz_multiple_dmv(f, q, with_l1, rule);
    b.identity(name, lhs, rhs);
  };
  one("orlicz_sum_identity", 1.0);
  one("orlicz_sum_identity_scaled", eps);
  return b.take();
}

std::vector<InequalityReport> check_orlicz_bm(const OrliczFunction& f, const StarBody& k1,
                                              const StarBody& l1, std::span<const StarBody> rest,
                                              double eps, int r, int i, std::optional<double> p,
                                              const SphereRule& rule,
                                              const CheckOptions& options) {
  const int n = rule.dimension();
  if (static_cast<int>(rest.size()) != n - 1) throw ArgumentError("check_orlicz_bm: need n-1 trailing bodies");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("check_orlicz_bm: eps must be positive");
  if (r < 1 || r > n) throw ArgumentError("check_orlicz_bm: r must lie in [1, n]");
  if (i < 0 || i > n - 1) throw ArgumentError("check_orlicz_bm: i must lie in [0, n-1]");
  require_p(p, "check_orlicz_bm");
  require_dimension(rest, rule, "check_orlicz_bm");
  const Bodies pair{k1, l1};
  require_dimension(pair, rule, "check_orlicz_bm");

  Digest digest(rule);
  digest.phi(f).body("K1", k1).body("L1", l1).bodies("rest", rest).value("eps", eps).value("r", r).value("i", i);
  if (p) digest.value("p", *p);
  Builder b(rule, options, digest.str());
  const bool strict = f.strictly_convex();
  const double phi1 = f.at_one();

  const Bodies ks = concat(k1, rest);
  const Bodies with_l1 = concat(l1, rest);
  const double dk = dual_mixed_volume(ks, rule);
  const double dl = dual_mixed_volume(with_l1, rule);

  const StarBody q_eps = orlicz_combine_pair(f, k1, l1, eps, rule, options.solver);
  const double dq_eps = dual_mixed_volume(concat(q_eps, rest), rule);
  b.inequality("orlicz_bm", phi1, f(dk / dq_eps) + eps * f(dl / dq_eps), b.dilates(pair, strict));

  const StarBody q = orlicz_combine_pair(f, k1, l1, 1.0, rule, options.solver);
  const double dq = dual_mixed_volume(concat(q, rest), rule);

  // All of K_1, L_1, K_2..K_r.
  const Bodies lead = concat(l1, prefix(ks, r));
  if (r >= 2) {
    const double af_k = af_product(ks, r, rule);
    const double af_l = af_product(with_l1, r, rule);
    b.inequality("orlicz_bm_af", phi1, f(af_k / dq) + f(af_l / dq), b.dilates(lead, strict));
    if (p) {
      const StarBody qp = classical_radial_combine(RadialCombination::PHarmonic, *p, k1, l1, rule);
      const double dqp = dual_mixed_volume(concat(qp, rest), rule);
      b.inequality("lp_bm_af", std::pow(dqp, -*p), std::pow(af_k, -*p) + std::pow(af_l, -*p), b.dilates(lead));
    }
  }

  if (i < n - 1) {
    const double m = n - i;
    const double wq = dual_quermass(q, i, rule);
    b.inequality("orlicz_bm_quermass", phi1,
                 f(std::pow(dual_quermass(k1, i, rule) / wq, 1.0 / m)) +
                     f(std::pow(dual_quermass(l1, i, rule) / wq, 1.0 / m)),
                 b.dilates(pair, strict));
  }
  const double vq = volume(q, rule);
  const double vk1 = volume(k1, rule);
  const double vl1 = volume(l1, rule);
  b.inequality("orlicz_bm_two_body", phi1,
               f(std::pow(vk1 / vq, 1.0 / n)) + f(std::pow(vl1 / vq, 1.0 / n)), b.dilates(pair, strict));

  const double vol_rest = product_of_volumes(rest, rule);
  const double dq_n = std::pow(dq, n);
  const Bodies everything = concat(l1, ks);
  b.inequality("orlicz_bm_volumes", phi1,
               f(std::pow(vk1 * vol_rest / dq_n, 1.0 / n)) + f(std::pow(vl1 * vol_rest / dq_n, 1.0 / n)),
               b.dilates(everything, strict));

  auto lp_forms = [&](double pp, bool full) {
    const StarBody qp = classical_radial_combine(RadialCombination::PHarmonic, pp, k1, l1, rule);
    if (full) {
      const double dqp = dual_mixed_volume(concat(qp, rest), rule);
      b.inequality("lp_bm_volumes", std::pow(dqp, -pp),
                   std::pow(vk1 * vol_rest, -pp / n) + std::pow(vl1 * vol_rest, -pp / n), b.dilates(everything));
      const double m = n - i;
      b.inequality("lp_bm_quermass", std::pow(dual_quermass(qp, i, rule), -pp / m),
                   std::pow(dual_quermass(k1, i, rule), -pp / m) + std::pow(dual_quermass(l1, i, rule), -pp / m),
                   b.dilates(pair));
      b.inequality("lp_bm", std::pow(volume(qp, rule), -pp / n),
                   std::pow(vk1, -pp / n) + std::pow(vl1, -pp / n), b.dilates(pair));
    } else {
      b.inequality("harmonic_bm", std::pow(volume(qp, rule), -1.0 / n),
                   std::pow(vk1, -1.0 / n) + std::pow(vl1, -1.0 / n), b.dilates(pair));
    }
  };
  if (p) lp_forms(*p, true);
  lp_forms(1.0, false);

  // Aleksandrov-Fenchel form recovered from the Brunn-Minkowski route.
  const double v_phi = orlicz_multiple_dmv(f, l1, ks, rule);
  b.inequality("orlicz_af_variational", v_phi, dl * f(af_product(ks, r, rule) / dl), b.dilates(lead, strict));
  return b.take();
}

// ---------------------------------------------------------------------------

std::vector<StarBody> default_probes(int n, std::uint64_t seed, int count) {
  if (count < 1) throw ArgumentError("default_probes: count must be positive");
  std::vector<StarBody> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    Rng rng(derive_seed(seed, "probe", n, j));
    GeneratorOptions opts;
    switch (j % 3) {
      case 0:
        opts.rotate = false;
        out.push_back(random_ellipsoid(n, rng, opts));
        break;
      case 1:
        out.push_back(random_ellipsoid(n, rng, opts));
        break;
      default:
        out.push_back(random_perturbed_ball(n, rng, opts));
        break;
    }
  }
  return out;
}

WitnessReport distinguish_bodies(const OrliczFunction& f, const StarBody& k, const StarBody& l,
                                 std::span<const StarBody> rest, std::span<const StarBody> probes,
                                 const SphereRule& rule, double tolerance) {
  const int n = rule.dimension();
  if (static_cast<int>(rest.size()) != n - 1) throw ArgumentError("distinguish_bodies: need n-1 trailing bodies");
  if (!(tolerance > 0.0)) throw ArgumentError("distinguish_bodies: tolerance must be positive");
  require_dimension(rest, rule, "distinguish_bodies");
  require_dimension(probes, rule, "distinguish_bodies");
  require_dimension(Bodies{k, l}, rule, "distinguish_bodies");

  WitnessReport report;
  report.tolerance = tolerance;
  const auto rk = k.sample(rule);
  double scale = 0.0;
  for (double v : rk) scale = std::max(scale, v);
  report.bodies_within_tolerance = radial_hausdorff(k, l, rule) <= tolerance * scale;

  auto rel = [](double a, double c) {
    const double s = std::max(std::abs(a), std::abs(c));
    return s > 0.0 ? std::abs(a - c) / s : 0.0;
  };
  const Bodies with_k = concat(k, rest);
  const Bodies with_l = concat(l, rest);
  const double dk = dual_mixed_volume(with_k, rule);
  const double dl = dual_mixed_volume(with_l, rule);
  for (std::size_t j = 0; j < probes.size(); ++j) {
    const StarBody& q = probes[j];
    ++report.probes_tested;
    const double first = rel(orlicz_multiple_dmv(f, q, with_k, rule), orlicz_multiple_dmv(f, q, with_l, rule));
    const Bodies q_k = concat(q, rest);
    const double second =
        rel(orlicz_multiple_dmv(f, k, q_k, rule) / dk, orlicz_multiple_dmv(f, l, q_k, rule) / dl);
    const bool hit_first = first > tolerance;
    if (hit_first || second > tolerance) {
      report.found = true;
      report.probe_index = static_cast<int>(j);
      report.form = hit_first ? "shared_first" : "normalised_second";
      report.difference = hit_first ? first : second;
      report.probe = q.describe();
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_check_names() {
  static const std::vector<std::string> names{"dual_af",     "orlicz_af",    "orlicz_minkowski_quermass",
                                              "isoperimetric", "sum_identity", "orlicz_bm",
                                              "distinguish"};
  return names;
}

SuiteConfig default_suite_config() {
  SuiteConfig c;
  c.checks = suite_check_names();
  c.phis = {OrliczFunction::power_neg(1.0), OrliczFunction::power_neg(2.0),
            OrliczFunction::power_neg(3.5), OrliczFunction::exp_reciprocal(),
            inv_plus_inv_square()};
  return c;
}

void SuiteConfig::validate() const {
  if (checks.empty()) throw ConfigError("checks: no checks selected");
  const auto& known = suite_check_names();
  for (std::size_t j = 0; j < checks.size(); ++j) {
    if (std::find(known.begin(), known.end(), checks[j]) == known.end()) {
      throw ConfigError("checks[" + std::to_string(j) + "]: unknown check '" + checks[j] + "'");
    }
  }
  if (dimensions.empty()) throw ConfigError("dimensions: empty");
  for (std::size_t j = 0; j < dimensions.size(); ++j) {
    if (dimensions[j] < 2 || dimensions[j] > kMaxDimension) {
      throw ConfigError("dimensions[" + std::to_string(j) + "]: must lie in [2, " +
                        std::to_string(kMaxDimension) + "]");
    }
  }
  if (draws < 0) throw ConfigError("draws: must be non-negative");
  if (equality_draws < 0) throw ConfigError("equality_draws: must be non-negative");
  if (quad_level && *quad_level < 1) throw ConfigError("quad_level: must be positive");
  if (phis.empty()) throw ConfigError("phis: empty");
  if (families.empty()) throw ConfigError("families: empty");
  if (!(eps_min > 0.0) || !(eps_max >= eps_min)) throw ConfigError("eps_range: need 0 < min <= max");
  for (std::size_t j = 0; j < lp_exponents.size(); ++j) {
    if (!(lp_exponents[j] >= 1.0)) throw ConfigError("lp_exponents[" + std::to_string(j) + "]: must be >= 1");
  }
  if (probes < 1) throw ConfigError("probes: must be positive");
  const auto& t = options.tolerances;
  if (!(t.validity > 0.0) || !(t.equality > 0.0) || !(t.dilate_rtol > 0.0) || !(t.near_dilate_rtol > 0.0)) {
    throw ConfigError("tolerances: must be positive");
  }
}

namespace {

struct DrawContext {
  const SuiteConfig& config;
  const SphereRule& rule;
  int n;
};

/// Bodies for one draw: independent random bodies, all dilates of one base,
/// or the first two dilates of each other with the rest random.
Bodies draw_bodies(const DrawContext& ctx, Rng& rng, int count, const std::string& family,
                   bool round_base) {
  const auto& cfg = ctx.config;
  auto fresh = [&] {
    const auto fam = cfg.families[static_cast<std::size_t>(
        rng.integer(0, static_cast<int>(cfg.families.size()) - 1))];
    return random_body(fam, ctx.n, rng, cfg.generator);
  };
  Bodies out;
  out.reserve(static_cast<std::size_t>(count));
  if (family == "random") {
    for (int j = 0; j < count; ++j) out.push_back(fresh());
    return out;
  }
  const StarBody base = round_base ? StarBody::ball(ctx.n, 1.0) : fresh();
  const int linked = family == "dilates" ? count : std::min(2, count);
  for (int j = 0; j < linked; ++j) out.push_back(base.scaled(rng.log_uniform(0.5, 2.0)));
  for (int j = linked; j < count; ++j) out.push_back(fresh());
  return out;
}

std::vector<InequalityReport> run_one(const std::string& check, const DrawContext& ctx, Rng& rng,
                                      const std::string& family, int draw) {
  const auto& cfg = ctx.config;
  const int n = ctx.n;
  const auto& phi = cfg.phis[static_cast<std::size_t>(rng.integer(0, static_cast<int>(cfg.phis.size()) - 1))];
  auto pick_p = [&]() -> std::optional<double> {
    if (cfg.lp_exponents.empty()) return std::nullopt;
    return cfg.lp_exponents[static_cast<std::size_t>(
        rng.integer(0, static_cast<int>(cfg.lp_exponents.size()) - 1))];
  };
  const bool round_base = check == "isoperimetric" || draw % 3 == 0;

  if (check == "dual_af") {
    const int r = rng.integer(1, n);
    const Bodies ks = draw_bodies(ctx, rng, n, family, round_base);
    return check_dual_af(ks, r, ctx.rule, cfg.options);
  }
  if (check == "orlicz_af") {
    const int r = rng.integer(1, n);
    const Bodies all = draw_bodies(ctx, rng, n + 1, family, round_base);
    return check_orlicz_af(phi, all[0], std::span(all).subspan(1), r, ctx.rule, cfg.options);
  }
  if (check == "orlicz_minkowski_quermass") {
    const int i = rng.integer(0, n - 1);
    const auto p = pick_p();
    const Bodies kl = draw_bodies(ctx, rng, 2, family, round_base);
    return check_orlicz_minkowski_quermass(phi, kl[0], kl[1], i, p, ctx.rule, cfg.options);
  }
  if (check == "isoperimetric") {
    const int i = rng.integer(0, n - 1);
    const auto p = pick_p();
    const Bodies k = draw_bodies(ctx, rng, 1, family, round_base);
    return check_isoperimetric(phi, k[0], i, p, ctx.rule, cfg.options);
  }
  const double eps = rng.log_uniform(cfg.eps_min, cfg.eps_max);
  if (check == "sum_identity") {
    const Bodies all = draw_bodies(ctx, rng, n + 1, family, round_base);
    return check_sum_identity(phi, all[0], all[1], std::span(all).subspan(2), eps, ctx.rule, cfg.options);
  }
  // orlicz_bm: r >= 2 and i < n - 1 keep every sub-check active.
  const int r = rng.integer(2, n);
  const int i = rng.integer(0, n - 2);
  const auto p = pick_p();
  const Bodies all = draw_bodies(ctx, rng, n + 1, family, round_base);
  return check_orlicz_bm(phi, all[0], all[1], std::span(all).subspan(2), eps, r, i, p, ctx.rule,
                         cfg.options);
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  config.validate();
  SuiteReport report;
  report.config = config;

  for (int n : config.dimensions) {
    const SphereRule rule = build_rule(n, config.quad_level.value_or(default_level(n)));
    const DrawContext ctx{config, rule, n};
    for (const auto& check : config.checks) {
      if (check == "distinguish") {
        const auto probes = default_probes(n, derive_seed(config.seed, "probes", n, 0), config.probes);
        for (int d = 0; d < config.draws; ++d) {
          for (const char* family : {"distinct", "identical"}) {
            Rng rng(derive_seed(config.seed, std::string("distinguish/") + family, n, d));
            const auto& phi = config.phis[static_cast<std::size_t>(
                rng.integer(0, static_cast<int>(config.phis.size()) - 1))];
            const Bodies all = draw_bodies(ctx, rng, n + 1, "random", false);
            const StarBody l = std::string(family) == "distinct" ? all[1] : all[0].scaled(1.0 + 1e-12);
            DistinguishRecord rec;
            rec.dimension = n;
            rec.draw = d;
            rec.family = family;
            rec.report = distinguish_bodies(phi, all[0], l, std::span(all).subspan(2), probes, rule);
            rec.passed = std::string(family) == "distinct"
                             ? rec.report.found && !rec.report.bodies_within_tolerance
                             : !rec.report.found && rec.report.bodies_within_tolerance;
            if (!rec.passed) ++report.failures;
            report.distinctions.push_back(std::move(rec));
          }
        }
        continue;
      }
      auto run_family = [&](const std::string& family, int count) {
        for (int d = 0; d < count; ++d) {
          Rng rng(derive_seed(config.seed, check + "/" + family, n, d));
          for (auto& r : run_one(check, ctx, rng, family, d)) {
            report.records.push_back({check, n, d, family, std::move(r)});
          }
        }
      };
      run_family("random", config.draws);
      run_family("dilates", config.equality_draws);
      run_family("partial_dilates", config.equality_draws);
    }
  }

  auto key = [](const SuiteRecord& r) {
    return std::tie(r.check, r.report.name, r.dimension, r.family, r.draw);
  };
  std::sort(report.records.begin(), report.records.end(),
            [&](const SuiteRecord& a, const SuiteRecord& b) { return key(a) < key(b); });

  std::map<std::string, SubCheckSummary> summary;
  for (const auto& rec : report.records) {
    auto& s = summary[rec.report.name];
    if (s.count == 0) {
      s.name = rec.report.name;
      s.min_relative_slack = rec.report.relative_slack;
    }
    ++s.count;
    s.min_relative_slack = std::min(s.min_relative_slack, rec.report.relative_slack);
    if (rec.report.equality_expected) ++s.equality_expected;
    if (rec.report.equality_detected) ++s.equality_detected;
    if (!rec.report.passed()) {
      ++s.failures;
      ++report.failures;
    }
  }
  for (const auto& rec : report.distinctions) {
    auto& s = summary["distinguish_" + rec.family];
    s.name = "distinguish_" + rec.family;
    ++s.count;
    if (!rec.passed) ++s.failures;
  }
  for (auto& [name, s] : summary) report.summary.push_back(std::move(s));
  return report;
}

}  // namespace starbody
