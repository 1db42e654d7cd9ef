#include "starbody/orlicz_addition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "starbody/errors.hpp"

namespace starbody {
namespace {

constexpr int kMaxContractions = 200;

void check_options(const SolverOptions& options) {
  if (!(options.rtol > 0.0) || options.max_iter < 1) {
    throw ArgumentError("solver: rtol must be > 0 and max_iter >= 1");
  }
}

// Finds the root of an increasing G with G(lo) <= target <= G(hi).
template <class G>
double bracketed_root(const G& g, double target, double lo, double hi,
                      const SolverOptions& options) {
  int iter = 0;
  while (hi - lo > options.rtol * hi) {
    if (++iter > options.max_iter) {
      throw SolverError("solver: no convergence after " + std::to_string(options.max_iter) +
                        " iterations");
    }
    const double mid = (hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = g(mid);
    if (v == target) return mid;
    (v < target ? lo : hi) = mid;
  }
  // One secant step inside the final bracket.
  const double glo = g(lo);
  const double ghi = g(hi);
  if (std::isfinite(glo) && std::isfinite(ghi) && ghi > glo) {
    const double t = lo + (target - glo) * (hi - lo) / (ghi - glo);
    if (t >= lo && t <= hi) return t;
  }
  return 0.5 * (lo + hi);
}

template <class G>
double contract_lower(const G& g, double target, double hi) {
  double lo = 0.5 * hi;
  for (int k = 0; k < kMaxContractions; ++k) {
    const double v = g(lo);
    if (std::isnan(v)) throw SolverError("solver: objective is NaN at lambda=" + std::to_string(lo));
    if (v <= target) return lo;
    lo *= 0.5;
  }
  throw SolverError("solver: lower bracket not found after 200 contractions");
}

}  // namespace

double solve_lambda(std::span<const double> rhos, std::span<const double> weights,
                    const OrliczFunction& f, const SolverOptions& options) {
  check_options(options);
  if (rhos.size() != weights.size()) {
    throw ArgumentError("solve_lambda: " + std::to_string(rhos.size()) + " radii but " +
                        std::to_string(weights.size()) + " weights");
  }
  std::vector<std::pair<double, double>> active;
  for (std::size_t j = 0; j < rhos.size(); ++j) {
    if (!(weights[j] >= 0.0) || !std::isfinite(weights[j])) {
      throw ArgumentError("solve_lambda: weight " + std::to_string(j) + " must be >= 0");
    }
    if (weights[j] == 0.0) continue;
    if (!(rhos[j] > 0.0) || !std::isfinite(rhos[j])) {
      throw ArgumentError("solve_lambda: radius " + std::to_string(j) + " must be > 0");
    }
    active.emplace_back(rhos[j], weights[j]);
  }
  if (active.empty()) throw ArgumentError("solve_lambda: no active terms");
  std::sort(active.begin(), active.end());

  const double target = f.at_one();
  if (active.size() == 1) {
    const auto [rho, w] = active.front();
    if (w == 1.0) return rho;
    return rho / f.inverse(target / w);
  }

  auto g = [&](double lambda) {
    double s = 0.0;
    for (const auto& [rho, w] : active) s += w * f(rho / lambda);
    return s;
  };

  // Each term alone already exceeds phi(1) at its own single-term root.
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& [rho, w] : active) hi = std::min(hi, rho / f.inverse(target / w));
  const double lo = contract_lower(g, target, hi);
  return bracketed_root(g, target, lo, hi, options);
}

double solve_lambda_multivariate(std::span<const double> rhos, const MultivariateOrlicz& f,
                                 const SolverOptions& options) {
  check_options(options);
  if (!f) throw ArgumentError("solve_lambda_multivariate: empty function");
  if (rhos.empty()) throw ArgumentError("solve_lambda_multivariate: no terms");
  for (std::size_t j = 0; j < rhos.size(); ++j) {
    if (!(rhos[j] > 0.0) || !std::isfinite(rhos[j])) {
      throw ArgumentError("solve_lambda_multivariate: radius " + std::to_string(j) +
                          " must be > 0");
    }
  }
  std::vector<double> ones(rhos.size(), 1.0);
  const double target = f(ones);
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw ValidationError("solve_lambda_multivariate: F(1, ..., 1) must be finite and positive");
  }
  std::vector<double> args(rhos.size());
  auto g = [&](double lambda) {
    for (std::size_t j = 0; j < rhos.size(); ++j) args[j] = rhos[j] / lambda;
    return f(args);
  };
  // At lambda = max rho every argument is <= 1.
  const double hi = *std::max_element(rhos.begin(), rhos.end());
  if (g(hi) == target) return hi;
  const double lo = contract_lower(g, target, hi);
  return bracketed_root(g, target, lo, hi, options);
}

StarBody orlicz_harmonic_combine(const CombinationSpec& spec, const SphereRule& rule) {
  if (spec.terms.empty()) throw ArgumentError("combine: no terms");
  const std::size_t m = spec.terms.size();
  std::vector<std::vector<double>> samples;
  std::vector<double> weights(m);
  samples.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (spec.terms[j].body.dimension() != rule.dimension()) {
      throw ArgumentError("combine: term " + std::to_string(j) + " has the wrong dimension");
    }
    samples.push_back(spec.terms[j].body.sample(rule));
    weights[j] = spec.terms[j].weight;
  }
  std::vector<double> rhos(m);
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) rhos[j] = samples[j][i];
    try {
      values[i] = solve_lambda(rhos, weights, spec.f, spec.solver);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " (node " + std::to_string(i) + ")");
    } catch (const RangeError& e) {
      throw RangeError(std::string(e.what()) + " (node " + std::to_string(i) + ")");
    }
  }
  return StarBody::tabulated(rule.key(), std::move(values));
}

StarBody orlicz_combine_pair(const OrliczFunction& f, const StarBody& k, const StarBody& l,
                             double eps, const SphereRule& rule, const SolverOptions& options) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ArgumentError("combine: eps must be >= 0");
  CombinationSpec spec{{{k, 1.0}, {l, eps}}, f, options};
  return orlicz_harmonic_combine(spec, rule);
}

StarBody orlicz_multivariate_combine(std::span<const StarBody> bodies,
                                     const MultivariateOrlicz& f, const SphereRule& rule,
                                     const SolverOptions& options) {
  if (bodies.empty()) throw ArgumentError("combine: no bodies");
  std::vector<std::vector<double>> samples;
  for (const auto& b : bodies) samples.push_back(b.sample(rule));
  std::vector<double> rhos(bodies.size());
  std::vector<double> values(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (std::size_t j = 0; j < bodies.size(); ++j) rhos[j] = samples[j][i];
    try {
      values[i] = solve_lambda_multivariate(rhos, f, options);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " (node " + std::to_string(i) + ")");
    }
  }
  return StarBody::tabulated(rule.key(), std::move(values));
}

StarBody classical_radial_combine(RadialCombination kind, double p, const StarBody& k,
                                  const StarBody& l, const SphereRule& rule, double eps) {
  if (k.dimension() != l.dimension()) throw ArgumentError("combine: dimension mismatch");
  if (kind == RadialCombination::PRadial && (p == 0.0 || !std::isfinite(p))) {
    throw ArgumentError("p-radial combination needs p != 0");
  }
  if (kind == RadialCombination::PHarmonic && !(p >= 1.0)) {
    throw ArgumentError("p-harmonic combination needs p >= 1");
  }
  if (!(eps >= 0.0)) throw ArgumentError("combine: eps must be >= 0");
  const auto a = k.sample(rule);
  const auto b = l.sample(rule);
  std::vector<double> values(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    switch (kind) {
      case RadialCombination::Radial:
        values[i] = a[i] + b[i];
        break;
      case RadialCombination::PRadial:
        values[i] = std::pow(std::pow(a[i], p) + std::pow(b[i], p), 1.0 / p);
        break;
      case RadialCombination::PHarmonic:
        values[i] = std::pow(std::pow(a[i], -p) + eps * std::pow(b[i], -p), -1.0 / p);
        break;
    }
  }
  return StarBody::tabulated(rule.key(), std::move(values));
}

StarBody radial_linear_combine(double lambda1, const StarBody& k, double lambda2,
                               const StarBody& l, const SphereRule& rule) {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || lambda1 + lambda2 == 0.0) {
    throw ArgumentError("radial combination: coefficients must be >= 0, not both zero");
  }
  const auto a = k.sample(rule);
  const auto b = l.sample(rule);
  std::vector<double> values(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) values[i] = lambda1 * a[i] + lambda2 * b[i];
  return StarBody::tabulated(rule.key(), std::move(values));
}

}  // namespace starbody
