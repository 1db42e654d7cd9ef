#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "starbody/dual_volumes.hpp"
#include "starbody/errors.hpp"
#include "starbody/inequalities.hpp"
#include "starbody/orlicz_addition.hpp"
#include "starbody/report.hpp"
#include "starbody/scene.hpp"
#include "starbody/sphere_rule.hpp"

using namespace starbody;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr const char* kLevelVariable = "STARBODY_QUAD_LEVEL";

int resolve_level(std::optional<int> flag, int n) {
  if (flag) {
    if (*flag < 1) throw ConfigError("--quad-level: must be positive");
    return *flag;
  }
  if (const char* env = std::getenv(kLevelVariable)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 100000) {
      throw ConfigError(std::string(kLevelVariable) + ": expected a positive integer, got '" + env + "'");
    }
    return static_cast<int>(v);
  }
  return default_level(n);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  out << text;
}

std::vector<StarBody> lookup(const Scene& scene, const std::vector<std::string>& names) {
  std::vector<StarBody> out;
  for (const auto& name : names) out.push_back(scene.body(name));
  return out;
}

/// Explicit names, else the scene bodies in file order with the last one
/// repeated up to `count`.
std::vector<std::string> body_names(const Scene& scene, const std::vector<std::string>& names, std::size_t count) {
  if (!names.empty()) return names;
  if (scene.bodies.empty()) throw ConfigError("bodies: scene has no bodies");
  std::vector<std::string> out;
  for (const auto& [name, body] : scene.bodies) {
    if (out.size() == count) break;
    out.push_back(name);
  }
  while (out.size() < count) out.push_back(out.back());
  return out;
}

Json describe_bodies(const Scene& scene, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (const auto& name : names) out.push_back({{"name", name}, {"body", scene.body(name).describe()}});
  return out;
}

std::string inputs_digest(const Json& inputs, const SphereRule& rule) {
  return text_digest(inputs.dump() + "|" + std::to_string(rule.dimension()) + "/" + std::to_string(rule.level()));
}

struct CommonOptions {
  std::string scene_path;
  std::optional<int> quad_level;
  std::string out;
  double rtol = SolverOptions{}.rtol;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_scene) {
  auto* scene = cmd->add_option("--scene", o.scene_path, "Scene JSON file");
  if (needs_scene) scene->required();
  cmd->add_option("--quad-level", o.quad_level,
                  std::string("Quadrature level (default: $") + kLevelVariable + " or the per-dimension default)");
  cmd->add_option("--out", o.out, "Write the JSON report here instead of stdout");
  cmd->add_option("--rtol", o.rtol, "Relative tolerance of the Orlicz root solver")->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------------------

struct ComputeArgs {
  CommonOptions common;
  std::string functional;
  std::string body;
  std::vector<std::string> bodies;
  std::string phi = "power_neg:1";
  int index = 0;
  double p = 1.0;
};

FunctionalSpec make_functional(const ComputeArgs& a, const Scene& scene, std::vector<std::string>& used) {
  const int n = scene.dimension;
  auto single = [&] {
    if (a.body.empty() && a.bodies.size() != 1) throw ConfigError("--body: required for " + a.functional);
    used = {a.body.empty() ? a.bodies[0] : a.body};
    return scene.body(used[0]);
  };
  auto list = [&](std::size_t count) {
    if (a.bodies.size() != count) {
      throw ConfigError("--bodies: " + a.functional + " needs " + std::to_string(count) + " bodies, got " +
                        std::to_string(a.bodies.size()));
    }
    used = a.bodies;
    return lookup(scene, a.bodies);
  };
  const auto f = [&] { return scene.phi(a.phi); };
  const auto& name = a.functional;
  if (name == "volume") return functional::Volume{single()};
  if (name == "dual_quermass") return functional::DualQuermass{single(), a.index};
  if (name == "dual_mixed") return functional::DualMixed{list(static_cast<std::size_t>(n))};
  if (name == "first_dual") {
    auto b = list(2);
    return functional::FirstDual{b[0], b[1]};
  }
  if (name == "dual_mixed_quermass") {
    auto b = list(2);
    return functional::DualMixedQuermass{b[0], b[1], a.index};
  }
  if (name == "orlicz_multiple") {
    auto b = list(static_cast<std::size_t>(n) + 1);
    return functional::OrliczMultiple{f(), b[0], std::vector<StarBody>(b.begin() + 1, b.end())};
  }
  if (name == "orlicz_dual") {
    auto b = list(2);
    return functional::OrliczDual{f(), b[0], b[1]};
  }
  if (name == "orlicz_quermass") {
    auto b = list(2);
    return functional::OrliczQuermass{f(), b[0], b[1], a.index};
  }
  if (name == "lp_dual") {
    auto b = list(2);
    return functional::LpDual{a.p, b[0], b[1], a.index};
  }
  if (name == "lp_multiple") {
    auto b = list(static_cast<std::size_t>(n) + 1);
    return functional::LpMultiple{a.p, b[0], std::vector<StarBody>(b.begin() + 1, b.end())};
  }
  throw ConfigError("--functional: unknown functional '" + name + "'");
}

bool uses_phi(const std::string& functional) { return functional.rfind("orlicz_", 0) == 0; }
bool uses_p(const std::string& functional) { return functional.rfind("lp_", 0) == 0; }
bool uses_index(const std::string& functional) { return functional.find("quermass") != std::string::npos || functional == "lp_dual"; }

int run_compute(const ComputeArgs& a) {
  const Scene scene = load_scene(a.common.scene_path);
  const SphereRule rule = build_rule(scene.dimension, resolve_level(a.common.quad_level, scene.dimension));
  std::vector<std::string> used;
  const FunctionalSpec spec = make_functional(a, scene, used);

  Json inputs{{"bodies", describe_bodies(scene, used)}};
  if (uses_phi(a.functional)) inputs["phi"] = phi_spec(scene.phi(a.phi));
  if (uses_p(a.functional)) inputs["p"] = a.p;
  if (uses_index(a.functional)) inputs["index"] = a.index;

  const double value = evaluate(spec, rule);
  const auto closed = ball_closed_form(spec);
  Json report{{"command", "compute"},
              {"tool", tool_metadata()},
              {"functional", functional_name(spec)},
              {"inputs", inputs},
              {"inputs_digest", inputs_digest(inputs, rule)},
              {"quadrature", rule_metadata(rule)},
              {"value", number_json(value)},
              {"closed_form", closed ? number_json(*closed) : Json(nullptr)},
              {"closed_form_dev", closed ? number_json(std::abs(value - *closed) / std::abs(*closed)) : Json(nullptr)}};
  write_text(a.common.out, dump(report));
  return kExitPass;
}

// ---------------------------------------------------------------------------

struct CombineArgs {
  CommonOptions common;
  std::vector<std::string> bodies;
  std::vector<double> weights;
  std::string phi = "power_neg:1";
};

int run_combine(const CombineArgs& a) {
  const Scene scene = load_scene(a.common.scene_path);
  const SphereRule rule = build_rule(scene.dimension, resolve_level(a.common.quad_level, scene.dimension));
  if (a.bodies.empty()) throw ConfigError("--bodies: at least one body is required");
  std::vector<double> weights = a.weights;
  if (weights.empty()) weights.assign(a.bodies.size(), 1.0);
  if (weights.size() != a.bodies.size()) throw ConfigError("--weights: expected one weight per body");
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] >= 0.0) || !std::isfinite(weights[j])) {
      throw ConfigError("--weights[" + std::to_string(j) + "]: must be non-negative");
    }
  }
  const OrliczFunction f = scene.phi(a.phi);
  CombinationSpec spec{{}, f, SolverOptions{a.common.rtol, SolverOptions{}.max_iter}};
  for (std::size_t j = 0; j < a.bodies.size(); ++j) spec.terms.push_back({scene.body(a.bodies[j]), weights[j]});
  const StarBody combined = orlicz_harmonic_combine(spec, rule);
  const auto values = combined.sample(rule);

  Json inputs{{"bodies", describe_bodies(scene, a.bodies)}, {"weights", weights}, {"phi", phi_spec(f)}};
  Json report{{"command", "combine"},
              {"tool", tool_metadata()},
              {"inputs", inputs},
              {"inputs_digest", inputs_digest(inputs, rule)},
              {"quadrature", rule_metadata(rule)},
              {"solver", {{"rtol", spec.solver.rtol}, {"max_iter", spec.solver.max_iter}}},
              {"volume", volume(combined, rule)},
              {"radial_min", *std::min_element(values.begin(), values.end())},
              {"radial_max", *std::max_element(values.begin(), values.end())}};

  if (f.kind() == OrliczFunction::Kind::PowerNeg) {
    // (sum_j w_j rho_j^{-p})^{-1/p}
    const double p = f.exponent();
    std::vector<std::vector<double>> samples;
    for (const auto& t : spec.terms) samples.push_back(t.body.sample(rule));
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < samples.size(); ++j) s += weights[j] * std::pow(samples[j][i], -p);
      const double exact = std::pow(s, -1.0 / p);
      worst = std::max(worst, std::abs(values[i] - exact) / exact);
    }
    report["power_closed_form_max_rel_dev"] = worst;
  }
  report["radial_function"] = values;
  write_text(a.common.out, dump(report));
  return kExitPass;
}

// ---------------------------------------------------------------------------

struct VariationArgs {
  CommonOptions common;
  std::vector<std::string> bodies;
  std::vector<double> eps;
  std::string phi = "power_neg:1";
  std::string csv;
  double gap_tol = 1e-4;
};

int run_variation(const VariationArgs& a) {
  const Scene scene = load_scene(a.common.scene_path);
  const int n = scene.dimension;
  const SphereRule rule = build_rule(n, resolve_level(a.common.quad_level, n));
  const auto names = body_names(scene, a.bodies, static_cast<std::size_t>(n) + 1);
  if (names.size() != static_cast<std::size_t>(n) + 1) {
    throw ConfigError("--bodies: need L1 followed by " + std::to_string(n) + " bodies");
  }
  const auto bodies = lookup(scene, names);
  const std::vector<double> eps = a.eps.empty() ? halving_schedule(1e-2, 7) : a.eps;
  const OrliczFunction f = scene.phi(a.phi);
  const auto result = first_variation_check(f, bodies[0], std::span(bodies).subspan(1), rule, eps,
                                            SolverOptions{a.common.rtol, SolverOptions{}.max_iter});

  Json inputs{{"bodies", describe_bodies(scene, names)}, {"phi", phi_spec(f)}, {"eps", eps}};
  const bool passed = std::abs(result.relative_gap) <= a.gap_tol;
  Json report{{"command", "variation"},
              {"tool", tool_metadata()},
              {"inputs", inputs},
              {"inputs_digest", inputs_digest(inputs, rule)},
              {"quadrature", rule_metadata(rule)},
              {"gap_tolerance", a.gap_tol},
              {"passed", passed}};
  report.update(to_json(result));
  write_text(a.common.out, dump(report));

  if (!a.csv.empty()) {
    std::string text = "eps,quotient,gap\n";
    char line[96];
    for (std::size_t k = 0; k < result.eps.size(); ++k) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", result.eps[k], result.quotients[k], result.gaps[k]);
      text += line;
    }
    write_text(a.csv, text);
  }
  return passed ? kExitPass : kExitViolation;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  CommonOptions common;
  std::string config = "default";
  std::optional<std::uint64_t> seed;
  std::optional<int> draws;
  std::vector<int> dimensions;
  std::string csv;
};

int run_verify(const VerifyArgs& a) {
  SuiteConfig config = load_suite_config(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.draws) config.draws = *a.draws;
  if (!a.dimensions.empty()) config.dimensions = a.dimensions;
  if (a.common.quad_level) {
    config.quad_level = *a.common.quad_level;
  } else if (std::getenv(kLevelVariable)) {
    config.quad_level = resolve_level(std::nullopt, 0);
  }
  config.options.solver.rtol = a.common.rtol;
  const SuiteReport report = run_suite(config);

  write_text(a.common.out, dump(suite_json(report)));
  if (!a.csv.empty()) write_text(a.csv, suite_csv(report));
  if (!a.common.out.empty()) {
    for (const auto& s : report.summary) {
      std::cout << (s.failures == 0 ? "PASS " : "FAIL ") << s.name << " (" << s.count << " cases, "
                << s.failures << " failed)\n";
    }
  }
  std::cerr << "verify: " << report.records.size() + report.distinctions.size() << " cases, " << report.failures
            << " failed\n";
  return report.passed() ? kExitPass : kExitViolation;
}

// ---------------------------------------------------------------------------

struct QuadInfoArgs {
  int dimension = 3;
  std::optional<int> quad_level;
  std::string out;
  bool nodes = false;
};

int run_quad_info(const QuadInfoArgs& a) {
  const SphereRule rule = build_rule(a.dimension, resolve_level(a.quad_level, a.dimension));
  Json report{{"command", "quad-info"}, {"tool", tool_metadata()}, {"quadrature", rule_metadata(rule)}};
  const double area = unit_sphere_area(a.dimension);
  report["weight_sum_rel_error"] = std::abs(rule.weight_sum() - area) / area;
  if (a.nodes) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto u = rule.node(i);
      nodes.push_back({{"u", std::vector<double>(u.begin(), u.end())}, {"w", rule.weights()[i]}});
    }
    report["nodes"] = nodes;
  }
  write_text(a.out, dump(report));
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Star bodies, Orlicz harmonic radial addition and dual mixed volume inequalities"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Evaluate a dual mixed volume functional on scene bodies");
  add_common(c, compute.common, true);
  c->add_option("--functional", compute.functional,
                "volume | dual_mixed | first_dual | dual_quermass | dual_mixed_quermass | orlicz_multiple | "
                "orlicz_dual | orlicz_quermass | lp_dual | lp_multiple")
      ->required();
  c->add_option("--body", compute.body, "Body name for single-body functionals");
  c->add_option("--bodies", compute.bodies, "Comma-separated body names in tuple order")->delimiter(',');
  c->add_option("--phi", compute.phi, "Scene function name or spec such as power_neg:2")->capture_default_str();
  c->add_option("--index", compute.index, "Quermassintegral index i")->capture_default_str();
  c->add_option("--p", compute.p, "Exponent p >= 1 of the L_p functionals")->capture_default_str();

  CombineArgs combine;
  auto* m = app.add_subcommand("combine", "Orlicz harmonic combination of scene bodies");
  add_common(m, combine.common, true);
  m->add_option("--bodies", combine.bodies, "Comma-separated body names")->delimiter(',')->required();
  m->add_option("--weights", combine.weights, "Comma-separated weights (default all 1)")->delimiter(',');
  m->add_option("--phi", combine.phi, "Scene function name or spec")->capture_default_str();

  VariationArgs variation;
  auto* v = app.add_subcommand("variation", "First-variation check along L1 +phi eps.K1");
  add_common(v, variation.common, true);
  v->add_option("--bodies", variation.bodies,
                "L1,K1,...,Kn (default: scene bodies in file order, last one repeated)")
      ->delimiter(',');
  v->add_option("--eps", variation.eps, "Comma-separated decreasing eps schedule (default 1e-2/2^k, k=0..6)")
      ->delimiter(',');
  v->add_option("--phi", variation.phi, "Scene function name or spec")->capture_default_str();
  v->add_option("--csv", variation.csv, "Write eps,quotient,gap rows here");
  v->add_option("--gap-tol", variation.gap_tol, "Relative gap accepted as a pass")->capture_default_str();

  VerifyArgs verify;
  auto* y = app.add_subcommand("verify", "Run the seeded inequality suite");
  add_common(y, verify.common, false);
  y->add_option("--config", verify.config, "Suite config JSON file or 'default'")->capture_default_str();
  y->add_option("--seed", verify.seed, "Override the config seed");
  y->add_option("--draws", verify.draws, "Override the number of random draws per check")->check(CLI::NonNegativeNumber);
  y->add_option("--dimensions", verify.dimensions, "Override the dimensions, comma-separated")->delimiter(',');
  y->add_option("--csv", verify.csv, "Write one CSV row per record here");

  QuadInfoArgs quad;
  auto* q = app.add_subcommand("quad-info", "Describe the quadrature rule for a dimension");
  q->add_option("--dimension,-n", quad.dimension, "Sphere dimension n (S^{n-1})")->capture_default_str();
  q->add_option("--quad-level", quad.quad_level, "Quadrature level");
  q->add_option("--out", quad.out, "Write the JSON report here instead of stdout");
  q->add_flag("--nodes", quad.nodes, "Include every node and weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*c) return run_compute(compute);
    if (*m) return run_combine(combine);
    if (*v) return run_variation(variation);
    if (*y) return run_verify(verify);
    if (*q) return run_quad_info(quad);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_numerical() ? kExitNumerical : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
