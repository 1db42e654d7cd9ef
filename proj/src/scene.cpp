#include "starbody/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "starbody/errors.hpp"
#include "starbody/random_bodies.hpp"

namespace starbody {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(child(path, key), "missing");
  return *it;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double positive(const Json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

long long integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long long>();
}

std::uint64_t seed_value(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const long long s = integer(v, path);
  if (s < 0) fail(path, "must be non-negative");
  return static_cast<std::uint64_t>(s);
}

std::vector<double> numbers(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], index(path, i)));
  return out;
}

std::pair<double, double> range(const Json& v, const std::string& path) {
  const auto xs = numbers(v, path);
  if (xs.size() != 2) fail(path, "expected [min, max]");
  if (!(xs[0] > 0.0)) fail(index(path, 0), "must be positive");
  if (!(xs[1] >= xs[0])) fail(index(path, 1), "must be >= min");
  return {xs[0], xs[1]};
}

Matrix matrix(const Json& v, int n, const std::string& path) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) fail(path, "expected " + std::to_string(n) + " rows");
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    const auto row_path = index(path, static_cast<std::size_t>(i));
    const auto row = numbers(v[static_cast<std::size_t>(i)], row_path);
    if (static_cast<int>(row.size()) != n) fail(row_path, "expected " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
  }
  return a;
}

/// Library errors raised while building a body become config errors at `path`.
template <class Fn>
auto at_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

GeneratorOptions generator_options(const Json& spec, const std::string& path) {
  GeneratorOptions g;
  if (spec.contains("axis_range")) std::tie(g.axis_min, g.axis_max) = range(spec["axis_range"], child(path, "axis_range"));
  if (spec.contains("radius_range")) {
    std::tie(g.radius_min, g.radius_max) = range(spec["radius_range"], child(path, "radius_range"));
  }
  if (spec.contains("coeff_scale")) {
    g.coeff_scale = number(spec["coeff_scale"], child(path, "coeff_scale"));
    if (!(g.coeff_scale >= 0.0)) fail(child(path, "coeff_scale"), "must be non-negative");
  }
  if (spec.contains("rotate")) {
    if (!spec["rotate"].is_boolean()) fail(child(path, "rotate"), "expected a boolean");
    g.rotate = spec["rotate"].get<bool>();
  }
  return g;
}

}  // namespace

StarBody parse_body(const Json& spec, int n, const std::string& path) {
  if (!spec.is_object()) fail(path, "expected an object");
  for (const char* generator : {"random_ellipsoid", "random_perturbed_ball"}) {
    if (!spec.contains(generator)) continue;
    const auto gpath = child(path, generator);
    const Json& g = spec[generator];
    if (!g.is_object()) fail(gpath, "expected an object");
    Rng rng(seed_value(require(g, "seed", gpath), child(gpath, "seed")));
    const auto options = generator_options(g, gpath);
    return at_path(gpath, [&] {
      return std::string(generator) == "random_ellipsoid" ? random_ellipsoid(n, rng, options)
                                                          : random_perturbed_ball(n, rng, options);
    });
  }

  if (spec.contains("n")) {
    const auto body_n = integer(spec["n"], child(path, "n"));
    if (body_n != n) {
      fail(child(path, "n"), "dimension " + std::to_string(body_n) + " does not match scene dimension " +
                                 std::to_string(n));
    }
  }
  const Json& shape_json = require(spec, "shape", path);
  if (!shape_json.is_string()) fail(child(path, "shape"), "expected a string");
  const auto shape = shape_json.get<std::string>();

  if (shape == "ball") {
    const double r = positive(require(spec, "r", path), child(path, "r"));
    return StarBody::ball(n, r);
  }
  if (shape == "ellipsoid") {
    if (spec.contains("axes")) {
      const auto apath = child(path, "axes");
      const auto axes = numbers(spec["axes"], apath);
      if (static_cast<int>(axes.size()) != n) {
        fail(apath, "expected " + std::to_string(n) + " axes, got " + std::to_string(axes.size()));
      }
      for (std::size_t i = 0; i < axes.size(); ++i) {
        if (!(axes[i] > 0.0)) fail(index(apath, i), "must be positive");
      }
      return at_path(apath, [&] { return StarBody::ellipsoid_axes(axes); });
    }
    const auto mpath = child(path, "matrix");
    const Matrix a = matrix(require(spec, "matrix", path), n, mpath);
    return at_path(mpath, [&] { return StarBody::ellipsoid(LinearMap(a)); });
  }
  if (shape == "perturbed_ball") {
    const double r0 = positive(require(spec, "r0", path), child(path, "r0"));
    const auto cpath = child(path, "coeffs");
    std::vector<double> coeffs = spec.contains("coeffs") ? numbers(spec["coeffs"], cpath) : std::vector<double>{};
    const auto expected = static_cast<std::size_t>(perturbation_basis_size(n));
    if (coeffs.empty()) coeffs.assign(expected, 0.0);
    if (coeffs.size() != expected) fail(cpath, "expected " + std::to_string(expected) + " coefficients");
    return at_path(path, [&] { return StarBody::perturbed_ball(n, r0, std::move(coeffs)); });
  }
  if (shape == "linear_image") {
    const auto mpath = child(path, "matrix");
    const Matrix a = matrix(require(spec, "matrix", path), n, mpath);
    const StarBody inner = parse_body(require(spec, "body", path), n, child(path, "body"));
    const LinearMap map = at_path(mpath, [&] { return LinearMap(a); });
    return StarBody::linear_image(map, inner);
  }
  fail(child(path, "shape"), "unknown shape kind '" + shape + "'");
}

OrliczFunction parse_phi(std::string_view spec) {
  const std::string text(spec);
  if (text == "exp_reciprocal") return OrliczFunction::exp_reciprocal();
  if (text == "inv_plus_inv_square") return inv_plus_inv_square();
  constexpr std::string_view prefix = "power_neg:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const std::string value(spec.substr(prefix.size()));
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ConfigError("phi: cannot read exponent in '" + text + "'");
    try {
      return OrliczFunction::power_neg(p);
    } catch (const Error& e) {
      throw ConfigError("phi: " + std::string(e.what()));
    }
  }
  throw ConfigError("phi: unknown function '" + text + "'");
}

OrliczFunction parse_phi(const Json& spec, const std::string& path) {
  if (spec.is_string()) {
    try {
      return parse_phi(spec.get<std::string>());
    } catch (const ConfigError& e) {
      fail(path, e.what());
    }
  }
  const Json& kind_json = require(spec, "kind", path);
  if (!kind_json.is_string()) fail(child(path, "kind"), "expected a string");
  const auto kind = kind_json.get<std::string>();
  if (kind == "power_neg") {
    const double p = number(require(spec, "p", path), child(path, "p"));
    return at_path(child(path, "p"), [&] { return OrliczFunction::power_neg(p); });
  }
  if (kind == "exp_reciprocal") return OrliczFunction::exp_reciprocal();
  if (kind == "inv_plus_inv_square") return inv_plus_inv_square();
  fail(child(path, "kind"), "unknown function kind '" + kind + "'");
}

std::string phi_spec(const OrliczFunction& f) { return f.name(); }

const StarBody& Scene::body(const std::string& name) const {
  for (const auto& [key, k] : bodies) {
    if (key == name) return k;
  }
  throw ConfigError("bodies." + name + ": no such body in the scene");
}

OrliczFunction Scene::phi(const std::string& name_or_spec) const {
  for (const auto& [key, f] : phis) {
    if (key == name_or_spec) return f;
  }
  return parse_phi(name_or_spec);
}

Scene parse_scene(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("scene: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("scene", "expected an object");
  Scene scene;
  const auto n = integer(require(root, "n", ""), "n");
  if (n < 2 || n > kMaxDimension) fail("n", "must lie in [2, " + std::to_string(kMaxDimension) + "]");
  scene.dimension = static_cast<int>(n);

  const Json& bodies = require(root, "bodies", "");
  if (!bodies.is_object()) fail("bodies", "expected an object");
  for (const auto& [name, spec] : bodies.items()) {
    scene.bodies.emplace_back(name, parse_body(spec, scene.dimension, "bodies." + name));
  }
  if (root.contains("phis")) {
    const Json& phis = root["phis"];
    if (!phis.is_object()) fail("phis", "expected an object");
    for (const auto& [name, spec] : phis.items()) scene.phis.emplace_back(name, parse_phi(spec, "phis." + name));
  }
  return scene;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Scene load_scene(const std::string& path) { return parse_scene(read_text_file(path)); }

SuiteConfig parse_suite_config(const Json& json) {
  if (!json.is_object()) fail("config", "expected an object");
  SuiteConfig c = default_suite_config();
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    const Json& v = json[key];
    if (!v.is_array()) fail(key, "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) fail(index(key, i), "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  };
  auto count = [&](const char* key) {
    const auto v = integer(json[key], key);
    if (v < 0 || v > 1000000) fail(key, "out of range");
    return static_cast<int>(v);
  };

  if (json.contains("checks")) c.checks = strings("checks");
  if (json.contains("dimensions")) {
    c.dimensions.clear();
    const Json& v = json["dimensions"];
    if (!v.is_array()) fail("dimensions", "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) c.dimensions.push_back(static_cast<int>(integer(v[i], index("dimensions", i))));
  }
  if (json.contains("draws")) c.draws = count("draws");
  if (json.contains("equality_draws")) c.equality_draws = count("equality_draws");
  if (json.contains("seed")) c.seed = seed_value(json["seed"], "seed");
  if (json.contains("quad_level")) c.quad_level = count("quad_level");
  if (json.contains("probes")) c.probes = count("probes");
  if (json.contains("phis")) {
    c.phis.clear();
    const Json& v = json["phis"];
    if (!v.is_array()) fail("phis", "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) c.phis.push_back(parse_phi(v[i], index("phis", i)));
  }
  if (json.contains("families")) {
    c.families.clear();
    const auto names = strings("families");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == "ellipsoid") {
        c.families.push_back(BodyFamily::Ellipsoid);
      } else if (names[i] == "perturbed_ball") {
        c.families.push_back(BodyFamily::PerturbedBall);
      } else {
        fail(index("families", i), "unknown family '" + names[i] + "'");
      }
    }
  }
  if (json.contains("generator")) {
    if (!json["generator"].is_object()) fail("generator", "expected an object");
    c.generator = generator_options(json["generator"], "generator");
  }
  if (json.contains("eps_range")) std::tie(c.eps_min, c.eps_max) = range(json["eps_range"], "eps_range");
  if (json.contains("lp_exponents")) c.lp_exponents = numbers(json["lp_exponents"], "lp_exponents");
  if (json.contains("tolerances")) {
    const Json& t = json["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object");
    auto& tol = c.options.tolerances;
    for (auto [key, field] : {std::pair{"validity", &tol.validity}, std::pair{"equality", &tol.equality},
                              std::pair{"dilate_rtol", &tol.dilate_rtol},
                              std::pair{"near_dilate_rtol", &tol.near_dilate_rtol}}) {
      if (t.contains(key)) *field = positive(t[key], child("tolerances", key));
    }
  }
  if (json.contains("solver_rtol")) c.options.solver.rtol = positive(json["solver_rtol"], "solver_rtol");
  if (json.contains("flip_orientation")) {
    if (!json["flip_orientation"].is_boolean()) fail("flip_orientation", "expected a boolean");
    c.options.flip_orientation = json["flip_orientation"].get<bool>();
  }
  c.validate();
  return c;
}

SuiteConfig load_suite_config(const std::string& path_or_default) {
  if (path_or_default == "default") return default_suite_config();
  Json root;
  try {
    root = Json::parse(read_text_file(path_or_default));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path_or_default + ": invalid JSON: " + e.what());
  }
  return parse_suite_config(root);
}

}  // namespace starbody
