#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "starbody/inequalities.hpp"
#include "starbody/orlicz_function.hpp"
#include "starbody/star_body.hpp"

namespace starbody {

using Json = nlohmann::ordered_json;

/// Named bodies and Orlicz functions in one dimension, in file order.
struct Scene {
  int dimension = 0;
  std::vector<std::pair<std::string, StarBody>> bodies;
  std::vector<std::pair<std::string, OrliczFunction>> phis;

  /// Throws ConfigError naming the missing body.
  const StarBody& body(const std::string& name) const;
  /// A scene function by name, else a spec understood by parse_phi.
  OrliczFunction phi(const std::string& name_or_spec) const;
};

/// Parses a JSON scene:
///   {"n": 3,
///    "bodies": {"K": {"shape": "ball", "r": 1},
///               "E": {"shape": "ellipsoid", "axes": [1, 2, 3]},
///               "R": {"random_ellipsoid": {"seed": 4, "axis_range": [0.5, 2]}}},
///    "phis": {"f": "power_neg:2", "g": {"kind": "exp_reciprocal"}}}
/// Errors are ConfigError with the path of the offending field, e.g.
/// "bodies.E.axes[1]: must be positive".
Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);

/// Body from a JSON spec; `path` prefixes error messages.
StarBody parse_body(const Json& spec, int dimension, const std::string& path);

/// "power_neg:2", "exp_reciprocal", "inv_plus_inv_square", or the JSON
/// forms {"kind": "power_neg", "p": 2} / {"kind": "exp_reciprocal"}.
OrliczFunction parse_phi(std::string_view spec);
OrliczFunction parse_phi(const Json& spec, const std::string& path);
/// Inverse of parse_phi for the named functions.
std::string phi_spec(const OrliczFunction& f);

/// Suite configuration from JSON; missing keys keep default_suite_config()
/// values.
SuiteConfig parse_suite_config(const Json& json);
SuiteConfig load_suite_config(const std::string& path_or_default);

/// Reads a whole file; ConfigError when it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace starbody
