#pragma once

#include <string>

#include "starbody/dual_volumes.hpp"
#include "starbody/inequalities.hpp"
#include "starbody/scene.hpp"
#include "starbody/sphere_rule.hpp"

namespace starbody {

/// Library name and version embedded in every report.
Json tool_metadata();
Json rule_metadata(const SphereRule& rule);
Json tolerances_json(const Tolerances& t);
Json config_json(const SuiteConfig& config);

Json to_json(const InequalityReport& r);
Json to_json(const WitnessReport& r);
Json to_json(const VariationReport& r);

/// Aggregate suite report: metadata, summary per sub-check and every record
/// in the suite's sorted order.
Json suite_json(const SuiteReport& report);

/// One row per record:
/// check,name,dimension,family,draw,lhs,rhs,slack,relative_slack,tolerance,
/// holds,equality_detected,equality_expected,equality_unexpected,passed,inputs_digest
std::string suite_csv(const SuiteReport& report);

/// Doubles as JSON; non-finite values become null.
Json number_json(double x);

/// Pretty JSON text with a trailing newline.
std::string dump(const Json& j);

}  // namespace starbody
