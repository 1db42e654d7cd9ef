#include "starbody/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#ifndef STARBODY_VERSION
#define STARBODY_VERSION "unknown"
#endif

namespace starbody {
namespace {

std::string csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json numbers_json(std::span<const double> xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number_json(x));
  return out;
}

const char* family_name(BodyFamily f) {
  return f == BodyFamily::Ellipsoid ? "ellipsoid" : "perturbed_ball";
}

}  // namespace

Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json tool_metadata() { return Json{{"name", "starbody"}, {"version", STARBODY_VERSION}}; }

Json rule_metadata(const SphereRule& rule) {
  return Json{{"dimension", rule.dimension()},
              {"level", rule.level()},
              {"nodes", rule.size()},
              {"exact_degree", rule.exact_degree()},
              {"weight_sum", rule.weight_sum()},
              {"sphere_area", unit_sphere_area(rule.dimension())}};
}

Json tolerances_json(const Tolerances& t) {
  return Json{{"validity", t.validity},
              {"equality", t.equality},
              {"dilate_rtol", t.dilate_rtol},
              {"near_dilate_rtol", t.near_dilate_rtol}};
}

Json config_json(const SuiteConfig& c) {
  Json phis = Json::array();
  for (const auto& f : c.phis) phis.push_back(phi_spec(f));
  Json families = Json::array();
  for (auto f : c.families) families.push_back(family_name(f));
  return Json{{"checks", c.checks},
              {"dimensions", c.dimensions},
              {"draws", c.draws},
              {"equality_draws", c.equality_draws},
              {"seed", c.seed},
              {"quad_level", c.quad_level ? Json(*c.quad_level) : Json("default")},
              {"phis", phis},
              {"families", families},
              {"generator",
               {{"axis_range", {c.generator.axis_min, c.generator.axis_max}},
                {"radius_range", {c.generator.radius_min, c.generator.radius_max}},
                {"coeff_scale", c.generator.coeff_scale},
                {"rotate", c.generator.rotate}}},
              {"eps_range", {c.eps_min, c.eps_max}},
              {"lp_exponents", c.lp_exponents},
              {"probes", c.probes},
              {"tolerances", tolerances_json(c.options.tolerances)},
              {"solver_rtol", c.options.solver.rtol},
              {"flip_orientation", c.options.flip_orientation}};
}

Json to_json(const InequalityReport& r) {
  return Json{{"name", r.name},
              {"lhs", number_json(r.lhs)},
              {"rhs", number_json(r.rhs)},
              {"slack", number_json(r.slack)},
              {"relative_slack", number_json(r.relative_slack)},
              {"tolerance", r.tolerance},
              {"identity", r.identity},
              {"holds", r.holds},
              {"equality_detected", r.equality_detected},
              {"equality_expected", r.equality_expected},
              {"equality_unexpected", r.equality_unexpected},
              {"passed", r.passed()},
              {"inputs_digest", r.inputs_digest}};
}

Json to_json(const WitnessReport& r) {
  return Json{{"found", r.found},
              {"probe_index", r.probe_index},
              {"form", r.form},
              {"difference", number_json(r.difference)},
              {"tolerance", r.tolerance},
              {"probes_tested", r.probes_tested},
              {"bodies_within_tolerance", r.bodies_within_tolerance},
              {"consistent", r.consistent()},
              {"probe", r.probe}};
}

Json to_json(const VariationReport& r) {
  Json j{{"eps", numbers_json(r.eps)},
         {"quotients", numbers_json(r.quotients)},
         {"gaps", numbers_json(r.gaps)},
         {"extrapolated", {{"value", number_json(r.extrapolated.value)},
                           {"error_estimate", number_json(r.extrapolated.error_estimate)}}},
         {"orlicz_value", number_json(r.orlicz_value)},
         {"derivative_at_one", number_json(r.derivative_at_one)},
         {"target", number_json(r.target)},
         {"relative_gap", number_json(r.relative_gap)},
         {"order", number_json(r.order)},
         {"first_dual_quotients", numbers_json(r.first_dual_quotients)},
         {"volume_quotients", numbers_json(r.volume_quotients)},
         {"first_dual_limit", number_json(r.first_dual_limit)},
         {"volume_limit", number_json(r.volume_limit)},
         {"volume_form_relative_gap", number_json(r.volume_form_relative_gap)}};
  if (r.lp_multiple_relative_gap) j["lp_multiple_relative_gap"] = number_json(*r.lp_multiple_relative_gap);
  if (r.lp_two_body_relative_gap) j["lp_two_body_relative_gap"] = number_json(*r.lp_two_body_relative_gap);
  return j;
}

Json suite_json(const SuiteReport& report) {
  Json summary = Json::array();
  for (const auto& s : report.summary) {
    summary.push_back({{"name", s.name},
                       {"count", s.count},
                       {"failures", s.failures},
                       {"min_relative_slack", number_json(s.min_relative_slack)},
                       {"equality_expected", s.equality_expected},
                       {"equality_detected", s.equality_detected}});
  }
  Json failed = Json::array();
  std::set<std::string> seen;
  auto note_failure = [&](std::string key) {
    if (seen.insert(key).second) failed.push_back(std::move(key));
  };
  Json records = Json::array();
  for (const auto& rec : report.records) {
    Json j{{"check", rec.check}, {"dimension", rec.dimension}, {"family", rec.family}, {"draw", rec.draw}};
    j.update(to_json(rec.report));
    if (!rec.report.passed()) note_failure(rec.check + "/" + rec.report.name);
    records.push_back(std::move(j));
  }
  Json distinctions = Json::array();
  for (const auto& rec : report.distinctions) {
    if (!rec.passed) note_failure("distinguish/" + rec.family);
    distinctions.push_back({{"dimension", rec.dimension},
                            {"family", rec.family},
                            {"draw", rec.draw},
                            {"passed", rec.passed},
                            {"witness", to_json(rec.report)}});
  }
  Json rules = Json::array();
  for (int n : report.config.dimensions) {
    rules.push_back(rule_metadata(build_rule(n, report.config.quad_level.value_or(default_level(n)))));
  }
  return Json{{"command", "verify"},
              {"tool", tool_metadata()},
              {"config", config_json(report.config)},
              {"quadrature", rules},
              {"passed", report.passed()},
              {"failures", report.failures},
              {"failed_checks", failed},
              {"summary", summary},
              {"records", records},
              {"distinctions", distinctions}};
}

std::string suite_csv(const SuiteReport& report) {
  std::ostringstream os;
  os << "check,name,dimension,family,draw,lhs,rhs,slack,relative_slack,tolerance,holds,equality_detected,"
        "equality_expected,equality_unexpected,passed,inputs_digest\n";
  auto flag = [](bool b) { return b ? "true" : "false"; };
  for (const auto& rec : report.records) {
    const auto& r = rec.report;
    os << rec.check << ',' << r.name << ',' << rec.dimension << ',' << rec.family << ',' << rec.draw << ','
       << csv_number(r.lhs) << ',' << csv_number(r.rhs) << ',' << csv_number(r.slack) << ','
       << csv_number(r.relative_slack) << ',' << csv_number(r.tolerance) << ',' << flag(r.holds) << ','
       << flag(r.equality_detected) << ',' << flag(r.equality_expected) << ',' << flag(r.equality_unexpected) << ','
       << flag(r.passed()) << ',' << r.inputs_digest << '\n';
  }
  return os.str();
}

}  // namespace starbody
