#include <algorithm>
#include <span>

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "starbody/dual_volumes.hpp"
#include "starbody/errors.hpp"
#include "starbody/inequalities.hpp"
#include "starbody/orlicz_addition.hpp"
#include "starbody/report.hpp"
#include "starbody/scene.hpp"

namespace py = pybind11;
using namespace starbody;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ArgumentError("matrix must be square");
  const auto n = a.shape(0);
  if (n < 2 || n > kMaxDimension) throw ArgumentError("matrix dimension out of range");
  Matrix m(n, n);
  auto view = a.unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    for (py::ssize_t j = 0; j < n; ++j) m(i, j) = view(i, j);
  }
  return m;
}

py::array_t<double> to_array(std::span<const double> values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

// Reports cross the boundary as plain Python objects through JSON.
py::object to_python(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json from_python(const py::object& obj) {
  return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

SphereRule rule_or_default(int n, std::optional<int> level) { return build_rule(n, level.value_or(default_level(n))); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orlicz dual mixed volumes of star bodies on spherical quadrature rules";
  m.attr("__version__") = STARBODY_VERSION;

  auto base_error = py::register_exception<Error>(m, "StarbodyError", PyExc_ValueError);
  (void)base_error;

  py::class_<SphereRule>(m, "SphereRule")
      .def_property_readonly("dimension", &SphereRule::dimension)
      .def_property_readonly("level", &SphereRule::level)
      .def_property_readonly("exact_degree", &SphereRule::exact_degree)
      .def_property_readonly("weight_sum", &SphereRule::weight_sum)
      .def("__len__", &SphereRule::size)
      .def("nodes",
           [](const SphereRule& rule) {
             py::array_t<double> out({static_cast<py::ssize_t>(rule.size()),
                                      static_cast<py::ssize_t>(rule.dimension())});
             auto view = out.mutable_unchecked<2>();
             for (std::size_t i = 0; i < rule.size(); ++i) {
               const auto u = rule.node(i);
               for (int d = 0; d < rule.dimension(); ++d) view(static_cast<py::ssize_t>(i), d) = u[d];
             }
             return out;
           })
      .def("weights", [](const SphereRule& rule) { return to_array(rule.weights()); });
  m.def("build_rule", &rule_or_default, py::arg("n"), py::arg("level") = py::none(),
        "Product Gauss rule on the unit sphere; level defaults per dimension.");
  m.def("default_level", &default_level);
  m.def("unit_ball_volume", &unit_ball_volume);

  py::class_<OrliczFunction>(m, "OrliczFunction")
      .def_static("power_neg", &OrliczFunction::power_neg, py::arg("p"))
      .def_static("exp_reciprocal", &OrliczFunction::exp_reciprocal)
      .def_static("inv_plus_inv_square", &inv_plus_inv_square)
      .def_static("from_spec", [](const std::string& spec) { return parse_phi(spec); })
      .def_static(
          "from_callable",
          [](std::function<double(double)> f, bool strictly_convex) {
            OrliczFunction::UserOptions options;
            options.strictly_convex = strictly_convex;
            return OrliczFunction::user_defined(std::move(f), options);
          },
          py::arg("phi"), py::arg("strictly_convex") = false)
      .def("__call__", &OrliczFunction::evaluate)
      .def("inverse", &OrliczFunction::inverse)
      .def("right_derivative_at_one", &OrliczFunction::right_derivative_at_one)
      .def_property_readonly("name", &OrliczFunction::name)
      .def_property_readonly("at_one", &OrliczFunction::at_one)
      .def_property_readonly("strictly_convex", &OrliczFunction::strictly_convex)
      .def("__repr__", [](const OrliczFunction& f) { return "OrliczFunction(" + f.name() + ")"; });

  py::class_<StarBody>(m, "StarBody")
      .def_static("ball", &StarBody::ball, py::arg("n"), py::arg("r") = 1.0)
      .def_static("ellipsoid_axes", [](const std::vector<double>& axes) { return StarBody::ellipsoid_axes(axes); })
      .def_static("ellipsoid", [](const py::array_t<double>& a) { return StarBody::ellipsoid(LinearMap(to_matrix(a))); })
      .def_static("perturbed_ball", &StarBody::perturbed_ball, py::arg("n"), py::arg("r0"), py::arg("coeffs"))
      .def_static("linear_image",
                  [](const py::array_t<double>& a, const StarBody& inner) {
                    return StarBody::linear_image(LinearMap(to_matrix(a)), inner);
                  })
      .def("scaled", &StarBody::scaled)
      .def("rho", [](const StarBody& k, const std::vector<double>& x) { return k.rho(std::span<const double>(x)); })
      .def("sample", [](const StarBody& k, const SphereRule& rule) { return to_array(k.sample(rule)); })
      .def_property_readonly("dimension", &StarBody::dimension)
      .def("__repr__", &StarBody::describe);

  m.def("volume", &volume);
  m.def("dual_mixed_volume",
        [](const std::vector<StarBody>& bodies, const SphereRule& rule) { return dual_mixed_volume(bodies, rule); });
  m.def("first_dual_mixed_volume", &first_dual_mixed_volume);
  m.def("dual_quermass", &dual_quermass);
  m.def("dual_mixed_quermass", &dual_mixed_quermass);
  m.def("orlicz_multiple_dmv", [](const OrliczFunction& f, const StarBody& l1, const std::vector<StarBody>& ks,
                                  const SphereRule& rule) { return orlicz_multiple_dmv(f, l1, ks, rule); });
  m.def("orlicz_dual_mixed_volume", [](const OrliczFunction& f, const StarBody& k, const StarBody& l,
                                       const SphereRule& rule) { return orlicz_dual_mixed_volume(f, k, l, rule); });
  m.def("orlicz_dual_quermass", [](const OrliczFunction& f, const StarBody& k, const StarBody& l, int i,
                                   const SphereRule& rule) { return orlicz_dual_quermass(f, k, l, i, rule); });
  m.def("lp_dual_quermass", [](double p, const StarBody& k, const StarBody& l, int i, const SphereRule& rule) {
    return lp_dual_quermass(p, k, l, i, rule);
  });
  m.def("lp_multiple_dmv", [](double p, const StarBody& l1, const std::vector<StarBody>& ks,
                              const SphereRule& rule) { return lp_multiple_dmv(p, l1, ks, rule); });

  m.def(
      "orlicz_combine",
      [](const OrliczFunction& f, const StarBody& k, const StarBody& l, double eps, const SphereRule& rule) {
        return orlicz_combine_pair(f, k, l, eps, rule);
      },
      py::arg("phi"), py::arg("k"), py::arg("l"), py::arg("eps"), py::arg("rule"),
      "K +phi eps.L tabulated on the rule.");
  m.def("radial_linear_combine", &radial_linear_combine);
  m.def("radial_hausdorff", &radial_hausdorff);

  m.def(
      "first_variation",
      [](const OrliczFunction& f, const StarBody& l1, const std::vector<StarBody>& ks, const SphereRule& rule,
         std::optional<std::vector<double>> eps) {
        return to_python(to_json(first_variation_check(f, l1, ks, rule, eps.value_or(halving_schedule(1e-2, 7)))));
      },
      py::arg("phi"), py::arg("l1"), py::arg("ks"), py::arg("rule"), py::arg("eps") = py::none());

  m.def(
      "run_suite",
      [](const py::object& config) {
        const SuiteConfig parsed = config.is_none() ? default_suite_config() : parse_suite_config(from_python(config));
        SuiteReport report;
        {
          py::gil_scoped_release release;
          report = run_suite(parsed);
        }
        return to_python(suite_json(report));
      },
      py::arg("config") = py::none(), "Runs the inequality suite; config keys as in the verify command.");

  m.def("parse_scene", [](const std::string& text) {
    const auto scene = parse_scene(text);
    py::dict bodies;
    for (const auto& [name, body] : scene.bodies) bodies[py::str(name)] = body;
    py::dict phis;
    for (const auto& [name, f] : scene.phis) phis[py::str(name)] = f;
    return py::make_tuple(scene.dimension, bodies, phis);
  });
}
