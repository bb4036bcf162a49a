#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "berglab/carleson.hpp"
#include "berglab/config.hpp"
#include "berglab/rademacher.hpp"
#include "berglab/report.hpp"
#include "berglab/suite.hpp"
#include "berglab/toeplitz.hpp"

namespace py = pybind11;
using namespace berglab;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(dump_json(j)); }

RegionKind region_kind(const std::string& name) {
  if (name == "square") return RegionKind::Square;
  if (name == "disk") return RegionKind::Disk;
  throw ParameterError("region must be 'square' or 'disk'");
}

OptimizerOptions options(std::size_t budget, std::uint64_t seed) {
  OptimizerOptions o;
  o.budget = budget;
  o.seed = seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "berglab core bindings";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", error.ptr());
  py::register_exception<AccuracyError>(m, "AccuracyError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  py::class_<RadialWeight>(m, "Weight")
      .def(py::init<>())
      .def_static("standard", &RadialWeight::standard, py::arg("alpha"))
      .def_static("power", &RadialWeight::power, py::arg("c"), py::arg("a"), py::arg("b") = 0.0)
      .def_static("table", &RadialWeight::table, py::arg("r"), py::arg("w"))
      .def_static("profile", &RadialWeight::profile, py::arg("f"), py::arg("label") = "profile")
      .def("__call__", &RadialWeight::eval)
      .def("tail", &RadialWeight::tail)
      .def("moment", &RadialWeight::moment)
      .def("integrable", &RadialWeight::integrable)
      .def_property_readonly("label", &RadialWeight::label)
      .def("__repr__", [](const RadialWeight& w) { return "Weight(" + w.label() + ")"; });

  m.def("sigma_weight", &sigma_weight, py::arg("omega"), py::arg("eta"), py::arg("p"));
  m.def("fusion_weight", &fusion_weight_W, py::arg("eta"), py::arg("upsilon"), py::arg("omega"), py::arg("p"),
        py::arg("q"));
  m.def(
      "bergman_constant",
      [](const RadialWeight& omega, const RadialWeight& eta, double p) {
        const auto A = bergman_const_A(omega, eta, p);
        return py::dict(py::arg("value") = A.value, py::arg("finite") = A.finite, py::arg("argmax") = A.argmax);
      },
      py::arg("omega"), py::arg("eta"), py::arg("p"));
  m.def(
      "region_weight_square", [](const RadialWeight& w, Complex z) { return region_weight(w, carleson_square(DiskPoint(z))); },
      py::arg("w"), py::arg("z"));
  m.def(
      "region_weight_disk",
      [](const RadialWeight& w, Complex z, double r) { return region_weight(w, Region{disk_euclidean(DiskPoint(z), r)}); },
      py::arg("w"), py::arg("z"), py::arg("r") = 1.0);

  m.def("mobius", py::overload_cast<Complex, Complex>(&mobius), py::arg("a"), py::arg("z"));
  m.def("bergman_distance", &bergman_distance, py::arg("a"), py::arg("z"));

  py::class_<Lattice>(m, "Lattice")
      .def_readonly("points", &Lattice::points)
      .def_readonly("separation", &Lattice::separation)
      .def_readonly("covering", &Lattice::covering)
      .def("__len__", &Lattice::size)
      .def("truncated", &Lattice::truncated);
  m.def("generate_lattice", &generate_lattice, py::arg("separation") = 0.5, py::arg("covering") = 1.0,
        py::arg("cutoff") = 1e-3);
  m.def(
      "verify_lattice",
      [](const Lattice& L, std::size_t probes) {
        const auto r = verify_lattice(L, probes);
        return py::dict(py::arg("min_pairwise") = r.min_pairwise, py::arg("max_probe_distance") = r.max_probe_distance,
                        py::arg("probes") = r.probes, py::arg("separated") = r.separated,
                        py::arg("covering") = r.covering);
      },
      py::arg("lattice"), py::arg("probes") = 10000);

  py::class_<Measure>(m, "Measure")
      .def(py::init<>())
      .def_static("atomic", &Measure::atomic, py::arg("points"), py::arg("masses"))
      .def_static("radial", &Measure::radial, py::arg("density"))
      .def_static("power", &Measure::power, py::arg("a"))
      .def("total_mass", &Measure::total_mass)
      .def("restrict", &Measure::restrict, py::arg("lo"), py::arg("hi"))
      .def("scale", &Measure::scale, py::arg("c"))
      .def("hash", &Measure::hash)
      .def("__repr__", [](const Measure& mu) { return "Measure(" + mu.describe() + ")"; });

  py::class_<AnalyticFunction>(m, "Function")
      .def_static("monomials", &AnalyticFunction::monomials, py::arg("coeffs"))
      .def("__call__", &AnalyticFunction::operator())
      .def("__add__", [](const AnalyticFunction& a, const AnalyticFunction& b) { return a + b; })
      .def("scaled", &AnalyticFunction::scaled)
      .def_property_readonly("coeffs", &AnalyticFunction::coeffs);

  m.def("kernel_coefficients", [](const RadialWeight& w, std::size_t order) { return kernel_coeffs(w, order).coeffs(); },
        py::arg("w"), py::arg("order") = 256);
  m.def(
      "kernel_eval",
      [](const RadialWeight& w, Complex z, Complex xi, double tol) {
        return kernel_for_radius(w, std::abs(z) * std::abs(xi), tol).eval(z, xi, tol);
      },
      py::arg("w"), py::arg("z"), py::arg("xi"), py::arg("tol") = 1e-10);
  m.def(
      "kernel_atom", [](Complex a, double gamma) { return kernel_atom(a, gamma).function; }, py::arg("a"),
      py::arg("gamma") = 4.0);
  m.def(
      "bergman_norm", [](const AnalyticFunction& f, const RadialWeight& w, double p) { return bergman_norm(f, w, p).value; },
      py::arg("f"), py::arg("w"), py::arg("p"));
  m.def(
      "inner_product",
      [](const AnalyticFunction& f, const AnalyticFunction& g, const RadialWeight& w) {
        return inner_product_A2(f, g, w).value;
      },
      py::arg("f"), py::arg("g"), py::arg("w"));

  m.def(
      "khinchin_check",
      [](const std::vector<Complex>& c, double p) {
        const auto r = khinchin_check(c, p);
        return py::dict(py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs, py::arg("ratio") = r.ratio);
      },
      py::arg("c"), py::arg("p"));

  m.def(
      "m0_sup",
      [](const Measure& mu, const RadialWeight& omega, const RadialWeight& eta, const RadialWeight& upsilon, double p,
         double q, double r) { return to_py(report_json(M0_sup(mu, omega, eta, upsilon, p, q, r))); },
      py::arg("mu"), py::arg("omega"), py::arg("eta"), py::arg("upsilon"), py::arg("p"), py::arg("q"),
      py::arg("r") = 1.0);
  m.def(
      "vanishing_profile",
      [](const Measure& mu, const RadialWeight& omega, const RadialWeight& eta, const RadialWeight& upsilon, double p,
         double q, double r) { return to_py(report_json(vanishing_profile(mu, omega, eta, upsilon, p, q, r))); },
      py::arg("mu"), py::arg("omega"), py::arg("eta"), py::arg("upsilon"), py::arg("p"), py::arg("q"),
      py::arg("r") = 1.0);
  m.def(
      "carleson_sup",
      [](const Measure& mu, const RadialWeight& w, double p, double q, const std::string& region, double r) {
        return to_py(report_json(carleson_sup(mu, w, p, q, region_kind(region), r)));
      },
      py::arg("mu"), py::arg("w"), py::arg("p"), py::arg("q"), py::arg("region") = "square", py::arg("r") = 1.0);
  m.def(
      "lambda_norm",
      [](const Measure& mu, const RadialWeight& omega, const RadialWeight& eta, const RadialWeight& upsilon, double p,
         double q, const Lattice& L, double r) {
        return to_py(report_json(lambda_seq_norm(mu, omega, eta, upsilon, p, q, L, r)));
      },
      py::arg("mu"), py::arg("omega"), py::arg("eta"), py::arg("upsilon"), py::arg("p"), py::arg("q"),
      py::arg("lattice"), py::arg("r") = 1.0);
  m.def(
      "mu_hat_norm",
      [](const Measure& mu, const RadialWeight& omega, const RadialWeight& eta, const RadialWeight& upsilon, double p,
         double q, double r) { return to_py(report_json(mu_hat_norm(mu, omega, eta, upsilon, p, q, r))); },
      py::arg("mu"), py::arg("omega"), py::arg("eta"), py::arg("upsilon"), py::arg("p"), py::arg("q"),
      py::arg("r") = 1.0);
  m.def(
      "phi_norm",
      [](const Measure& mu, const RadialWeight& omega, double p, double q, double r) {
        return to_py(report_json(phi_norm(mu, omega, p, q, r)));
      },
      py::arg("mu"), py::arg("omega"), py::arg("p"), py::arg("q"), py::arg("r") = 1.0);
  m.def(
      "psi_norm",
      [](const Measure& mu, const RadialWeight& omega, double gamma, double p, double q) {
        return to_py(report_json(psi_norm(mu, omega, gamma, p, q)));
      },
      py::arg("mu"), py::arg("omega"), py::arg("gamma"), py::arg("p"), py::arg("q"));
  m.def(
      "embedding_norm",
      [](const RadialWeight& omega, double p, const Measure& mu, double q, std::size_t budget, std::uint64_t seed) {
        return to_py(estimate_json(embedding_norm(omega, p, mu, q, options(budget, seed))));
      },
      py::arg("omega"), py::arg("p"), py::arg("mu"), py::arg("q"), py::arg("budget") = 1500,
      py::arg("seed") = 20240611);

  m.def(
      "toeplitz_apply",
      [](const Measure& mu, const RadialWeight& omega, const AnalyticFunction& f, Complex z) {
        return toeplitz_apply(mu, omega, f, z);
      },
      py::arg("mu"), py::arg("omega"), py::arg("f"), py::arg("z"));
  m.def(
      "toeplitz_matrix",
      [](const Measure& mu, const RadialWeight& omega, std::size_t size) {
        return Eigen::MatrixXcd(toeplitz_matrix(mu, omega, size).entries);
      },
      py::arg("mu"), py::arg("omega"), py::arg("size"));
  m.def(
      "toeplitz_norm_exact",
      [](const Measure& mu, const RadialWeight& omega) { return to_py(spectral_json(toeplitz_norm_exact_22(mu, omega))); },
      py::arg("mu"), py::arg("omega"));
  m.def(
      "toeplitz_norm_estimate",
      [](const Measure& mu, const RadialWeight& omega, const RadialWeight& eta, const RadialWeight& upsilon, double p,
         double q, std::size_t budget, std::uint64_t seed) {
        return to_py(estimate_json(toeplitz_norm_estimate(mu, omega, eta, upsilon, p, q, options(budget, seed))));
      },
      py::arg("mu"), py::arg("omega"), py::arg("eta"), py::arg("upsilon"), py::arg("p"), py::arg("q"),
      py::arg("budget") = 1500, py::arg("seed") = 20240611);

  m.def(
      "normalize_scenario", [](const std::string& text) { return to_py(scenario_json(parse_scenario_text(text))); },
      py::arg("text"));
  m.def(
      "run_experiment",
      [](const std::string& name, const std::vector<std::string>& ids, std::size_t budget) {
        const Experiment e = experiment_from_name(name);
        std::vector<SuiteRow> rows = experiment_rows(e, default_suite());
        if (!ids.empty()) {
          std::erase_if(rows, [&](const SuiteRow& r) { return std::find(ids.begin(), ids.end(), r.id) == ids.end(); });
          if (rows.empty()) throw ConfigError("run_experiment: no suite row matches the requested ids");
        }
        SuiteOptions opt;
        opt.opt.budget = budget;
        EquivalenceReport rep;
        {
          py::gil_scoped_release release;
          rep = run_experiment(e, rows, opt);
        }
        return to_py(equivalence_json(rep));
      },
      py::arg("experiment"), py::arg("rows") = std::vector<std::string>{}, py::arg("budget") = 1500);
}
