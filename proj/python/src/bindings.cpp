#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nhfermion/core_model.hpp"
#include "nhfermion/errors.hpp"
#include "nhfermion/figure.hpp"
#include "nhfermion/metric.hpp"
#include "nhfermion/operator_algebra.hpp"
#include "nhfermion/thermo.hpp"
#include "nhfermion/verification.hpp"

namespace py = pybind11;
using namespace nhf;

namespace {

Method parse_method(const std::string& name) {
  const MethodSelection s = parse_method_selection(name);
  if (s == MethodSelection::Both) throw DomainError("thermo: pick one method, not 'both'");
  return s == MethodSelection::Exact ? Method::Exact : Method::EulerMaclaurin;
}

Generator parse_generator(const std::string& name) {
  if (name == "S0") return Generator::S0;
  if (name == "S+" || name == "Splus") return Generator::Splus;
  if (name == "S-" || name == "Sminus") return Generator::Sminus;
  throw DomainError("unknown generator '" + name + "' (expected S0, S+ or S-)");
}

py::dict thermo_dict(const ThermoPoint& t) {
  py::dict d;
  d["method"] = std::string(to_string(t.method));
  d["beta"] = t.beta;
  d["mu"] = t.mu;
  d["zeta"] = t.zeta;
  d["zeta_prime"] = t.zeta_prime;
  d["log_z"] = t.log_z;
  d["energy"] = t.energy;
  d["number"] = t.number;
  d["entropy"] = t.entropy;
  d["modes"] = t.modes;
  return d;
}

py::dict criterion_dict(const CriterionResult& r) {
  py::dict d;
  d["id"] = r.id;
  d["title"] = r.title;
  d["passed"] = r.passed;
  d["measured"] = r.measured;
  d["threshold"] = r.threshold;
  d["detail"] = r.detail;
  d["line"] = format_result(r);
  return d;
}

FigureData figure_from(const std::string& config_json) {
  return generate_figure(config_json.empty() ? default_figure_config()
                                             : parse_figure_config(config_json));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of the pseudo-fermion model";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<TruncationError>(m, "TruncationError", numerical.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  (void)domain;

  py::class_<ModelParams>(m, "ModelParams")
      .def_readonly("gamma", &ModelParams::gamma)
      .def_readonly("lambda_scale", &ModelParams::lambda_scale)
      .def_readonly("alpha", &ModelParams::alpha)
      .def_readonly("eta", &ModelParams::eta)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream s;
        s.precision(17);
        s << "ModelParams(gamma=" << p.gamma << ", lambda_scale=" << p.lambda_scale
          << ", alpha=" << p.alpha << ", eta=" << p.eta << ")";
        return s.str();
      });

  m.def("make_params", &make_params, py::arg("gamma"));
  m.def("mode_energy", &mode_energy, py::arg("params"), py::arg("k"));
  m.def("filled_energy", &filled_energy, py::arg("params"), py::arg("count"));

  m.def("hamiltonian", [](const ModelParams& p, int dim) { return build_hamiltonian(p, dim).entries; },
        py::arg("params"), py::arg("dim"));
  m.def("generators",
        [](int dim) {
          const Generators g = build_generators(dim);
          return py::make_tuple(g.s0.entries, g.splus.entries, g.sminus.entries);
        },
        py::arg("dim"), "(S0, S+, S-) truncated to dim x dim");
  m.def("t_operators",
        [](const ModelParams& p, int dim) {
          const LadderOperators t = build_t_operators(p, dim);
          return py::make_tuple(t.t0.entries, t.tplus.entries, t.tminus.entries);
        },
        py::arg("params"), py::arg("dim"), "(T0, T+, T-) truncated to dim x dim");
  m.def("ground_vectors",
        [](const ModelParams& p, int dim) {
          const GroundVectors g = ground_vectors(p, dim);
          return py::make_tuple(g.right, g.left);
        },
        py::arg("params"), py::arg("dim"));
  m.def("biorthogonal",
        [](const ModelParams& p, int dim, int count, double tol) {
          const BiorthogonalSystem s = build_biorthogonal(p, dim, count, tol);
          py::dict d;
          d["eigenvalues"] = s.eigenvalues;
          d["right"] = s.right;
          d["left"] = s.left;
          d["residual"] = s.residual;
          d["gram_defect"] = s.gram_defect;
          return d;
        },
        py::arg("params"), py::arg("dim"), py::arg("count"), py::arg("tol") = 1e-8);
  m.def("spectrum",
        [](const ModelParams& p, int dim, int count, bool refine) {
          return dense_spectrum(p, dim, count,
                                refine ? SpectrumMethod::Refined : SpectrumMethod::Dense);
        },
        py::arg("params"), py::arg("dim"), py::arg("count"), py::arg("refine") = true);

  m.def("metric",
        [](const ModelParams& p, int dim) {
          const MetricOperator mo = build_metric(p, dim);
          return py::make_tuple(mo.d2, mo.d);
        },
        py::arg("params"), py::arg("dim"), "(D^2, D) truncated to dim x dim");
  m.def("conjugate_generator",
        [](const ModelParams& p, int dim, const std::string& which) {
          return conjugate_generator(p, dim, parse_generator(which)).entries;
        },
        py::arg("params"), py::arg("dim"), py::arg("which"));
  m.def("metric_interior", &metric_interior, py::arg("dim"));

  m.attr("DEFAULT_TAIL_TOL") = kDefaultTailTol;
  m.def("dilog", &dilog, py::arg("x"));
  m.def("exact_log_z", &exact_log_z, py::arg("params"), py::arg("beta"), py::arg("zeta"),
        py::arg("tail_tol") = kDefaultTailTol);
  m.def("em_log_z", &em_log_z, py::arg("params"), py::arg("beta"), py::arg("zeta"));
  m.def("thermo",
        [](const ModelParams& p, double beta, double mu, const std::string& method,
           double tail_tol) { return thermo_dict(thermo_point(p, beta, mu, parse_method(method), tail_tol)); },
        py::arg("params"), py::arg("beta"), py::arg("mu"), py::arg("method") = "exact",
        py::arg("tail_tol") = kDefaultTailTol);

  m.def("default_figure_config", [] { return figure_config_to_json(default_figure_config()); },
        "default figure config as JSON text");
  m.def("figure_csv",
        [](const std::string& config_json) {
          std::ostringstream out;
          write_csv(out, figure_from(config_json));
          return out.str();
        },
        py::arg("config_json") = "", py::call_guard<py::gil_scoped_release>());
  m.def("figure_json",
        [](const std::string& config_json) {
          std::ostringstream out;
          write_json(out, figure_from(config_json));
          return out.str();
        },
        py::arg("config_json") = "", py::call_guard<py::gil_scoped_release>());

  m.def("check_spectrum",
        [](const std::vector<double>& gammas, int truncation, int count, double tol) {
          return criterion_dict(check_spectrum(gammas, truncation, count, tol));
        },
        py::arg("gammas"), py::arg("truncation"), py::arg("count"), py::arg("tol") = 1e-8);
  m.def("check_metric",
        [](double gamma, int truncation, double tol) {
          return criterion_dict(check_metric(gamma, truncation, tol));
        },
        py::arg("gamma"), py::arg("truncation"), py::arg("tol") = 1e-8);
  m.def("check_fock",
        [](double gamma, int modes, double tol) { return criterion_dict(check_fock(gamma, modes, tol)); },
        py::arg("gamma"), py::arg("modes"), py::arg("tol") = 1e-10);
  m.def("run_acceptance", [] {
    std::vector<CriterionResult> results;
    {
      py::gil_scoped_release release;
      results = run_acceptance();
    }
    py::list out;
    for (const CriterionResult& r : results) out.append(criterion_dict(r));
    return out;
  });
}
