#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entconc/channels.hpp"
#include "entconc/error.hpp"
#include "entconc/model.hpp"
#include "entconc/perturbation.hpp"
#include "entconc/sweep.hpp"

namespace py = pybind11;
using namespace entconc;

namespace {

TruncationPolicy policy_from(double eps_trunc, double eps_eig) {
  TruncationPolicy p;
  p.eps_trunc = eps_trunc;
  p.eps_eig = eps_eig;
  return p;
}

SweepConfig make_config(double c1, double c2, std::optional<std::int64_t> q, std::vector<double> mu,
                        const std::string& methods, double eps_trunc, double eps_eig, const std::string& omega) {
  SweepConfig c;
  c.c1 = c1;
  c.c2 = c2;
  c.q = q;
  c.mus = std::move(mu);
  c.methods = parse_methods(methods);
  c.policy = policy_from(eps_trunc, eps_eig);
  c.omega = parse_omega_mode(omega);
  return c;
}

py::tuple table_tuple(const Table& t) { return py::make_tuple(t.columns, t.rows); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entanglement concentration by phonon counting (C++ core)";

  static py::exception<NumericalFailure> numerical_failure(m, "NumericalFailure", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidInput& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const NumericalFailure& e) {
      py::set_error(numerical_failure, e.what());
    }
  });

  const double eps_default = TruncationPolicy{}.eps_trunc;
  const double eig_default = TruncationPolicy{}.eps_eig;

  m.def("occupations", [](double c1, double c2) {
    const ModeOccupations o = occupations(Cooperativities(c1, c2));
    py::dict d;
    d["n1"] = o.n1;
    d["n2"] = o.n2;
    d["nm"] = o.nm;
    d["zeta"] = o.zeta;
    return d;
  }, py::arg("c1"), py::arg("c2"));

  m.def("phonon_prob", [](double c1, double c2, std::int64_t q) {
    return phonon_prob(occupations(Cooperativities(c1, c2)), q);
  }, py::arg("c1"), py::arg("c2"), py::arg("q"));

  m.def("pair_distribution", [](double zeta, std::int64_t q, std::int64_t p) { return PairDistribution(zeta, q)(p); },
        py::arg("zeta"), py::arg("q"), py::arg("p"));

  m.def("pre_measurement_entanglement",
        [](double c1, double c2) { return pre_measurement_entanglement(Cooperativities(c1, c2)); },
        py::arg("c1"), py::arg("c2"));

  m.def("perfect_entanglement",
        [](double c1, double c2, std::int64_t q) { return perfect_entanglement(Cooperativities(c1, c2), q); },
        py::arg("c1"), py::arg("c2"), py::arg("q"));

  m.def("perfect_entanglement_gaussian",
        [](double c1, double c2, std::int64_t q) {
          return perfect_entanglement_gaussian(Cooperativities(c1, c2), q);
        },
        py::arg("c1"), py::arg("c2"), py::arg("q"));

  m.def("imperfect_outcome_prob", [](double c1, double c2, double mu, std::int64_t q) {
    return imperfect_outcome_prob(occupations(Cooperativities(c1, c2)), DetectorEfficiency(mu), q);
  }, py::arg("c1"), py::arg("c2"), py::arg("mu"), py::arg("q"));

  m.def("imperfect_entanglement_numeric",
        [](double c1, double c2, double mu, std::int64_t q, double eps_trunc, double eps_eig) {
          py::gil_scoped_release release;
          return imperfect_entanglement_numeric(Cooperativities(c1, c2), DetectorEfficiency(mu), q,
                                                policy_from(eps_trunc, eps_eig))
              .log_negativity;
        },
        py::arg("c1"), py::arg("c2"), py::arg("mu"), py::arg("q"), py::arg("eps_trunc") = eps_default,
        py::arg("eps_eig") = eig_default);

  m.def("traced_state_entanglement",
        [](double c1, double c2, double eps_trunc, double eps_eig) {
          py::gil_scoped_release release;
          const TruncationPolicy p = policy_from(eps_trunc, eps_eig);
          return log_negativity(traced_two_mode_state(Cooperativities(c1, c2), p), p).log_negativity;
        },
        py::arg("c1"), py::arg("c2"), py::arg("eps_trunc") = eps_default, py::arg("eps_eig") = eig_default);

  m.def("off_entanglement", [](double c1, double c2) { return off_entanglement(Cooperativities(c1, c2)); },
        py::arg("c1"), py::arg("c2"));

  m.def("on_entanglement",
        [](double c1, double c2, const std::string& method, double eps_trunc, double eps_eig) {
          OnMethod om = OnMethod::numeric;
          if (method == "average") {
            om = OnMethod::average;
          } else if (method == "average_gaussian") {
            om = OnMethod::average_gaussian;
          } else if (method != "numeric") {
            throw InvalidInput("method must be numeric, average or average_gaussian");
          }
          py::gil_scoped_release release;
          return on_entanglement(Cooperativities(c1, c2), om, policy_from(eps_trunc, eps_eig)).value;
        },
        py::arg("c1"), py::arg("c2"), py::arg("method") = "numeric", py::arg("eps_trunc") = eps_default,
        py::arg("eps_eig") = eig_default);

  m.def("omega_factor", [](double c1, double c2, std::int64_t q) {
    const OmegaFactor o = omega_factor(Cooperativities(c1, c2), q);
    return py::make_tuple(o.direct, o.gaussian);
  }, py::arg("c1"), py::arg("c2"), py::arg("q"));

  m.def("first_order_entanglement", [](double c1, double c2, double mu, std::int64_t q) {
    return first_order_entanglement(Cooperativities(c1, c2), DetectorEfficiency(mu), q).value;
  }, py::arg("c1"), py::arg("c2"), py::arg("mu"), py::arg("q"));

  m.def("second_order_entanglement",
        [](double c1, double c2, double mu, std::int64_t q, const std::string& omega) {
          return second_order_entanglement(Cooperativities(c1, c2), DetectorEfficiency(mu), q,
                                           parse_omega_mode(omega))
              .value;
        },
        py::arg("c1"), py::arg("c2"), py::arg("mu"), py::arg("q"), py::arg("omega") = "direct");

  m.def("run_point",
        [](double c1, double c2, std::optional<std::int64_t> q, std::vector<double> mu, const std::string& methods,
           double eps_trunc, double eps_eig, const std::string& omega) {
          const SweepConfig c = make_config(c1, c2, q, std::move(mu), methods, eps_trunc, eps_eig, omega);
          py::gil_scoped_release release;
          return run_point(c).dump();
        },
        py::arg("c1"), py::arg("c2"), py::arg("q") = py::none(), py::arg("mu") = std::vector<double>{},
        py::arg("methods") = "exact", py::arg("eps_trunc") = eps_default, py::arg("eps_eig") = eig_default,
        py::arg("omega") = "direct");

  m.def("run_sweep",
        [](double c1, double c2, std::optional<std::int64_t> q, std::vector<double> mu, const std::string& methods,
           const std::string& axis, double start, double stop, double step, double eps_trunc, double eps_eig,
           const std::string& omega) {
          SweepConfig c = make_config(c1, c2, q, std::move(mu), methods, eps_trunc, eps_eig, omega);
          c.axis = AxisRange{parse_axis(axis), start, stop, step};
          Table t;
          {
            py::gil_scoped_release release;
            t = run_sweep(c);
          }
          return table_tuple(t);
        },
        py::arg("c1"), py::arg("c2"), py::arg("q") = py::none(), py::arg("mu") = std::vector<double>{},
        py::arg("methods") = "exact", py::arg("axis") = "q", py::arg("start") = 0.0, py::arg("stop") = 0.0,
        py::arg("step") = 1.0, py::arg("eps_trunc") = eps_default, py::arg("eps_eig") = eig_default,
        py::arg("omega") = "direct");

  m.def("run_preset",
        [](const std::string& name, double eps_trunc) {
          SweepConfig c = find_preset(name).config;
          c.policy.eps_trunc = eps_trunc;
          Table t;
          {
            py::gil_scoped_release release;
            t = run_sweep(c);
          }
          return table_tuple(t);
        },
        py::arg("name"), py::arg("eps_trunc") = eps_default);

  m.def("to_csv", [](const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
    return to_csv(Table{columns, rows});
  }, py::arg("columns"), py::arg("rows"));

  m.def("manifest", []() { return emit_manifest().dump(); });
  m.attr("SCHEMA_VERSION") = std::string(kSchemaVersion);
}
