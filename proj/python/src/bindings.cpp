#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hdual/algebra.hpp"
#include "hdual/checks.hpp"
#include "hdual/dynamics.hpp"
#include "hdual/expr.hpp"
#include "hdual/heisenberg.hpp"
#include "hdual/representation.hpp"
#include "hdual/simulate.hpp"

namespace py = pybind11;
using namespace hdual;

namespace {

CoeffState to_state(const std::array<double, CoeffState::kSize>& c) {
  CoeffState s;
  s.c = c;
  return s;
}

QuadHamiltonian to_hamiltonian(const std::array<double, CoeffState::kSize>& c) { return QuadHamiltonian{to_state(c)}; }

py::dict trajectory_dict(const Trajectory& tr) {
  std::vector<double> t;
  std::vector<std::array<double, CoeffState::kSize>> states;
  t.reserve(tr.size());
  states.reserve(tr.size());
  for (const auto& point : tr) {
    t.push_back(point.t);
    states.push_back(point.state.c);
  }
  py::dict d;
  d["t"] = t;
  d["coeffs"] = states;
  return d;
}

std::map<std::string, std::complex<double>> diffop_terms(const DiffOp& op, const Env& env) {
  std::map<std::string, std::complex<double>> out;
  for (const auto& [order, coeff] : op.terms()) {
    const DualComplex v = eval(coeff, env);
    const std::string key = "dq" + std::to_string(order.dq) + "dp" + std::to_string(order.dp);
    out[key + ".complex"] = v.complex_part();
    out[key + ".eps"] = v.eps_part();
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heisenberg group representations over complex and dual numbers.";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidStep>(m, "InvalidStep", PyExc_ValueError);
  py::register_exception<OrderOverflow>(m, "OrderOverflow", PyExc_ArithmeticError);
  py::register_exception<ClosureViolation>(m, "ClosureViolation", PyExc_RuntimeError);

  py::class_<DualComplex>(m, "DualComplex")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("re"), py::arg("im") = 0.0, py::arg("eps") = 0.0,
           py::arg("im_eps") = 0.0)
      .def_static("from_parts", &DualComplex::from_parts, py::arg("complex_part"), py::arg("eps_part"))
      .def_readwrite("re", &DualComplex::re)
      .def_readwrite("im", &DualComplex::im)
      .def_readwrite("eps", &DualComplex::eps)
      .def_readwrite("im_eps", &DualComplex::im_eps)
      .def_property_readonly("complex_part", &DualComplex::complex_part)
      .def_property_readonly("eps_part", &DualComplex::eps_part)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__repr__", [](const DualComplex& z) { return "DualComplex(" + to_string(z) + ")"; });
  py::implicitly_convertible<py::float_, DualComplex>();
  py::implicitly_convertible<py::int_, DualComplex>();
  m.attr("I") = DualComplex::unit_i();
  m.attr("EPS") = DualComplex::unit_eps();
  m.attr("I_EPS") = DualComplex::unit_i_eps();
  m.def("exp", static_cast<DualComplex (*)(const DualComplex&)>(&exp));
  m.def("approx_eq", &approx_eq, py::arg("a"), py::arg("b"), py::arg("tol"));

  py::class_<Expr>(m, "Expr")
      .def("__str__", &Expr::str)
      .def("__repr__", [](const Expr& f) { return "Expr(" + f.str() + ")"; })
      .def("__add__", [](const Expr& a, const Expr& b) { return a + b; })
      .def("__sub__", [](const Expr& a, const Expr& b) { return a - b; })
      .def("__mul__", [](const Expr& a, const Expr& b) { return a * b; })
      .def("__neg__", [](const Expr& a) { return -a; })
      .def("__call__", [](const Expr& f, const DualComplex& q, const DualComplex& p) { return eval(f, {q, p}); },
           py::arg("q"), py::arg("p"));
  m.def("parse_expr", &parse_expr, py::arg("text"));
  m.def("diff", [](const Expr& f, const std::string& v) {
    if (v != "q" && v != "p") throw py::value_error("variable must be 'q' or 'p'");
    return diff(f, v == "q" ? Var::q : Var::p);
  });
  m.def("substitute", &substitute, py::arg("f"), py::arg("q_new"), py::arg("p_new"));
  m.def("poisson", &poisson, py::arg("hamiltonian"), py::arg("k"));
  m.def("expr_approx_eq", [](const Expr& f, const Expr& g, std::size_t n, double tol) {
    return expr_approx_eq(f, g, sample_points(n), tol);
  }, py::arg("f"), py::arg("g"), py::arg("points") = 20, py::arg("tol") = 1e-12);

  py::class_<GroupElement>(m, "GroupElement")
      .def(py::init<double, double, double>(), py::arg("s") = 0.0, py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def_readwrite("s", &GroupElement::s)
      .def_readwrite("x", &GroupElement::x)
      .def_readwrite("y", &GroupElement::y)
      .def(py::self * py::self)
      .def(py::self == py::self)
      .def("inverse", [](const GroupElement& g) { return inverse(g); })
      .def("is_central", [](const GroupElement& g) { return is_central(g); })
      .def("__repr__", [](const GroupElement& g) {
        std::ostringstream os;
        os << "GroupElement" << g;
        return os.str();
      });
  m.def("symplectic", &symplectic);

  py::class_<RepParams>(m, "RepParams")
      .def(py::init<double>(), py::arg("hbar"))
      .def_property_readonly("hbar", &RepParams::hbar)
      .def_property_readonly("h", &RepParams::h);
  m.def("rep_quantum", [](const RepParams& par, const GroupElement& g, const Expr& f) { return rep_quantum(par, g, f); });
  m.def("rep_classical",
        [](const RepParams& par, const GroupElement& g, const Expr& f) { return rep_classical(par, g, f); });
  m.def("central_signs", [] {
    return std::make_pair(sign_value(kQuantumCentralSign), sign_value(kClassicalCentralSign));
  });

  py::class_<DiffOp>(m, "DiffOp")
      .def("__str__", &DiffOp::str)
      .def_property_readonly("order", &DiffOp::order)
      .def("apply", [](const DiffOp& op, const Expr& f) { return apply(op, f); })
      .def("terms_at", [](const DiffOp& op, double q, double p) { return diffop_terms(op, {q, p}); }, py::arg("q"),
           py::arg("p"));
  m.def("gen_quantum", [](const RepParams& par) {
    auto g = gen_quantum(par);
    return std::make_pair(g.x, g.y);
  });
  m.def("gen_classical", [](const RepParams& par) {
    auto g = gen_classical(par);
    return std::make_pair(g.x, g.y);
  });
  m.def("compose", &compose);
  m.def("commutator", &commutator);
  m.def("weyl_classical", &weyl_classical, py::arg("par"), py::arg("hamiltonian"));
  m.def("weyl_quantum_quadratic", [](const RepParams& par, const std::array<double, CoeffState::kSize>& c) {
    return weyl_quantum_quadratic(par, to_hamiltonian(c));
  });
  m.def("classical_commutator_check", &classical_commutator_check);

  m.def("evolve_classical", [](const std::array<double, CoeffState::kSize>& h,
                               const std::array<double, CoeffState::kSize>& k0, double t_end, double dt) {
    return trajectory_dict(evolve_classical(to_hamiltonian(h), to_state(k0), t_end, dt));
  }, py::arg("hamiltonian"), py::arg("k0"), py::arg("t_end"), py::arg("dt") = 1e-3);
  m.def("evolve_quantum", [](double hbar, const std::array<double, CoeffState::kSize>& h,
                             const std::array<double, CoeffState::kSize>& k0, double t_end, double dt,
                             const std::string& convention) {
    return trajectory_dict(evolve_quantum(RepParams(hbar), to_hamiltonian(h), to_state(k0), t_end, dt,
                                          parse_time_convention(convention)));
  }, py::arg("hbar"), py::arg("hamiltonian"), py::arg("k0"), py::arg("t_end"), py::arg("dt") = 1e-3,
        py::arg("convention") = "egorov");
  m.def("evolution_constant", [](double hbar, const std::string& convention) {
    return evolution_constant(RepParams(hbar), parse_time_convention(convention));
  });
  m.def("paper_time_factor", [](double hbar) { return paper_time_factor(RepParams(hbar)); });

  m.def("run_checks", [] {
    std::vector<py::dict> out;
    for (const SuiteResult& r : run_all_suites()) {
      py::dict d;
      d["name"] = r.name;
      d["max_residual"] = r.max_residual;
      d["tolerance"] = r.tolerance;
      d["passed"] = r.passed;
      out.push_back(d);
    }
    return out;
  });
  m.def("simulate", [](const std::map<std::string, std::string>& config) {
    ConfigPairs pairs(config.begin(), config.end());
    const SimConfig cfg = build_sim_config(pairs);
    std::ostringstream csv;
    write_csv(csv, run_simulation(cfg));
    return csv.str();
  }, py::arg("config"), "Runs a simulation from config keys and returns the CSV text.");
}
