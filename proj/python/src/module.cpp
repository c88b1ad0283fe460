#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <noether/dynamics.hpp>
#include <noether/error.hpp>
#include <noether/hamiltonian.hpp>
#include <noether/lagrangian.hpp>
#include <noether/legendre.hpp>
#include <noether/parser.hpp>
#include <noether/scenario.hpp>
#include <noether/zero_test.hpp>

#include "cli.hpp"

namespace py = pybind11;
using namespace noether;

namespace
{

// Symbol names are resolved against the largest dimension; anything that is not
// part of the alphabet is a parameter.
Symbol symbol_named(const std::string &name)
{
    ParseContext ctx{9, {}};
    if (!is_reserved_identifier(name)) {
        ctx.params.push_back(name);
    }
    return parse_symbol(name, ctx);
}

Assignment to_assignment(const std::map<std::string, double> &values)
{
    Assignment a;
    for (const auto &[name, v] : values) {
        a[symbol_named(name)] = v;
    }
    return a;
}

std::vector<std::string> symbol_names(const std::vector<Symbol> &syms)
{
    std::vector<std::string> out;
    for (const auto &s : syms) {
        out.push_back(s.to_string());
    }
    return out;
}

std::string verdict(ZeroVerdict v)
{
    return to_string(v);
}

py::dict drift_dict(const ChargeDrift &d)
{
    py::dict out;
    out["name"] = d.name;
    out["initial"] = d.initial;
    out["max_abs"] = d.max_abs;
    out["max_rel"] = d.max_rel;
    return out;
}

} // namespace

PYBIND11_MODULE(_noether, m)
{
    m.doc() = "Symbolic Lagrangian and Hamiltonian mechanics with Noether charges";

    auto base_error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base_error.ptr());
    auto math_error = py::register_exception<MathError>(m, "MathError", base_error.ptr());
    py::register_exception<BlowUpError>(m, "BlowUpError", math_error.ptr());
    py::register_exception<EvalError>(m, "EvalError", base_error.ptr());

    py::class_<Expr>(m, "Expr")
        .def(py::init([](double v) { return Expr(Number(v)); }))
        .def("__str__", &Expr::to_string)
        .def("__repr__", [](const Expr &e) { return "Expr('" + e.to_string() + "')"; })
        .def("__hash__", [](const Expr &e) { return std::hash<std::string>{}(e.to_string()); })
        .def(py::self == py::self)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def(-py::self)
        .def("__pow__", [](const Expr &e, int n) { return pow(e, n); })
        .def(
            "is_zero",
            [](const Expr &e, std::uint64_t seed, int points, double zero_tol, double nonzero_tol) {
                ZeroTestConfig cfg;
                cfg.seed = seed;
                cfg.points = points;
                cfg.zero_tol = zero_tol;
                cfg.nonzero_tol = nonzero_tol;
                return verdict(is_zero(e, cfg));
            },
            py::arg("seed") = ZeroTestConfig{}.seed, py::arg("points") = ZeroTestConfig{}.points,
            py::arg("zero_tol") = ZeroTestConfig{}.zero_tol, py::arg("nonzero_tol") = ZeroTestConfig{}.nonzero_tol)
        .def("diff", [](const Expr &e, const std::string &name) { return diff(e, symbol_named(name)); })
        .def("evaluate", [](const Expr &e, const std::map<std::string, double> &values) {
            return eval(e, to_assignment(values));
        })
        .def("substitute",
             [](const Expr &e, const std::map<std::string, Expr> &map) {
                 Substitution sub;
                 for (const auto &[name, value] : map) {
                     sub[symbol_named(name)] = value;
                 }
                 return substitute(e, sub);
             })
        .def_property_readonly("free_symbols", [](const Expr &e) { return symbol_names(e.free_symbols()); });

    m.def(
        "parse",
        [](const std::string &text, int dimension, const std::vector<std::string> &params) {
            return parse(text, ParseContext{dimension, params});
        },
        py::arg("text"), py::arg("dimension") = 1, py::arg("params") = std::vector<std::string>{});

    py::class_<ProjectableVectorField>(m, "VectorField")
        .def(py::init([](const std::string &text, int dimension, const std::vector<std::string> &params) {
                 return parse_vector_field(text, dimension, params);
             }),
             py::arg("text"), py::arg("dimension") = 1, py::arg("params") = std::vector<std::string>{})
        .def_readonly("time_component", &ProjectableVectorField::u_t)
        .def_readonly("components", &ProjectableVectorField::u)
        .def("is_connection", &ProjectableVectorField::is_connection)
        .def("__add__", &ProjectableVectorField::operator+)
        .def("__sub__", &ProjectableVectorField::operator-)
        .def("__str__", &ProjectableVectorField::to_string)
        .def("__repr__", [](const ProjectableVectorField &u) { return "VectorField('" + u.to_string() + "')"; });

    py::class_<Lagrangian>(m, "Lagrangian")
        .def(py::init<Expr, int>(), py::arg("density"), py::arg("dimension") = 1)
        .def(py::init([](const std::string &text, int dimension, const std::vector<std::string> &params) {
                 return Lagrangian(parse(text, ParseContext{dimension, params}), dimension);
             }),
             py::arg("text"), py::arg("dimension") = 1, py::arg("params") = std::vector<std::string>{})
        .def_readonly("density", &Lagrangian::density)
        .def_readonly("dimension", &Lagrangian::dimension)
        .def("__repr__", [](const Lagrangian &L) { return "Lagrangian('" + L.density.to_string() + "')"; });

    py::class_<Hamiltonian>(m, "Hamiltonian")
        .def(py::init<Expr, int>(), py::arg("density"), py::arg("dimension") = 1)
        .def(py::init([](const std::string &text, int dimension, const std::vector<std::string> &params) {
                 return Hamiltonian(parse(text, ParseContext{dimension, params}), dimension);
             }),
             py::arg("text"), py::arg("dimension") = 1, py::arg("params") = std::vector<std::string>{})
        .def_readonly("density", &Hamiltonian::density)
        .def_readonly("dimension", &Hamiltonian::dimension)
        .def("__repr__", [](const Hamiltonian &H) { return "Hamiltonian('" + H.density.to_string() + "')"; });

    py::class_<ConservedQuantity>(m, "ConservedQuantity")
        .def_readonly("name", &ConservedQuantity::name)
        .def_readonly("expression", &ConservedQuantity::expression)
        .def_readonly("symmetry_function", &ConservedQuantity::symmetry_function)
        .def_property_readonly("is_symbolic", &ConservedQuantity::is_symbolic)
        .def_property_readonly("symmetry_class",
                               [](const ConservedQuantity &q) { return to_string(q.provenance.symmetry_class); })
        .def("evaluate", [](const ConservedQuantity &q, const std::map<std::string, double> &values) {
            return q.evaluate(to_assignment(values));
        });

    py::class_<SymmetryReport>(m, "SymmetryReport")
        .def_property_readonly("symmetry_class", [](const SymmetryReport &r) { return to_string(r.symmetry_class); })
        .def_readonly("lie_derivative", &SymmetryReport::lie_derivative)
        .def_readonly("sigma", &SymmetryReport::sigma)
        .def_readonly("time_function", &SymmetryReport::time_function)
        .def_readonly("annihilator", &SymmetryReport::annihilator)
        .def_readonly("charge", &SymmetryReport::charge)
        .def_property_readonly("confidence", [](const SymmetryReport &r) { return verdict(r.verdict_confidence); });

    m.def("euler_lagrange", py::overload_cast<const Lagrangian &>(&euler_lagrange));
    m.def("solve_accelerations", &solve_accelerations);
    m.def("lie_derivative", &lie_derivative_lagrangian);
    m.def("first_variation", [](const Lagrangian &L, const ProjectableVectorField &u) {
        return verdict(first_variational_check(L, u).residual_verdict);
    });
    m.def(
        "symmetry_classify",
        [](const Lagrangian &L, const ProjectableVectorField &u, const std::string &name) {
            return symmetry_classify(L, u, ClassifyOptions{name, std::nullopt});
        },
        py::arg("lagrangian"), py::arg("generator"), py::arg("name") = "u");
    m.def(
        "find_symmetries",
        [](const Lagrangian &L, int degree, bool connection) {
            return find_symmetries(L, SymmetryAnsatz{connection ? 1 : 0, degree});
        },
        py::arg("lagrangian"), py::arg("degree") = 1, py::arg("connection") = false);

    m.def("hamilton_equations", &hamilton_equations);
    m.def(
        "symmetry_classify_hamiltonian",
        [](const Hamiltonian &H, const ProjectableVectorField &u, const std::string &name) {
            return symmetry_classify_hamiltonian(H, u, name);
        },
        py::arg("hamiltonian"), py::arg("generator"), py::arg("name") = "u");
    m.def("poisson_bracket", &poisson_bracket_T, py::arg("f"), py::arg("g"), py::arg("dimension") = 1);
    m.def("verify_pullback_relation", [](const Hamiltonian &H, const ProjectableVectorField &u) {
        return verdict(verify_pullback_relation(H, u));
    });
    m.def("verify_first_integral", [](const Hamiltonian &H, const Expr &f) { return verdict(verify_first_integral(H, f)); });

    m.def("legendre_map", [](const Lagrangian &L) {
        const auto lm = legendre_map(L);
        py::dict out;
        out["components"] = lm.components;
        out["determinant"] = lm.determinant;
        out["regularity"] = to_string(lm.regularity);
        return out;
    });
    m.def("associated_hamiltonian", &associated_hamiltonian);
    m.def("verify_association", [](const Lagrangian &L, const Hamiltonian &H) {
        const auto r = verify_association(L, H);
        py::dict out;
        out["round_trip"] = verdict(r.round_trip_identity);
        out["momentum_consistency"] = verdict(r.momentum_consistency);
        out["velocity_consistency"] = verdict(r.velocity_consistency);
        out["energy_relation"] = verdict(r.energy_relation);
        return out;
    });

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("state", [](const Trajectory &t) { return symbol_names(t.state); })
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def("__len__", &Trajectory::size);

    m.def(
        "integrate",
        [](const Lagrangian &L, const std::map<std::string, double> &ic, double t0, double t1, double h) {
            return integrate(to_first_order(L), to_assignment(ic), t0, t1, h);
        },
        py::arg("system"), py::arg("ic"), py::arg("t0"), py::arg("t1"), py::arg("h"));
    m.def(
        "integrate",
        [](const Hamiltonian &H, const std::map<std::string, double> &ic, double t0, double t1, double h) {
            return integrate(to_first_order(H), to_assignment(ic), t0, t1, h);
        },
        py::arg("system"), py::arg("ic"), py::arg("t0"), py::arg("t1"), py::arg("h"));
    m.def("drift_report", [](const Trajectory &traj, const std::vector<ConservedQuantity> &charges) {
        py::list out;
        for (const auto &d : drift_report(traj, charges).charges) {
            out.append(drift_dict(d));
        }
        return out;
    });
    m.def("to_csv", [](const Trajectory &traj, const std::vector<ConservedQuantity> &charges) {
        std::ostringstream out;
        write_csv(out, traj, charges);
        return out.str();
    });

    m.def("parse_scenario", [](const std::string &text) { return print_scenario(parse_scenario(text)); },
          "Validates a scenario and returns its canonical printed form.");
    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
