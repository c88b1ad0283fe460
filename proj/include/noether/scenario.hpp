#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <noether/dynamics.hpp>
#include <noether/hamiltonian.hpp>
#include <noether/jet.hpp>
#include <noether/lagrangian.hpp>
#include <noether/legendre.hpp>
#include <noether/number.hpp>
#include <noether/parser.hpp>
#include <noether/zero_test.hpp>

namespace noether
{

// Line-oriented scenario file:
//
//   [system]
//   dimension = 1
//   params = k = 1/2, v = 1
//   lagrangian = 0.5*exp(k*t)*q1_t^2
//   hamiltonian = ...            (optional, either or both)
//   base_point = t = 0, q1 = 1   (optional)
//   [generators]
//   gamma = dt - k/2*q1 dq1
//   [simulate]
//   t0 = 0
//   t1 = 10
//   h = 0.001
//   ic = q1 = 1, q1_t = 1
//   formalism = lagrange
//   [options]
//   seed = 1592598564
//
// `#` starts a comment; blank lines are ignored.
struct Scenario {
    struct Simulation {
        double t0 = 0;
        double t1 = 10;
        double h = 1e-3;
        std::vector<std::pair<std::string, double>> ic;
        Formalism formalism = Formalism::Lagrange;
    };
    struct Options {
        ZeroTestConfig zero_test;
        NewtonOptions newton;
        double flow_eps = 1e-4;
    };

    int dimension = 1;
    std::vector<std::pair<std::string, Number>> params;
    std::optional<std::string> lagrangian;
    std::optional<std::string> hamiltonian;
    std::vector<std::pair<std::string, std::string>> base_point;
    std::vector<std::pair<std::string, std::string>> generators;
    std::optional<Simulation> simulation;
    Options options;

    ParseContext context() const;
    Assignment parameter_values() const;
    std::optional<Lagrangian> lagrangian_source() const;
    std::optional<Hamiltonian> hamiltonian_source() const;
    std::optional<BasePoint> base() const;
    // Throws MathError("unknown generator ...") when absent.
    ProjectableVectorField generator(const std::string &name) const;
};

// Throws ParseError with the 1-based line number in the message.
Scenario parse_scenario(std::string_view text);
std::string print_scenario(const Scenario &s);

Formalism parse_formalism(std::string_view text);
std::string to_string(Formalism f);

// "name = value, name = value" with numeric values.
std::vector<std::pair<std::string, double>> parse_assignments(std::string_view text);

} // namespace noether
