#include <doctest.h>

#include <random>

#include <noether/compiled.hpp>
#include <noether/error.hpp>
#include <noether/expr.hpp>
#include <noether/linalg.hpp>
#include <noether/parser.hpp>
#include <noether/zero_test.hpp>

#include "support.hpp"

using namespace noether;
using namespace noether::testing;

TEST_CASE("parse builds the friction Lagrangian")
{
    const Expr L = E("0.5*exp(k*t)*q1_t^2");
    CHECK(L == rational(1, 2) * exp(param("k") * T()) * pow(qt(1), 2));
    CHECK(L.has(Symbol::parameter("k")));
    CHECK(L.has(Symbol::time()));
    CHECK(L.has(Symbol::velocity(1)));
    CHECK(L.free_symbols().size() == 3);
}

TEST_CASE("parse identifiers")
{
    CHECK(E("q1").kind() == NodeKind::Symbol);
    CHECK(E("q1").symbol() == Symbol::coord(1));
    CHECK(E("q2_tt", 2).symbol() == Symbol::acceleration(2));
    CHECK(E("p").symbol() == Symbol::homogeneous_momentum());
    CHECK(E("p1_t").symbol() == Symbol::momentum_rate(1));
    CHECK(E("-q1") == -q(1));
    CHECK(E("q1^-2") == pow(q(1), -2));
    CHECK(E("1e-3") == rational(1, 1000));
}

TEST_CASE("parse cancels identical products")
{
    const Expr e = E("q1_t^2 - q1_t*q1_t");
    CHECK(e.is_zero());
    // Oracle: the two halves agree numerically at 10 random points.
    std::mt19937_64 rng(7);
    const Expr a = pow(qt(1), 2);
    const Expr b = qt(1);
    for (int i = 0; i < 10; ++i) {
        auto pt = random_point(rng, {a});
        CHECK(eval(a, pt) - eval(b, pt) * eval(b, pt) == doctest::Approx(0.0));
    }
}

TEST_CASE("parse errors")
{
    const ParseContext ctx{1, {"k"}};
    try {
        parse("q1 + * 2", ctx);
        FAIL("expected a syntax error");
    } catch (const ParseError &e) {
        CHECK(e.position() == 5);
    }
    CHECK_THROWS_AS(parse("zz*q1", ctx), ParseError);
    CHECK_THROWS_AS(parse("q2", ctx), ParseError);
    CHECK_THROWS_AS(parse("q0", ctx), ParseError);
    CHECK_THROWS_AS(parse("(q1", ctx), ParseError);
    CHECK_THROWS_AS(parse("q1^x", ctx), ParseError);
    CHECK_THROWS_AS(parse("q1/0", ctx), ParseError);
    CHECK_THROWS_AS(parse("", ctx), ParseError);
    CHECK_THROWS_AS(parse("exp q1", ctx), ParseError);
    try {
        parse("q1 + q7", ctx);
        FAIL("expected an index error");
    } catch (const ParseError &e) {
        CHECK(e.position() == 5);
    }
}

TEST_CASE("diff examples")
{
    const Expr L = E("0.5*exp(k*t)*q1_t^2");
    CHECK(diff(L, Symbol::velocity(1)) == exp(param("k") * T()) * qt(1));
    CHECK(diff(q(1), Symbol::time()).is_zero());
    const Expr e = pm(1) * qt(1);
    const Expr d = diff(e, Symbol::momentum(1));
    CHECK(d == qt(1));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        auto pt = random_point(rng, {e});
        CHECK(central_difference(e, Symbol::momentum(1), pt, 1e-5) == doctest::Approx(eval(d, pt)).epsilon(1e-8));
    }
}

TEST_CASE("diff of functions")
{
    CHECK(diff(E("sin(q1)"), Symbol::coord(1)) == E("cos(q1)"));
    CHECK(diff(E("cos(2*q1)"), Symbol::coord(1)) == E("-2*sin(2*q1)"));
    CHECK(diff(E("log(q1)"), Symbol::coord(1)) == E("q1^-1"));
    CHECK(diff(E("sqrt(q1)"), Symbol::coord(1)) == E("1/2*sqrt(q1)^-1"));
    CHECK(diff(E("exp(k*t)"), Symbol::time()) == E("k*exp(k*t)"));
}

TEST_CASE("is_zero verdicts")
{
    CHECK(is_zero(E("sin(t)^2 + cos(t)^2 - 1")) == ZeroVerdict::NumericallyZero);
    CHECK(is_zero(E("0*q1")) == ZeroVerdict::ProvenZero);
    CHECK(is_zero(E("q1_t")) == ZeroVerdict::ProvenNonzero);
    CHECK(is_zero(E("log(0*q1)")) == ZeroVerdict::Unknown);
    CHECK(is_zero(E("1e-8*q1")) == ZeroVerdict::Unknown);
    CHECK(is_zero(E("1e-12*q1")) == ZeroVerdict::NumericallyZero);
    // Oracle for the trigonometric identity: direct evaluation.
    std::mt19937_64 rng(11);
    const Expr e = E("sin(t)^2 + cos(t)^2 - 1");
    for (int i = 0; i < 20; ++i) {
        CHECK(std::abs(eval(e, random_point(rng, {e}))) < 1e-12);
    }
}

TEST_CASE("is_zero is reproducible and configurable")
{
    const Expr e = E("1e-7*q1");
    CHECK(is_zero(e) == is_zero(e));
    ZeroTestConfig loose;
    loose.nonzero_tol = 1e-8;
    CHECK(is_zero(e, loose) == ZeroVerdict::ProvenNonzero);
    {
        ScopedZeroTestConfig guard(loose);
        CHECK(is_zero(e) == ZeroVerdict::ProvenNonzero);
    }
    CHECK(is_zero(e) == ZeroVerdict::Unknown);
}

TEST_CASE("eval examples")
{
    Assignment a{{Symbol::parameter("k"), 0.0}, {Symbol::time(), 5.0}};
    CHECK(eval(E("exp(k*t)"), a) == 1.0);
    // Hand arithmetic: 1/2 * 1 * (1 + 1*2) * e^0 = 1.5
    Assignment b{{Symbol::parameter("k"), 1.0}, {Symbol::time(), 0.0}, {Symbol::coord(1), 2.0}, {Symbol::velocity(1), 1.0}};
    CHECK(eval(E("1/2*q1_t*(q1_t + k*q1)*exp(k*t)"), b) == doctest::Approx(1.5));
    CHECK(eval(E("q1^2"), Assignment{{Symbol::coord(1), -3.0}}) == 9.0);
    CHECK_THROWS_AS(eval(E("q1 + q1_t"), Assignment{{Symbol::coord(1), 1.0}}), EvalError);
    CHECK_THROWS_AS(eval(E("log(q1)"), Assignment{{Symbol::coord(1), -1.0}}), DomainError);
    CHECK_THROWS_AS(eval(E("q1^-1"), Assignment{{Symbol::coord(1), 0.0}}), DomainError);
    CHECK_THROWS_AS(eval(E("sqrt(q1)"), Assignment{{Symbol::coord(1), -1.0}}), DomainError);
}

TEST_CASE("substitute examples")
{
    Substitution s{{Symbol::velocity(1), E("exp(-k*t)*p1")}};
    CHECK(substitute(E("q1_t^2"), s) == E("exp(-2*k*t)*p1^2"));
    CHECK(substitute(q(1), {}) == q(1));
    CHECK(substitute(E("p1*q1_t"), {{Symbol::velocity(1), pm(1)}}) == E("p1^2"));
    // Simultaneous, not sequential.
    Substitution swap{{Symbol::coord(1), q(2)}, {Symbol::coord(2), q(1)}};
    CHECK(substitute(E("q1 - 2*q2", 2), swap) == E("q2 - 2*q1", 2));
}

TEST_CASE("normal form simplifications")
{
    CHECK(E("exp(k*t)*exp(-k*t)").is_one());
    CHECK(E("exp(t)^3") == E("exp(3*t)"));
    CHECK(E("sqrt(q1)^2") == q(1));
    CHECK(E("sqrt(q1)^3") == E("q1*sqrt(q1)"));
    CHECK(E("(q1 + q1_t)^2") == E("q1^2 + 2*q1*q1_t + q1_t^2"));
    CHECK(E("(2*q1 + 2)^-1") == E("1/2*(q1 + 1)^-1"));
    CHECK(E("(q1 + 1)*(q1 + 1)^-1").is_one());
    CHECK(E("exp(log(q1))") == q(1));
    CHECK(E("log(exp(q1))") == q(1));
    CHECK(E("sqrt(9/4)") == rational(3, 2));
    CHECK(E("sin(0) + cos(0)").is_one());
    CHECK(E("q1 - q1").is_zero());
}

TEST_CASE("printing")
{
    CHECK(E("0.5*exp(-k*t)*p1^2").to_string() == "1/2*exp(-k*t)*p1^2");
    CHECK(E("-k*q1_t").to_string() == "-k*q1_t");
    CHECK(E("t*q1_t + q1").to_string() == "q1 + t*q1_t");
    CHECK(E("v*t*q1_t - v*q1").to_string() == "-v*q1 + v*t*q1_t");
    CHECK(E("q1^-1").to_string() == "q1^-1");
    CHECK(E("3 - q1").to_string() == "-q1 + 3");
}

TEST_CASE("property: print-parse round trip and normalization idempotence")
{
    std::mt19937_64 rng(20240601);
    const std::vector<Symbol> vars{Symbol::time(), Symbol::coord(1), Symbol::coord(2), Symbol::velocity(1),
                                   Symbol::parameter("k")};
    const ParseContext ctx{2, {"k"}};
    for (int i = 0; i < 200; ++i) {
        const Expr e = random_expression(rng, vars, 4);
        CAPTURE(e.to_string());
        CHECK(normalize(e) == e);
        CHECK(normalize(normalize(e)) == normalize(e));
        CHECK(parse(e.to_string(), ctx) == e);
    }
}

TEST_CASE("property: derivative matches centered finite differences")
{
    std::mt19937_64 rng(42);
    const std::vector<Symbol> vars{Symbol::time(), Symbol::coord(1), Symbol::velocity(1)};
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        const Expr e = random_expression(rng, vars, 4);
        for (const auto &s : vars) {
            const Expr d = diff(e, s);
            for (int j = 0; j < 20; ++j) {
                auto pt = random_point(rng, {e, Expr(s)});
                double fd = 0, exact = 0;
                try {
                    fd = central_difference(e, s, pt, 1e-5);
                    exact = eval(d, pt);
                } catch (const DomainError &) {
                    continue;
                }
                CAPTURE(e.to_string());
                CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
                ++checked;
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("property: diff is linear")
{
    std::mt19937_64 rng(5);
    const std::vector<Symbol> vars{Symbol::time(), Symbol::coord(1), Symbol::velocity(1)};
    for (int i = 0; i < 50; ++i) {
        const Expr e1 = random_expression(rng, vars, 3);
        const Expr e2 = random_expression(rng, vars, 3);
        const Expr a = rational(3, 2);
        const Expr b = param("k");
        for (const auto &s : vars) {
            const Expr lhs = diff(a * e1 + b * e2, s);
            const Expr rhs = a * diff(e1, s) + b * diff(e2, s);
            CHECK(is_zero_class(is_zero(lhs - rhs)));
        }
    }
}

TEST_CASE("compiled expressions agree with eval")
{
    std::mt19937_64 rng(9);
    const std::vector<Symbol> vars{Symbol::time(), Symbol::coord(1), Symbol::velocity(1)};
    for (int i = 0; i < 50; ++i) {
        const Expr e = random_expression(rng, vars, 4);
        const CompiledExpr c(e, vars);
        auto pt = random_point(rng, {Expr(vars[0]), Expr(vars[1]), Expr(vars[2])});
        const std::vector<double> x{pt[vars[0]], pt[vars[1]], pt[vars[2]]};
        double expected = 0;
        try {
            expected = eval(e, pt);
        } catch (const DomainError &) {
            CHECK_THROWS_AS(c(x), DomainError);
            continue;
        }
        CHECK(c(x) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_THROWS_AS(CompiledExpr(E("q1 + k"), vars), EvalError);
}

TEST_CASE("symbolic linear algebra")
{
    const ExprMatrix a{{Expr(2), Expr(1)}, {Expr(1), Expr(2)}};
    CHECK(determinant(a) == Expr(3));
    auto x = solve(a, {{Expr(1), Expr(0)}, {Expr(0), Expr(1)}});
    REQUIRE(x);
    // Exact inverse of [[2,1],[1,2]] is 1/3 [[2,-1],[-1,2]].
    CHECK((*x)[0][0] == rational(2, 3));
    CHECK((*x)[0][1] == rational(-1, 3));
    CHECK((*x)[1][1] == rational(2, 3));
    CHECK_FALSE(solve({{Expr(1), Expr(2)}, {Expr(2), Expr(4)}}, {{Expr(1)}, {Expr(1)}}));
    const ExprMatrix sym{{param("k"), Expr(0)}, {Expr(0), exp(T())}};
    auto y = solve(sym, {{Expr(1)}, {Expr(1)}});
    REQUIRE(y);
    CHECK((*y)[0][0] == pow(param("k"), -1));
    CHECK((*y)[1][0] == exp(-T()));
    auto ns = nullspace({{Expr(1), Expr(1), Expr(0)}}, 3);
    CHECK(ns.basis.size() == 2);
    CHECK(determinant({{Expr(1), Expr(2), Expr(3)}, {Expr(0), Expr(1), Expr(4)}, {Expr(5), Expr(6), Expr(0)}})
          == Expr(1));
}
