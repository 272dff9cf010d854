#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "perpconj/error.hpp"
#include "perpconj/expr.hpp"
#include "perpconj/region.hpp"
#include "perpconj/tape.hpp"

using namespace perpconj;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Scope xy_scope() { return Scope{{"x", "y"}, {"A", "k"}}; }

double eval_at(const std::string& src, std::vector<double> pt, ParameterSet params = {{"A", 2.0}, {"k", 0.5}}) {
    return evaluate(parse_expression(src, xy_scope()), pt, params);
}

}  // namespace

TEST_CASE("precedence and associativity", "[expr]") {
    CHECK(eval_at("1 + 2*3", {0, 0}) == 7.0);
    CHECK(eval_at("2^3^2", {0, 0}) == 512.0);
    CHECK(eval_at("-x^2", {3, 0}) == -9.0);
    CHECK(eval_at("(1 + 2)*3", {0, 0}) == 9.0);
    CHECK(eval_at("8/4/2", {0, 0}) == 1.0);
    CHECK(eval_at("10 - 3 - 2", {0, 0}) == 5.0);
    CHECK(eval_at("2.5e-1*4", {0, 0}) == 1.0);
    CHECK(eval_at("x^2 - A^2", {3, 0}) == 5.0);
    CHECK_THAT(eval_at("sin(x)^2 + cos(x)^2", {0.7, 0}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(eval_at("exp(log(y))", {0, 3.5}), WithinRel(3.5, 1e-15));
    CHECK(eval_at("abs(x)*sign(x)", {-2, 0}) == -2.0);
}

TEST_CASE("syntax errors carry offsets", "[expr]") {
    CHECK_THROWS_AS(parse_expression("1 +", xy_scope()), SyntaxError);
    CHECK_THROWS_AS(parse_expression("(x", xy_scope()), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x y", xy_scope()), SyntaxError);
    CHECK_THROWS_AS(parse_expression("", xy_scope()), SyntaxError);
    try {
        parse_expression("x + * y", xy_scope());
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 4);
    }
    try {
        parse_expression("x + zz", xy_scope());
        FAIL("expected an unknown identifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name() == "zz");
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("domain errors", "[expr]") {
    CHECK_THROWS_AS(eval_at("sqrt(x)", {-1, 0}), DomainError);
    CHECK_THROWS_AS(eval_at("log(x)", {0, 0}), DomainError);
    CHECK_THROWS_AS(eval_at("1/x", {0, 0}), DomainError);
    CHECK_THROWS_AS(eval_at("exp(x)", {1000, 0}), DomainError);
    CHECK(eval_at("sqrt(x)", {0, 0}) == 0.0);
}

TEST_CASE("identifiers", "[expr]") {
    CHECK(is_identifier("x1"));
    CHECK(is_identifier("_a"));
    CHECK_FALSE(is_identifier("1x"));
    CHECK_FALSE(is_identifier(""));
    CHECK(is_function_name("sqrt"));
    CHECK_FALSE(is_function_name("x"));
    const auto e = parse_expression("A*x + k*y", xy_scope());
    CHECK(free_variables(e) == std::set<std::string>{"A", "k", "x", "y"});
}

TEST_CASE("derivatives of elementary functions", "[expr]") {
    struct Case {
        const char* f;
        const char* df;
    };
    const std::vector<Case> cases = {
        {"x^3", "3*x^2"},
        {"sin(x)*y", "cos(x)*y"},
        {"exp(2*x)", "2*exp(2*x)"},
        {"log(x)", "1/x"},
        {"sqrt(x)", "0.5/sqrt(x)"},
        {"x/(1 + x^2)", "(1 - x^2)/(1 + x^2)^2"},
        {"cos(x^2)", "-2*x*sin(x^2)"},
        {"x^y", "y*x^(y - 1)"},
        {"A*x - k", "A"},
        {"y", "0"},
    };
    const ParameterSet params{{"A", 2.0}, {"k", 0.5}};
    for (const auto& c : cases) {
        INFO(c.f);
        const auto d = differentiate(parse_expression(c.f, xy_scope()), "x");
        const auto ref = parse_expression(c.df, xy_scope());
        for (double x : {0.3, 0.9, 1.7}) {
            const std::vector<double> pt{x, 1.3};
            CHECK_THAT(evaluate(d, pt, params), WithinAbs(evaluate(ref, pt, params), 1e-12));
        }
    }
}

TEST_CASE("derivatives match central differences", "[expr][property]") {
    Rng rng(17);
    const std::vector<std::string> pool = {"x*y", "sin(x)", "exp(y/3)", "x^2", "cos(x*y)", "y^3", "x - y", "A"};
    for (int trial = 0; trial < 50; ++trial) {
        std::string src;
        for (int t = 0; t < 3; ++t) {
            const auto& a = pool[static_cast<std::size_t>(rng.uniform() * pool.size())];
            const auto& b = pool[static_cast<std::size_t>(rng.uniform() * pool.size())];
            src += (t ? " + " : "") + ("(" + a + ")*(" + b + ")");
        }
        INFO(src);
        const auto e = parse_expression(src, xy_scope());
        const ParameterSet params{{"A", 1.5}, {"k", 0.0}};
        const std::vector<double> pt{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        for (std::size_t v = 0; v < 2; ++v) {
            const auto d = differentiate(e, v == 0 ? "x" : "y");
            const double h = 1e-5;
            auto p = pt, m = pt;
            p[v] += h;
            m[v] -= h;
            const double fd = (evaluate(e, p, params) - evaluate(e, m, params)) / (2 * h);
            const double exact = evaluate(d, pt, params);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("printing round trips", "[expr]") {
    for (const char* src : {"x^2 - A^2", "-(x + y)*k", "2^3^2", "(2^3)^2", "x - (y - 1)", "x/(y/2)", "-x^2",
                            "(-x)^2", "sqrt(abs(x))*sign(y)", "1e-300*x", "0.1 + 0.2"}) {
        INFO(src);
        const auto e = parse_expression(src, xy_scope());
        const auto back = parse_expression(to_string(e), xy_scope());
        CHECK(structurally_equal(e, back));
        const std::vector<double> pt{0.37, -1.2};
        const ParameterSet params{{"A", 2.0}, {"k", 0.5}};
        CHECK(evaluate(e, pt, params) == evaluate(back, pt, params));
    }
}

TEST_CASE("substitution and parameter binding", "[expr]") {
    const auto e = parse_expression("x^2 + A*y", xy_scope());
    const std::vector<Expression> repl = {parse_expression("y + 1", xy_scope()), parse_expression("2*x", xy_scope())};
    const auto s = substitute(e, repl);
    const ParameterSet params{{"A", 3.0}};
    const std::vector<double> pt{0.5, 2.0};
    CHECK(evaluate(s, pt, params) == 9.0 + 3.0);

    const auto bound = bind_parameters(parse_expression("A^2*x + k", xy_scope()), {{"A", 2.0}, {"k", 1.0}});
    CHECK(free_variables(bound) == std::set<std::string>{"x"});
    CHECK(evaluate(bound, std::vector<double>{3.0, 0.0}, {}) == 13.0);
}

TEST_CASE("algebra helpers fold literals", "[expr]") {
    const auto x = Expression::variable("x", 0);
    CHECK(structurally_equal(algebra::sum(x, Expression::constant(0)), x));
    CHECK(structurally_equal(algebra::product(Expression::constant(1), x), x));
    CHECK(algebra::product(Expression::constant(0), x).is_constant(0.0));
    CHECK(algebra::sum(Expression::constant(2), Expression::constant(3)).is_constant(5.0));
    CHECK(algebra::power(x, Expression::constant(1)).kind() == ExprKind::Variable);
}

TEST_CASE("tape agrees with the tree walker", "[tape]") {
    const Scope scope = xy_scope();
    const ParameterSet params{{"A", 1.25}, {"k", -0.5}};
    std::vector<Expression> outs;
    for (const char* src : {"x^2*sin(y) + A", "x^2*sin(y) - k*x", "exp(x*y)/(1 + x^2)", "sqrt(abs(y))"}) {
        outs.push_back(parse_expression(src, scope));
    }
    const Tape tape(outs, params);
    CHECK(tape.output_count() == outs.size());
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> pt{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const auto vals = tape.run(pt);
        for (std::size_t k = 0; k < outs.size(); ++k) CHECK(vals[k] == evaluate(outs[k], pt, params));
    }
}

TEST_CASE("tape shares common subexpressions", "[tape]") {
    const Scope scope = xy_scope();
    const auto a = parse_expression("sin(x*y) + cos(x*y)", scope);
    const auto b = parse_expression("sin(x*y)*2", scope);
    const std::vector<Expression> both{a, b};
    const std::vector<Expression> only_a{a};
    const Tape shared(both, {});
    const Tape single(only_a, {});
    // b adds the literal 2, the product and nothing else
    CHECK(shared.instruction_count() <= single.instruction_count() + 2);
}

TEST_CASE("tape raises domain errors like evaluate", "[tape]") {
    const std::vector<Expression> outs{parse_expression("log(x)", xy_scope())};
    const Tape tape(outs, {});
    CHECK_THROWS_AS(tape.run(std::vector<double>{-1.0, 0.0}), DomainError);
}
