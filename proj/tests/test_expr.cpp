#include <doctest.h>

#include <random>

#include "envtool/expr.hpp"
#include "support/oracles.hpp"

using namespace envtool;

TEST_CASE("parse precedence: u^2 + v") {
    const Expr e = Expr::parse("u^2 + v");
    CHECK(e.value(2, 3) == doctest::Approx(7.0));
    CHECK(e.print() == "u^2+v");
}

TEST_CASE("paper frame component: 1/sqrt(9*u^2+4) at u=0 is 1/2") {
    const Expr e = Expr::parse("1/sqrt(9*u^2+4)");
    CHECK(e.value(0.0, 0.3) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("implicit multiplication is rejected with a byte offset") {
    try {
        Expr::parse("sin(u)cos(v)");
        FAIL("expected ParseError");
    } catch (const ParseError& pe) {
        CHECK(pe.offset == 6);
        CHECK(pe.expected.find("operator") != std::string::npos);
    }
}

TEST_CASE("unknown identifier error") {
    CHECK_THROWS_AS(Expr::parse("u + w"), ParseError);
    try {
        Expr::parse("u + w");
    } catch (const ParseError& pe) {
        CHECK(pe.offset == 4);
    }
}

TEST_CASE("empty input and trailing garbage") {
    CHECK_THROWS_AS(Expr::parse(""), ParseError);
    CHECK_THROWS_AS(Expr::parse("u + "), ParseError);
    CHECK_THROWS_AS(Expr::parse("(u+v"), ParseError);
    CHECK_THROWS_AS(Expr::parse("u+v)"), ParseError);
}

TEST_CASE("evalJet: u*v at (2,3)") {
    const Jet2 j = evalJet(Expr::parse("u*v"), 2, 3);
    CHECK(j.val == doctest::Approx(6));
    CHECK(j.du == doctest::Approx(3));
    CHECK(j.dv == doctest::Approx(2));
    CHECK(j.duv == doctest::Approx(1));
    CHECK(j.duu == doctest::Approx(0));
    CHECK(j.dvv == doctest::Approx(0));
}

TEST_CASE("evalJet: sqrt(u^2+v^2) at (3,4) matches finite differences") {
    const Expr e = Expr::parse("sqrt(u^2+v^2)");
    const Jet2 j = evalJet(e, 3, 4);
    CHECK(j.du == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(j.dv == doctest::Approx(0.8).epsilon(1e-12));
    oracles::Fn2 f = [&](double u, double v) { return e.value(u, v); };
    CHECK(oracles::closeRel(j.duu, oracles::fdDuu(f, 3, 4), 1e-6));
    CHECK(oracles::closeRel(j.duv, oracles::fdDuv(f, 3, 4), 1e-6));
}

TEST_CASE("radius fixture: v/2 at (1,2)") {
    const Jet2 j = evalJet(Expr::parse("v/2"), 1, 2);
    CHECK(j.val == doctest::Approx(1.0));
    CHECK(j.dv == doctest::Approx(0.5));
    CHECK(j.du == doctest::Approx(0.0));
}

TEST_CASE("power rules") {
    CHECK(Expr::parse("2^3^2").value(0, 0) == doctest::Approx(512.0));  // right-assoc
    CHECK(Expr::parse("-u^2").value(3, 0) == doctest::Approx(-9.0));    // ^ binds tighter than unary -
    CHECK(Expr::parse("u^-2").value(2, 0) == doctest::Approx(0.25));
    CHECK(Expr::parse("u^0.5").value(9, 0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(Expr::parse("u^(1+1)").value(5, 0) == doctest::Approx(25.0));
    CHECK_THROWS_AS(Expr::parse("u^v"), ParseError);  // non-constant exponent
    CHECK_THROWS_AS(Expr::parse("2^u"), ParseError);
}

TEST_CASE("constants and bindings") {
    CHECK(Expr::parse("pi").value(0, 0) == doctest::Approx(3.14159265358979));
    CHECK(Expr::parse("e").value(0, 0) == doctest::Approx(2.71828182845905));
    Bindings b{{"k", 2.5}};
    CHECK(Expr::parse("k*u", b).value(2, 0) == doctest::Approx(5.0));
    // Bindings substitute as literals before evaluation, so printing shows the value.
    CHECK(Expr::parse("k", b).print() == "2.5");
    CHECK_THROWS_AS(Expr::parse("k*u"), ParseError);  // unbound
}

TEST_CASE("domain errors carry the node offset") {
    try {
        Expr::parse("1/(u-1)").jet2(1.0, 0.0);
        FAIL("expected EvalDomainError");
    } catch (const EvalDomainError& de) {
        CHECK(de.offset == 1);
        CHECK(de.u == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(Expr::parse("sqrt(u)").jet2(-1.0, 0.0), EvalDomainError);
    CHECK_THROWS_AS(Expr::parse("log(u)").jet2(-1.0, 0.0), EvalDomainError);
    CHECK_THROWS_AS(Expr::parse("log(u)").jet2(0.0, 0.0), EvalDomainError);
}

TEST_CASE("vector expressions") {
    const VecExpr ve = VecExpr::parse("(u^2, u^3, v)");
    const Vec3 p = ve.value(2, 5);
    CHECK(p.x == doctest::Approx(4));
    CHECK(p.y == doctest::Approx(8));
    CHECK(p.z == doctest::Approx(5));
    CHECK_THROWS_AS(VecExpr::parse("(u, v)"), ParseError);
    CHECK_THROWS_AS(VecExpr::parse("u, v, 0"), ParseError);
    CHECK_THROWS_AS(VecExpr::parse("(u, v, 0) junk"), ParseError);
}

TEST_CASE("substitution composes expressions") {
    const Expr e = Expr::parse("u^2 + v");
    const Expr composed = e.substitute(Expr::parse("2*u"), Expr::parse("u+v"));
    CHECK(composed.value(1, 3) == doctest::Approx(4 + 4));
    CHECK(composed.value(2, 1) == doctest::Approx(16 + 3));
}

TEST_CASE("round-trip: print(parse(print(parse(src)))) == print(parse(src))") {
    for (const char* src : {"u^2 + v", "-u^2*v - 3", "sin(u)*cos(v)/(1+u^2)",
                            "sqrt(9*u^2+4)", "1/sqrt(u^2+v^2)", "u^-3 + v^0.5",
                            "-(u+v)*(u-v)", "atan(u/v)", "exp(1-1/(1-u^2))"}) {
        const std::string s1 = Expr::parse(src).print();
        const std::string s2 = Expr::parse(s1).print();
        CAPTURE(src);
        CHECK(s1 == s2);
    }
}

TEST_CASE("fuzz: 10k random expressions re-parse to identical prints") {
    std::mt19937 rng(1234);
    for (int k = 0; k < 10000; ++k) {
        const Expr e = oracles::randomExpr(rng, 4);
        const std::string s1 = e.print();
        std::string s2;
        REQUIRE_NOTHROW(s2 = Expr::parse(s1).print());
        if (s1 != s2) {
            CAPTURE(s1);
            CAPTURE(s2);
            REQUIRE(s1 == s2);
        }
    }
}

TEST_CASE("property: jet derivatives match finite differences on random expressions") {
    std::mt19937 rng(999);
    int checked = 0;
    while (checked < 400) {
        const oracles::ExprDraw d = oracles::drawEvaluableExpr(rng);
        oracles::Fn2 f = [&](double u, double v) { return d.expr.value(u, v); };
        oracles::FdPartials refs;
        if (!oracles::fdPartialsReliable(f, d.u, d.v, refs)) continue;
        CAPTURE(d.expr.print());
        CAPTURE(d.u);
        CAPTURE(d.v);
        CHECK(oracles::closeRel(d.jet.du, refs.du, 1e-6));
        CHECK(oracles::closeRel(d.jet.dv, refs.dv, 1e-6));
        CHECK(oracles::closeRel(d.jet.duu, refs.duu, 1e-6));
        CHECK(oracles::closeRel(d.jet.duv, refs.duv, 1e-6));
        CHECK(oracles::closeRel(d.jet.dvv, refs.dvv, 1e-6));
        ++checked;
    }
}

TEST_CASE("evaluation is pure: repeated evaluation is bit-identical") {
    const Expr e = Expr::parse("sin(u)*exp(v)/(1+u^2)");
    const double a = e.value(0.7, -0.3);
    for (int k = 0; k < 10; ++k) CHECK(e.value(0.7, -0.3) == a);
    const Jet2 j1 = e.jet2(0.7, -0.3), j2 = e.jet2(0.7, -0.3);
    CHECK(j1.duv == j2.duv);
}
