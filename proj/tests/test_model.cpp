#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fracfluid/errors.hpp"
#include "fracfluid/model.hpp"

using namespace fracfluid;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("oldroyd-B with magnetic field maps onto the general coefficients") {
    const auto c = map_oldroyd_mhd({3.0, 4.0, 0.5, 0.6, 1.0, 2.0, false});
    CHECK(c.a1 == 1.0);
    CHECK(c.a2 == 2.0);
    CHECK(c.a3 == 1.0);
    CHECK(c.a4 == Approx(std::pow(4.0, 0.6)));
    REQUIRE(c.gamma_terms.size() == 1);
    CHECK(c.gamma_terms[0].weight == Approx(std::sqrt(3.0)));
    CHECK(c.gamma_terms[0].order == 1.5);
    REQUIRE(c.alpha_terms.size() == 1);
    CHECK(c.alpha_terms[0].weight == Approx(2.0 * std::sqrt(3.0)));
    CHECK(c.alpha_terms[0].order == 0.5);
    CHECK(c.beta == 0.6);
}

TEST_CASE("degenerate material limits") {
    SUBCASE("no relaxation, retardation or field") {
        const auto c = map_oldroyd_mhd({0.0, 0.0, 0.4, 0.7, 1.0, 0.0, false});
        CHECK(c.a1 == 1.0);
        CHECK(c.a3 == 1.0);
        CHECK(c.a2 == 0.0);
        CHECK(c.a4 == 0.0);
        CHECK(c.gamma_terms[0].weight == 0.0);
        CHECK(c.alpha_terms[0].weight == 0.0);
    }
    SUBCASE("unit times without field") {
        const auto c = map_oldroyd_mhd({1.0, 1.0, 0.3, 0.8, 1.0, 0.0, false});
        CHECK(c.gamma_terms[0].weight == 1.0);
        CHECK(c.alpha_terms[0].weight == 0.0);
        CHECK(c.a2 == 0.0);
        CHECK(c.a4 == 1.0);
    }
    SUBCASE("raw times skip the powers") {
        const auto c = map_oldroyd_mhd({3.0, 4.0, 0.5, 0.6, 2.0, 1.0, true});
        CHECK(c.gamma_terms[0].weight == 3.0);
        CHECK(c.a4 == 8.0);
    }
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(map_oldroyd_mhd({-1.0, 4.0, 0.5, 0.6, 1.0, 2.0, false}), DomainError);
    CHECK_THROWS_AS(map_oldroyd_mhd({1.0, 4.0, 1.0, 0.6, 1.0, 2.0, false}), DomainError);
    CHECK_THROWS_AS(map_oldroyd_mhd({1.0, 4.0, 0.5, 0.6, 0.0, 2.0, false}), DomainError);

    ModelCoefficients c;
    c.gamma_terms = {{1.0, 1.7}, {1.0, 1.3}};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.gamma_terms = {{1.0, 1.3}, {1.0, 1.7}};
    CHECK_NOTHROW(c.validate());
    c.a1 = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.a1 = 1.0;
    c.a2 = -0.1;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.a2 = 0.0;
    c.a4 = 0.0;
    CHECK_NOTHROW(c.validate());
    c.alpha_terms = {{-1.0, 0.5}};
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("manufactured problem data") {
    const auto p = example1_problem(0.7, 0.6, 1.5);
    for (double x : {0.0, 0.2, 0.5, 0.9}) {
        CHECK(p.f(x, 0.0) == Approx((1.0 + pi * pi) * std::sin(pi * x)).epsilon(1e-14));
        CHECK((*p.exact)(x, 0.0) == Approx(p.phi1(x)).epsilon(1e-15));
        CHECK(p.phi2(x) == 0.0);
    }
    CHECK((*p.exact)(0.5, 1.0) == Approx(2.0).epsilon(1e-15));
    CHECK(p.g_left(0.3) == 0.0);
    CHECK(p.g_right(0.3) == 0.0);
    CHECK(p.warnings.empty());
}

TEST_CASE("manufactured source makes the exact solution satisfy the equation") {
    ModelCoefficients c;
    c.a1 = 1.3;
    c.a2 = 0.4;
    c.a3 = 0.7;
    c.a4 = 0.2;
    c.gamma_terms = {{0.5, 1.2}, {1.1, 1.8}};
    c.alpha_terms = {{0.9, 0.25}};
    c.beta = 0.45;
    const double L = 2.0;
    const auto p = manufactured_problem(c, L, 1.0);
    const double k = pi / L;
    auto caputo_cubic = [](double order, double t) { return 6.0 * std::pow(t, 3.0 - order) / std::tgamma(4.0 - order); };
    for (double x : {0.3, 1.0, 1.7})
        for (double t : {0.0, 0.1, 0.6, 1.0}) {
            const double s = std::sin(k * x);
            double lhs = c.a1 * 3.0 * t * t * s + c.a2 * (t * t * t + 1.0) * s;
            for (const auto& g : c.gamma_terms) lhs += g.weight * caputo_cubic(g.order, t) * s;
            for (const auto& a : c.alpha_terms) lhs += a.weight * caputo_cubic(a.order, t) * s;
            const double uxx = -k * k * (t * t * t + 1.0) * s;
            const double db_uxx = -k * k * caputo_cubic(c.beta, t) * s;
            const double rhs = c.a3 * uxx + c.a4 * db_uxx + p.f(x, t);
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
}

TEST_CASE("couette problem") {
    const OldroydBParams base{3.0, 4.0, 0.5, 0.6, 1.0, 2.0, false};
    const auto p = example2_problem(1.0, base);
    CHECK(p.T == 2.0);
    CHECK(p.g_right(0.0) == 0.0);
    CHECK(p.g_right(2.0) == Approx(4.0));
    CHECK(p.g_left(1.3) == 0.0);
    CHECK(p.f(0.4, 1.0) == 0.0);
    CHECK_FALSE(p.exact.has_value());
    CHECK(p.warnings.empty());

    const auto step = example2_problem(0.0, base);
    CHECK(step.g_right(0.5) == 2.0);
    REQUIRE(step.warnings.size() == 1);
    CHECK(step.warnings[0].find("x=L") != std::string::npos);
}

TEST_CASE("construction is deterministic") {
    const auto a = example1_problem(0.5, 0.3, 1.6);
    const auto b = example1_problem(0.5, 0.3, 1.6);
    CHECK(a.coeffs == b.coeffs);
    for (double x : {0.1, 0.7})
        for (double t : {0.2, 0.9}) CHECK(a.f(x, t) == b.f(x, t));
}

TEST_CASE("make_problem validates extents and data") {
    ModelCoefficients c;
    auto zero = [](double) { return 0.0; };
    auto f = [](double, double) { return 0.0; };
    CHECK_THROWS_AS(make_problem("x", c, 0.0, 1.0, zero, zero, zero, zero, f), DomainError);
    CHECK_THROWS_AS(make_problem("x", c, 1.0, -1.0, zero, zero, zero, zero, f), DomainError);
    CHECK_THROWS_AS(make_problem("x", c, 1.0, 1.0, nullptr, zero, zero, zero, f), UsageError);
}
