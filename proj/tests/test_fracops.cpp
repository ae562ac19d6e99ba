#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fracfluid/errors.hpp"
#include "fracfluid/fracops.hpp"
#include "fracfluid/random.hpp"

using namespace fracfluid;
using doctest::Approx;

namespace {

// samples g on t_k = k tau, k = 0..n, into a one-point history
IncrementHistory<double> sampled_history(const TimeFunction& g, double tau, Index n) {
    IncrementHistory<double> h(1, n, tau);
    Vector<double> prev(1), cur(1);
    prev[0] = g(0.0);
    for (Index k = 1; k <= n; ++k) {
        cur[0] = g(double(k) * tau);
        h.push_difference(cur, prev);
        prev = cur;
    }
    return h;
}

}  // namespace

TEST_CASE("gamma weights follow the closed form") {
    CHECK(gamma_weights(1.5, 1).weights[0] == 1.0);

    const auto a = gamma_weights(1.5, 3);
    REQUIRE(a.size() == 3);
    CHECK(a[0] == Approx(1.0).epsilon(1e-15));
    CHECK(a[1] == Approx(0.414213562373095049).epsilon(1e-14));
    CHECK(a[2] == Approx(0.317837245195782245).epsilon(1e-14));

    // close to the upper end every weight after the first is tiny but the sequence still decreases
    const auto near = gamma_weights(1.999, 50);
    CHECK(near[0] == 1.0);
    for (Index k = 1; k < near.size(); ++k) {
        CHECK(near[k] < near[k - 1]);
        CHECK(near[k] > 0.0);
        CHECK(near[k] == Approx(std::pow(k + 1.0, 0.001) - std::pow(double(k), 0.001)).epsilon(1e-12));
    }
}

TEST_CASE("weights match the literal formula far into the tail") {
    const auto d = beta_weights(0.37, 10001);
    for (Index k : {1, 7, 99, 1000, 10000}) {
        // long double keeps the direct difference accurate enough for comparison
        const long double p = 1.0L - 0.37L;
        const long double want = std::pow((long double)(k + 1), p) - std::pow((long double)k, p);
        CHECK(d[k] == Approx(double(want)).epsilon(1e-12));
    }
}

TEST_CASE("orders on or outside the open interval are rejected") {
    for (double bad : {1.0, 2.0, 0.5, 2.5}) {
        try {
            gamma_weights(bad, 3);
            FAIL("accepted gamma = " << bad);
        } catch (const DomainError& e) {
            CHECK(e.parameter() == "gamma");
        }
    }
    for (double bad : {0.0, 1.0, -0.1}) CHECK_THROWS_AS(beta_weights(bad, 3), DomainError);
    CHECK_THROWS_AS(beta_weights(0.5, 0), DomainError);
}

TEST_CASE("beta weights") {
    CHECK(beta_weights(0.6, 1).weights[0] == 1.0);

    const auto d = beta_weights(0.5, 3);
    CHECK(d[1] == Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
    CHECK(d[2] == Approx(std::sqrt(3.0) - std::sqrt(2.0)).epsilon(1e-15));

    // same closed form when 2 - gamma == 1 - beta
    const auto a = gamma_weights(1.5, 200);
    const auto b = beta_weights(0.5, 200);
    CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() == 0.0);

    const auto t = beta_weights(0.3, 4);
    const double telescoped = (t[0] - t[1]) + (t[1] - t[2]) + (t[2] - t[3]) + t[3];
    CHECK(std::abs(telescoped - 1.0) < 1e-15);
}

TEST_CASE("weight properties hold across the order range") {
    for (auto [beta, n] : {std::pair{0.6, 100}, {0.01, 1000}, {0.99, 1000}}) {
        CAPTURE(beta);
        const auto r = check_weight_properties(beta, n);
        CHECK(r.all());
        CHECK(r.telescoping_residual < 1e-12);
        CHECK(r.min_convexity >= -1e-15);
        CHECK(r.min_weight > 0.0);
    }
    CHECK_THROWS_AS(check_weight_properties(0.5, 1), DomainError);
}

TEST_CASE("a weight formula with a shifted index fails the telescoping check") {
    Vector<double> d(40);
    for (Index k = 0; k < d.size(); ++k) d[k] = std::pow(k + 2.0, 0.4) - std::pow(k + 1.0, 0.4);
    const auto r = check_weight_properties<double>(d);
    CHECK_FALSE(r.telescoping);
    CHECK_FALSE(r.unit_leading);
    CHECK_FALSE(r.all());
}

TEST_CASE("increment history stores scaled differences") {
    IncrementHistory<double> h(3, 2, 0.5);
    Vector<double> u0(3), u1(3);
    u0 << 1, 2, 3;
    u1 << 2, 2, 1;
    h.push_difference(u1, u0);
    CHECK(h.levels() == 1);
    CHECK(h.level(1)[0] == 2.0);
    CHECK(h.level(1)[1] == 0.0);
    CHECK(h.level(1)[2] == -4.0);

    Vector<double> wrong(2);
    CHECK_THROWS_AS(h.push(wrong), ShapeError);
    h.push(u0);
    CHECK_THROWS_AS(h.push(u0), ShapeError);  // capacity 2
    CHECK_THROWS_AS(IncrementHistory<double>(3, 2, 0.0), DomainError);
}

TEST_CASE("L2 bracket") {
    const auto a = gamma_weights(1.7, 10);
    Vector<double> slope(2);
    slope << 0.3, -1.0;

    SUBCASE("single level reduces to the increment minus the slope") {
        IncrementHistory<double> h(2, 4, 0.1);
        Vector<double> g(2);
        g << 1.5, 2.0;
        h.push(g);
        const auto b = l2_bracket(a, h, slope);
        CHECK(b[0] == Approx(1.5 - 0.3));
        CHECK(b[1] == Approx(2.0 + 1.0));
    }
    SUBCASE("constant field gives zero") {
        IncrementHistory<double> h(2, 4, 0.1);
        for (int k = 0; k < 4; ++k) h.push(Vector<double>::Zero(2));
        CHECK(l2_bracket(a, h, Vector<double>::Zero(2)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("slope length must match") {
        IncrementHistory<double> h(2, 4, 0.1);
        h.push(Vector<double>::Ones(2));
        CHECK_THROWS_AS(l2_bracket(a, h, Vector<double>::Zero(3)), ShapeError);
    }
}

TEST_CASE("L2 bracket of t^3 approximates the Caputo derivative") {
    const double tau = 1.0 / 320;
    const auto h = sampled_history([](double t) { return t * t * t; }, tau, 320);
    const double v = l2_scale(1.5, tau) * l2_bracket(gamma_weights(1.5, 320), h, Vector<double>::Zero(1))[0];
    // reference value of the discrete formula evaluated with 30-digit arithmetic
    CHECK(v == Approx(4.50270051164012241).epsilon(1e-12));
    const double exact = 6.0 / std::tgamma(2.5);
    CHECK(exact == Approx(4.51351666838205030).epsilon(1e-14));
    CHECK(std::abs(v - exact) < 4.0 * tau);
}

TEST_CASE("L1 sums") {
    const auto d = beta_weights(0.4, 20);

    SUBCASE("first level") {
        IncrementHistory<double> h(2, 5, 0.1);
        Vector<double> g(2);
        g << 3.0, -1.0;
        h.push(g);
        CHECK(l1_bracket(d, h)[0] == 3.0);
        CHECK(averaged_l1_bracket(d, h)[1] == Approx(-0.5));
    }
    SUBCASE("linear field telescopes") {
        const Index n = 17;
        const auto h = sampled_history([](double t) { return t; }, 0.25, n);
        const double want = 0.5 * (std::pow(double(n), 0.6) + std::pow(double(n - 1), 0.6));
        CHECK(averaged_l1_bracket(d, h)[0] == Approx(want).epsilon(1e-13));
        CHECK(l1_bracket(d, h)[0] == Approx(std::pow(double(n), 0.6)).epsilon(1e-13));
    }
    SUBCASE("zero increments") {
        IncrementHistory<double> h(3, 5, 0.1);
        for (int k = 0; k < 5; ++k) h.push(Vector<double>::Zero(3));
        CHECK(averaged_l1_bracket(d, h).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("history or weights too short") {
        IncrementHistory<double> h(1, 30, 0.1);
        for (int k = 0; k < 25; ++k) h.push(Vector<double>::Ones(1));
        CHECK_THROWS_AS(l1_bracket(d, h), ShapeError);
        CHECK_THROWS_AS(weighted_l1_sum(d, h, 10, 11), ShapeError);
    }
}

TEST_CASE("L1 bracket of t^3") {
    const double tau = 1.0 / 320;
    const auto h = sampled_history([](double t) { return t * t * t; }, tau, 320);
    const double v = l1_scale(0.6, tau) * l1_bracket(beta_weights(0.6, 320), h)[0];
    CHECK(v == Approx(2.01209390937003586).epsilon(1e-12));
    CHECK(std::abs(v - 6.0 / std::tgamma(3.4)) < tau);
}

TEST_CASE("quadrature oracle") {
    CHECK(caputo_quadrature_oracle([](double) { return 4.0; }, 0.3, 1.0, 100) == Approx(0.0).epsilon(1e-12));
    CHECK(caputo_quadrature_oracle([](double) { return 4.0; }, 1.6, 1.0, 100) == Approx(0.0).epsilon(1e-12));

    const double lin = caputo_quadrature_oracle([](double t) { return t; }, 0.4, 1.0, 64);
    CHECK(lin == Approx(1.11917495407012226).epsilon(1e-10));

    const auto cube = [](double t) { return t * t * t; };
    const double exact = 4.51351666838205030;
    const double c1 = caputo_quadrature_oracle(cube, 1.5, 1.0, 2000, [](double t) { return 6.0 * t; });
    const double c2 = caputo_quadrature_oracle(cube, 1.5, 1.0, 4000, [](double t) { return 6.0 * t; });
    CHECK(std::abs(c2 - exact) < 1e-5);
    // the kernel singularity limits the midpoint rule to order 2 - (gamma - 1)
    CHECK(std::log2((c1 - exact) / (c2 - exact)) == Approx(1.5).epsilon(0.05));
    const double fd = caputo_quadrature_oracle(cube, 1.5, 1.0, 4000);
    CHECK(std::abs(fd - c2) < 1e-8);

    CHECK_THROWS_AS(caputo_quadrature_oracle(cube, 1.0, 1.0, 10), DomainError);
}

TEST_CASE("discrete formulas converge to the quadrature oracle") {
    const auto g = [](double t) { return std::exp(t) + t * t; };
    const double t = 1.0;
    const double ref_g = caputo_quadrature_oracle(g, 1.4, t, 200000, [](double s) { return std::exp(s) + 2.0; });
    const double ref_b = caputo_quadrature_oracle(g, 0.35, t, 200000, [](double s) { return std::exp(s) + 2.0 * s; });

    std::vector<double> eg, eb;
    for (Index n : {40, 80, 160, 320}) {
        const double tau = t / double(n);
        const auto h = sampled_history(g, tau, n);
        Vector<double> slope(1);
        slope[0] = 1.0;  // g'(0)
        eg.push_back(std::abs(l2_scale(1.4, tau) * l2_bracket(gamma_weights(1.4, n), h, slope)[0] - ref_g));
        eb.push_back(std::abs(l1_scale(0.35, tau) * l1_bracket(beta_weights(0.35, n), h)[0] - ref_b));
    }
    for (std::size_t k = 1; k < eg.size(); ++k) {
        CHECK(std::log2(eg[k - 1] / eg[k]) >= 0.9);
        CHECK(std::log2(eb[k - 1] / eb[k]) >= 1.9 - 0.35);
    }
}

TEST_CASE("L1 quadratic forms stay nonnegative on random vectors") {
    Lcg64 rng(42);
    for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto d = beta_weights(beta, 300);
        for (int s = 0; s < 40; ++s) {
            const Index n = 1 + Index(rng() % 300);
            const Vector<double> v = random_vector(rng, n);
            double plain = 0.0, averaged = 0.0;
            for (Index i = 1; i <= n; ++i)
                for (Index k = 1; k <= i; ++k) {
                    plain += d[i - k] * v[k - 1] * v[i - 1];
                    if (k < i) averaged += d[i - 1 - k] * v[k - 1] * v[i - 1];
                }
            averaged += plain;
            CHECK(plain >= -1e-10 * v.squaredNorm());
            CHECK(averaged >= -1e-10 * v.squaredNorm());
        }
    }
}

TEST_CASE("random generator is the documented LCG") {
    Lcg64 rng(1);
    // x1 = a * 1 + c mod 2^64
    CHECK(rng() == 6364136223846793005ULL + 1442695040888963407ULL);
    Lcg64 again(7), other(7);
    for (int k = 0; k < 5; ++k) CHECK(uniform_pm1(again) == uniform_pm1(other));
    Lcg64 r(3);
    for (int k = 0; k < 1000; ++k) {
        const double u = uniform_pm1(r);
        CHECK(u >= -1.0);
        CHECK(u < 1.0);
    }
}
