#include "fracfluid/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracfluid/errors.hpp"

namespace fracfluid {

namespace {

void require(bool ok, const char* param, const std::string& what) {
    if (!ok) throw DomainError(param, what);
}

void validate_terms(const std::vector<FractionalTerm>& terms, double lo, double hi, const char* name) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        require(t.weight >= 0.0 && std::isfinite(t.weight), name, "weights must be finite and >= 0");
        require(t.order > lo && t.order < hi, name,
                "order " + std::to_string(t.order) + " outside (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
        if (i > 0) require(terms[i - 1].order < t.order, name, "orders must be strictly increasing");
    }
}

}  // namespace

void ModelCoefficients::validate() const {
    require(a1 > 0.0 && std::isfinite(a1), "a1", "must be > 0");
    require(a2 >= 0.0 && std::isfinite(a2), "a2", "must be >= 0");
    require(a3 > 0.0 && std::isfinite(a3), "a3", "must be > 0");
    require(a4 >= 0.0 && std::isfinite(a4), "a4", "must be >= 0");
    validate_terms(gamma_terms, 1.0, 2.0, "gamma");
    validate_terms(alpha_terms, 0.0, 1.0, "alpha");
    require(beta > 0.0 && beta < 1.0, "beta", "order " + std::to_string(beta) + " outside (0, 1)");
}

ProblemSpec make_problem(std::string name, ModelCoefficients coeffs, double L, double T, SpaceFunction phi1,
                         SpaceFunction phi2, TimeFunction g_left, TimeFunction g_right, SpaceTimeFunction f,
                         std::optional<SpaceTimeFunction> exact) {
    coeffs.validate();
    require(L > 0.0 && std::isfinite(L), "L", "domain length must be > 0");
    require(T > 0.0 && std::isfinite(T), "T", "final time must be > 0");
    if (!phi1 || !phi2 || !g_left || !g_right || !f) throw UsageError("problem data functions must all be set");

    ProblemSpec p{std::move(name), std::move(coeffs), L, T, std::move(phi1), std::move(phi2), std::move(g_left),
                  std::move(g_right), std::move(f), std::move(exact), {}};

    const double left = p.phi1(0.0) - p.g_left(0.0);
    const double right = p.phi1(L) - p.g_right(0.0);
    if (std::abs(left) > kCornerTolerance) {
        std::ostringstream os;
        os << "corner incompatibility at x=0: phi1(0) - g_left(0) = " << left;
        p.warnings.push_back(os.str());
    }
    if (std::abs(right) > kCornerTolerance) {
        std::ostringstream os;
        os << "corner incompatibility at x=L: phi1(L) - g_right(0) = " << right;
        p.warnings.push_back(os.str());
    }
    return p;
}

void OldroydBParams::validate() const {
    require(lambda_relax >= 0.0, "lambda", "relaxation time must be >= 0");
    require(theta_retard >= 0.0, "theta", "retardation time must be >= 0");
    require(alpha > 0.0 && alpha < 1.0, "alpha", "order outside (0, 1)");
    require(beta > 0.0 && beta < 1.0, "beta", "order outside (0, 1)");
    require(nu > 0.0, "nu", "kinematic viscosity must be > 0");
    require(K >= 0.0, "K", "magnetic parameter must be >= 0");
}

ModelCoefficients map_oldroyd_mhd(const OldroydBParams& p) {
    p.validate();
    const double relax = p.raw_times ? p.lambda_relax : std::pow(p.lambda_relax, p.alpha);
    const double retard = p.raw_times ? p.theta_retard : std::pow(p.theta_retard, p.beta);

    ModelCoefficients c;
    // relax * D^alpha u_t is the Caputo derivative of order 1 + alpha
    c.gamma_terms = {{relax, 1.0 + p.alpha}};
    c.a1 = 1.0;
    c.alpha_terms = {{p.K * relax, p.alpha}};
    c.a2 = p.K;
    c.a3 = p.nu;
    c.a4 = p.nu * retard;
    c.beta = p.beta;
    c.validate();
    return c;
}

ProblemSpec manufactured_problem(const ModelCoefficients& coeffs, double L, double T) {
    constexpr double pi = std::numbers::pi;
    const double k = pi / L;
    const double g4 = std::tgamma(4.0);

    // time factors t^{3-order} scaled by weight * Gamma(4) / Gamma(4 - order)
    std::vector<FractionalTerm> powers;
    for (const auto& term : coeffs.gamma_terms)
        powers.push_back({term.weight * g4 / std::tgamma(4.0 - term.order), 3.0 - term.order});
    for (const auto& term : coeffs.alpha_terms)
        powers.push_back({term.weight * g4 / std::tgamma(4.0 - term.order), 3.0 - term.order});
    powers.push_back({coeffs.a4 * k * k * g4 / std::tgamma(4.0 - coeffs.beta), 3.0 - coeffs.beta});

    auto f = [a1 = coeffs.a1, cubic = coeffs.a2 + coeffs.a3 * k * k, powers, k](double x, double t) {
        double time = a1 * 3.0 * t * t + cubic * (t * t * t + 1.0);
        for (const auto& p : powers) time += p.weight * std::pow(t, p.order);
        return std::sin(k * x) * time;
    };
    auto exact = [k](double x, double t) { return (t * t * t + 1.0) * std::sin(k * x); };

    return make_problem(
        "manufactured", coeffs, L, T, [k](double x) { return std::sin(k * x); }, [](double) { return 0.0; },
        [](double) { return 0.0; }, [](double) { return 0.0; }, f, SpaceTimeFunction(exact));
}

ProblemSpec example1_problem(double alpha, double beta, double gamma) {
    ModelCoefficients c;
    c.a1 = c.a2 = c.a3 = c.a4 = 1.0;
    c.gamma_terms = {{1.0, gamma}};
    c.alpha_terms = {{1.0, alpha}};
    c.beta = beta;
    auto p = manufactured_problem(c, 1.0, 1.0);
    p.name = "example1";
    return p;
}

ProblemSpec couette_problem(double p_exp, const OldroydBParams& params, double T, double amplitude) {
    require(p_exp >= 0.0 && std::isfinite(p_exp), "p", "boundary power must be >= 0");
    auto coeffs = map_oldroyd_mhd(params);
    auto zero = [](double) { return 0.0; };
    auto right = [p_exp, amplitude](double t) { return amplitude * std::pow(t, p_exp); };
    return make_problem("couette", coeffs, 1.0, T, zero, zero, zero, right, [](double, double) { return 0.0; });
}

ProblemSpec example2_problem(double p_exp, const OldroydBParams& params) {
    auto p = couette_problem(p_exp, params, 2.0, 2.0);
    p.name = "example2";
    return p;
}

}  // namespace fracfluid
