#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fracfluid {

using SpaceFunction = std::function<double(double)>;
using TimeFunction = std::function<double(double)>;
using SpaceTimeFunction = std::function<double(double, double)>;

/// One weighted fractional term: weight * D_t^order u.
struct FractionalTerm {
    double weight = 0.0;
    double order = 0.0;

    bool operator==(const FractionalTerm&) const = default;
};

/// Coefficients of
///   sum_j b_j D^{gamma_j} u + a1 u_t + sum_l c_l D^{alpha_l} u + a2 u
///     = a3 u_xx + a4 D^beta u_xx + f
/// with 1 < gamma_j < 2 and 0 < alpha_l, beta < 1.
struct ModelCoefficients {
    double a1 = 1.0;
    double a2 = 0.0;
    double a3 = 1.0;
    double a4 = 0.0;
    std::vector<FractionalTerm> gamma_terms;  // (b_j, gamma_j), gamma strictly increasing
    std::vector<FractionalTerm> alpha_terms;  // (c_l, alpha_l), alpha strictly increasing
    double beta = 0.5;

    /// Throws DomainError naming the first violated constraint.
    void validate() const;

    bool operator==(const ModelCoefficients&) const = default;
};

/// Initial-boundary value problem on [0,L] x (0,T] with Dirichlet data.
/// Treated as immutable once built.
struct ProblemSpec {
    std::string name;
    ModelCoefficients coeffs;
    double L = 1.0;
    double T = 1.0;
    SpaceFunction phi1;      // u(x,0)
    SpaceFunction phi2;      // u_t(x,0)
    TimeFunction g_left;     // u(0,t)
    TimeFunction g_right;    // u(L,t)
    SpaceTimeFunction f;     // source
    std::optional<SpaceTimeFunction> exact;
    std::vector<std::string> warnings;
};

/// Validates coefficients and extents and records a warning when the initial
/// data do not match the boundary data at the corners (tolerance 1e-12).
ProblemSpec make_problem(std::string name, ModelCoefficients coeffs, double L, double T, SpaceFunction phi1,
                         SpaceFunction phi2, TimeFunction g_left, TimeFunction g_right, SpaceTimeFunction f,
                         std::optional<SpaceTimeFunction> exact = std::nullopt);

inline constexpr double kCornerTolerance = 1e-12;

/// Generalized Oldroyd-B parameters with magnetic body force K = sigma B0^2 / rho.
struct OldroydBParams {
    double lambda_relax = 0.0;
    double theta_retard = 0.0;
    double alpha = 0.5;
    double beta = 0.5;
    double nu = 1.0;
    double K = 0.0;
    /// Use lambda, theta as written in the constitutive law instead of lambda^alpha, theta^beta.
    bool raw_times = false;

    void validate() const;
};

/// (1 + l D^alpha) u_t = nu (1 + m D^beta) u_xx - K (1 + l D^alpha) u with
/// l = lambda^alpha, m = theta^beta (or the raw times), rewritten in the general form.
ModelCoefficients map_oldroyd_mhd(const OldroydBParams& p);

/// Exact solution (t^3 + 1) sin(pi x / L) with the matching source term for any coefficient set.
ProblemSpec manufactured_problem(const ModelCoefficients& coeffs, double L = 1.0, double T = 1.0);

/// All unit coefficients with one gamma, one alpha term and exact solution (t^3+1) sin(pi x).
ProblemSpec example1_problem(double alpha, double beta, double gamma);

/// Couette start-up: fluid at rest, u(0,t) = 0, u(1,t) = amplitude * t^p_exp on [0,1] x (0,T].
ProblemSpec couette_problem(double p_exp, const OldroydBParams& params, double T = 2.0, double amplitude = 2.0);

/// The MHD Couette flow with u(1,t) = 2 t^p on (0,2].
ProblemSpec example2_problem(double p_exp, const OldroydBParams& params);

}  // namespace fracfluid
