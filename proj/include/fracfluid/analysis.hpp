#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracfluid/fracops.hpp"
#include "fracfluid/model.hpp"
#include "fracfluid/solver.hpp"

namespace fracfluid {

/// Discrete L2 norm sqrt(h sum v_i^2) and max norm of a final-time error.
struct ErrorPair {
    double l2 = 0.0;
    double linf = 0.0;
};

/// Samples `exact` at (x_i, T) and compares with the final level on all nodes.
ErrorPair error_at_final(const SolutionHistory& sol, const std::optional<SpaceTimeFunction>& exact);

/// sqrt(h sum_{i=1}^{M-1} v_i^2) over interior entries of a full-grid vector.
double discrete_l2_norm(const Eigen::Ref<const Vector<double>>& v, double h);

/// sqrt(h sum_{i=1}^{M} ((v_i - v_{i-1}) / h)^2)
double discrete_h1_seminorm(const Eigen::Ref<const Vector<double>>& v, double h);

struct H1Norm {
    double value = 0.0;
    bool seminorm_only = false;  // a2 == 0: only sqrt(a3) |v|_1 remains
};

/// sqrt(a2 ||v||_0^2 + a3 |v|_1^2) for a full-grid vector v (boundary entries included).
H1Norm discrete_h1_norm(const Eigen::Ref<const Vector<double>>& v, const ModelCoefficients& coeffs, double h);

struct ConvergenceRow {
    double tau = 0.0;
    ErrorPair errors;
    std::optional<double> order_l2;
    std::optional<double> order_linf;
    bool order_reliable = true;  // false when either error sits at round-off level
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double fixed_h = 0.0;
    Scheme scheme = Scheme::I;
    std::map<std::string, double> labels;

    /// Header "tau,l2_error,l2_order,linf_error,linf_order"; empty order cells on the first row.
    std::string to_csv() const;
};

/// Errors below this (relative to the exact solution's max) make an order meaningless.
inline constexpr double kErrorFloor = 1e-12;

using RunObserver = std::function<void(std::size_t row, const SolutionHistory&)>;

/// Marches the problem for every tau (each half of the previous one) at fixed h and
/// reports final-time errors with log2 orders. Up to `workers` marches run
/// concurrently; rows and observer calls stay in tau order.
ConvergenceReport convergence_table(const ProblemSpec& problem, Scheme scheme, const std::vector<double>& taus,
                                    double h, int workers = 1, const RunObserver& observer = {});

/// Both sides of the energy bound for a homogeneous-boundary run:
///   ||U^N||_1^2 <= ||U^0||_1^2 + sum_j b_j T^{2-g_j}/Gamma(3-g_j) ||phi2||_0^2
///                  + T/(2 eps0) max_n ||f^n||_0^2,
/// eps0 = sum_j b_j T^{1-g_j} / (2 Gamma(2-g_j)) + a1. For Scheme II f^n is replaced by
/// the half-level source (f^n + f^{n-1}) / 2.
struct StabilityAudit {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

inline constexpr double kStabilitySlack = 1e-10;

StabilityAudit stability_audit(const SolutionHistory& sol, const ProblemSpec& problem);

/// sum_{n=1}^{N} sum_{k=1}^{n} d_{n-k} v^k v^n
double l1_quadratic_form(const WeightSeqBeta<double>& d, const Eigen::Ref<const Vector<double>>& v);

/// The form above plus sum_{n=1}^{N} sum_{k=1}^{n-1} d_{n-1-k} v^k v^n.
double averaged_l1_quadratic_form(const WeightSeqBeta<double>& d, const Eigen::Ref<const Vector<double>>& v);

/// H_N = (A + A^T)/2 for the matrix A of the averaged L1 quadratic form:
/// d_0 on the diagonal and (d_{m-1} + d_m)/2 at distance m >= 1.
Matrix<double> averaged_form_toeplitz(double beta, Index size);

struct ToeplitzReport {
    double beta = 0.0;
    std::vector<Index> sizes;
    std::vector<double> log_dets;           // log det H_N
    std::vector<double> det_ratios;         // det H_N / det H_{N+1}
    std::vector<bool> positive_definite;    // per size
    double min_quadform = 0.0;              // min over samples of form(v) / ||v||^2
};

/// Unpivoted LDL^T of H_{max+1}; leading pivots give every leading minor at once.
/// A non-positive pivot marks that size and all larger ones as not positive definite.
ToeplitzReport toeplitz_study(double beta, const std::vector<Index>& sizes, int samples = 200,
                              std::uint64_t seed = 42);

inline constexpr Index kToeplitzMaxSize = 2000;

enum class CaputoFormula { L2AtN, L2AtHalf, L1 };

std::string to_string(CaputoFormula f);

struct OperatorRates {
    std::vector<double> taus;
    std::vector<double> errors;
    std::vector<double> rates;  // one fewer than taus
};

/// Applies one discrete Caputo formula to samples g(t_k) on [0, t_final] for each
/// tau and compares with the analytic derivative: at t_final for L2AtN and L1,
/// at t_final - tau/2 for L2AtHalf.
OperatorRates operator_convergence_check(double order, CaputoFormula formula, const TimeFunction& g,
                                         const TimeFunction& caputo_g, const std::vector<double>& taus,
                                         double t_final = 1.0, double initial_slope = 0.0);

/// log2(previous / current) for consecutive entries.
std::vector<double> log2_rates(const std::vector<double>& errors);

/// Throws UsageError unless each tau is half of the previous one (relative 1e-9).
void require_halving(const std::vector<double>& taus);

}  // namespace fracfluid
