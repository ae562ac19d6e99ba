#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fracfluid/fracops.hpp"
#include "fracfluid/model.hpp"

namespace fracfluid {

/// Scheme I is the first-order implicit scheme centred at t_n; Scheme II is the
/// mixed L scheme centred at t_{n-1/2}.
enum class Scheme { I, II };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Uniform space-time grid: x_i = i h (i = 0..M), t_n = n tau (n = 0..N).
struct GridSpec {
    Index M = 2;
    Index N = 1;
    double L = 1.0;
    double T = 1.0;
    double h = 0.5;
    double tau = 1.0;

    static GridSpec make(double L, double T, Index M, Index N);
    /// Grid for a problem; M = round(L/h), N = round(T/tau), both required to be integral.
    static GridSpec from_steps(double L, double T, double h, double tau);

    double x(Index i) const { return double(i) * h; }
    double t(Index n) const { return double(n) * tau; }
    Index interior() const { return M - 1; }
};

/// Constant-coefficient symmetric tridiagonal matrix: diag on the main
/// diagonal, -off on both neighbours.
struct Tridiagonal {
    double diag = 1.0;
    double off = 0.0;
    Index size = 0;

    /// diag - 2 off; positive iff the matrix is strictly diagonally dominant.
    double dominance_margin() const { return diag - 2.0 * off; }
};

/// Solves B x = rhs by forward elimination and back substitution. Refuses
/// matrices that are not strictly diagonally dominant and checks the residual
/// ||Bx - rhs||_inf <= 1e-10 (||rhs||_inf + 1).
Vector<double> thomas_solve(const Tridiagonal& tri, const Eigen::Ref<const Vector<double>>& rhs);

inline constexpr double kThomasResidualTolerance = 1e-10;

/// tau-dependent factors mu_{1,j}, mu_{2,l}, mu_3 and weight sequences shared
/// by every step of a march.
struct Discretization {
    Discretization(const ProblemSpec& problem, const GridSpec& grid);

    const ProblemSpec* problem;
    GridSpec grid;
    std::vector<double> mu1;                      // per gamma term
    std::vector<double> mu2;                      // per alpha term
    double mu3 = 0.0;
    std::vector<WeightSeqGamma<double>> gamma_w;  // length N each
    std::vector<WeightSeqBeta<double>> alpha_w;
    WeightSeqBeta<double> beta_w;
    Vector<double> x;                             // grid nodes 0..M
    Vector<double> phi2;                          // initial slope on all nodes
    Matrix<double> source;                        // f(x_i, t_n), interior nodes by levels 0..N
};

Tridiagonal assemble_scheme1(const ModelCoefficients& coeffs, const GridSpec& grid);
Tridiagonal assemble_scheme2(const ModelCoefficients& coeffs, const GridSpec& grid);
Tridiagonal assemble(Scheme scheme, const ModelCoefficients& coeffs, const GridSpec& grid);

/// Full space-time field. levels.col(n) holds U^n on all M+1 nodes; the
/// increment history holds (U^k - U^{k-1}) / tau for k = 1..filled-1.
struct SolutionHistory {
    GridSpec grid;
    Scheme scheme = Scheme::I;
    Matrix<double> levels;
    IncrementHistory<double> increments;
    Index filled = 0;  // number of levels written, 0..N+1

    /// History with level 0 set from phi1.
    static SolutionHistory start(const ProblemSpec& problem, const GridSpec& grid, Scheme scheme);

    auto level(Index n) const { return levels.col(n); }
    auto final_level() const { return levels.col(grid.N); }
};

/// Right-hand side of the level-n system of Scheme I (interior nodes 1..M-1).
/// Uses levels 0..n-1 and increments 1..n-1 of `state`.
Vector<double> rhs_scheme1(const Discretization& disc, const SolutionHistory& state, Index n);

/// Right-hand side of the level-n system of Scheme II.
Vector<double> rhs_scheme2(const Discretization& disc, const SolutionHistory& state, Index n);

/// Marches levels 1..N. Deterministic for identical inputs.
SolutionHistory march(const ProblemSpec& problem, const GridSpec& grid, Scheme scheme);

/// Builds the whole space-time system from the scheme equations written out
/// term by term, without any time-marching reuse, and solves it by dense LU
/// with partial pivoting. Limited to (M-1) N <= 2000 unknowns.
SolutionHistory dense_oracle_solve(const ProblemSpec& problem, const GridSpec& grid, Scheme scheme);

inline constexpr Index kDenseOracleLimit = 2000;

}  // namespace fracfluid
