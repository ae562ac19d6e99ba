#include "fracfluid/solver.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "fracfluid/errors.hpp"

namespace fracfluid {

std::string to_string(Scheme s) { return s == Scheme::I ? "I" : "II"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "I" || s == "1" || s == "i") return Scheme::I;
    if (s == "II" || s == "2" || s == "ii") return Scheme::II;
    throw UsageError("unknown scheme '" + s + "' (expected I or II)");
}

GridSpec GridSpec::make(double L, double T, Index M, Index N) {
    if (M < 2) throw DomainError("M", "need at least two spatial intervals");
    if (N < 1) throw DomainError("N", "need at least one time step");
    if (!(L > 0.0) || !(T > 0.0)) throw DomainError("L/T", "extents must be positive");
    return GridSpec{M, N, L, T, L / double(M), T / double(N)};
}

GridSpec GridSpec::from_steps(double L, double T, double h, double tau) {
    if (!(h > 0.0)) throw DomainError("h", "must be positive");
    if (!(tau > 0.0)) throw DomainError("tau", "must be positive");
    const double m = L / h;
    const double n = T / tau;
    const auto M = Index(std::llround(m));
    const auto N = Index(std::llround(n));
    if (std::abs(m - double(M)) > 1e-9 * m) throw DomainError("h", "L/h is not an integer");
    if (std::abs(n - double(N)) > 1e-9 * n) throw DomainError("tau", "T/tau is not an integer");
    return make(L, T, M, N);
}

Vector<double> thomas_solve(const Tridiagonal& tri, const Eigen::Ref<const Vector<double>>& rhs) {
    if (!(tri.dominance_margin() > 0.0) || !(tri.diag > 0.0) || tri.off < 0.0)
        throw SolverError("thomas_solve: matrix is not strictly diagonally dominant (diag=" +
                          std::to_string(tri.diag) + ", off=" + std::to_string(tri.off) + ")");
    if (rhs.size() != tri.size) throw ShapeError("thomas_solve: rhs length does not match matrix size");

    const Index n = tri.size;
    Vector<double> x(n);
    if (n == 0) return x;

    // sub- and super-diagonal entries are both -off
    Vector<double> c(n);
    const double lower = -tri.off;
    double pivot = tri.diag;
    c[0] = lower / pivot;
    x[0] = rhs[0] / pivot;
    for (Index i = 1; i < n; ++i) {
        pivot = tri.diag - lower * c[i - 1];
        c[i] = lower / pivot;
        x[i] = (rhs[i] - lower * x[i - 1]) / pivot;
    }
    for (Index i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];

    double residual = 0.0;
    for (Index i = 0; i < n; ++i) {
        double bx = tri.diag * x[i];
        if (i > 0) bx -= tri.off * x[i - 1];
        if (i + 1 < n) bx -= tri.off * x[i + 1];
        residual = std::max(residual, std::abs(bx - rhs[i]));
    }
    const double bound = kThomasResidualTolerance * (rhs.lpNorm<Eigen::Infinity>() + 1.0);
    if (!(residual <= bound))
        throw SolverError("thomas_solve: residual " + std::to_string(residual) + " exceeds " + std::to_string(bound));
    return x;
}

namespace {

struct StepFactors {
    double d1;  // coefficient of U^n_i excluding the stencil
    double d2;  // stencil weight
};

StepFactors factors(Scheme scheme, const ModelCoefficients& c, const GridSpec& g) {
    const double tau = g.tau;
    const double h2 = g.h * g.h;
    double gamma_part = 0.0;
    for (const auto& t : c.gamma_terms) gamma_part += t.weight * l2_scale(t.order, tau) / tau;
    double alpha_part = 0.0;
    for (const auto& t : c.alpha_terms) alpha_part += t.weight * l1_scale(t.order, tau) / tau;
    const double mu3 = l1_scale(c.beta, tau);

    if (scheme == Scheme::I) {
        return {gamma_part + c.a1 / tau + alpha_part + c.a2, c.a3 / h2 + c.a4 * mu3 / (tau * h2)};
    }
    return {gamma_part + c.a1 / tau + 0.5 * alpha_part + 0.5 * c.a2, 0.5 * c.a3 / h2 + 0.5 * c.a4 * mu3 / (tau * h2)};
}

// second difference on interior nodes 1..M-1 of a full-grid vector
template <typename V>
Vector<double> second_difference(const Eigen::MatrixBase<V>& v, double h) {
    const Index m = v.size() - 2;
    return (v.segment(0, m) - 2.0 * v.segment(1, m) + v.segment(2, m)) / (h * h);
}

void check_state(const SolutionHistory& state, Index n, const char* op) {
    if (n < 1 || n > state.grid.N) throw ShapeError(std::string(op) + ": level index out of range");
    if (state.filled < n || state.increments.levels() < n - 1)
        throw ShapeError(std::string(op) + ": history prefix shorter than level " + std::to_string(n - 1));
}

}  // namespace

Tridiagonal assemble_scheme1(const ModelCoefficients& coeffs, const GridSpec& grid) {
    const auto f = factors(Scheme::I, coeffs, grid);
    return {f.d1 + 2.0 * f.d2, f.d2, grid.interior()};
}

Tridiagonal assemble_scheme2(const ModelCoefficients& coeffs, const GridSpec& grid) {
    const auto f = factors(Scheme::II, coeffs, grid);
    return {f.d1 + 2.0 * f.d2, f.d2, grid.interior()};
}

Tridiagonal assemble(Scheme scheme, const ModelCoefficients& coeffs, const GridSpec& grid) {
    return scheme == Scheme::I ? assemble_scheme1(coeffs, grid) : assemble_scheme2(coeffs, grid);
}

Discretization::Discretization(const ProblemSpec& p, const GridSpec& g) : problem(&p), grid(g) {
    p.coeffs.validate();
    const auto& c = p.coeffs;
    for (const auto& t : c.gamma_terms) {
        mu1.push_back(l2_scale(t.order, g.tau));
        gamma_w.push_back(gamma_weights(t.order, g.N));
    }
    for (const auto& t : c.alpha_terms) {
        mu2.push_back(l1_scale(t.order, g.tau));
        alpha_w.push_back(beta_weights(t.order, g.N));
    }
    mu3 = l1_scale(c.beta, g.tau);
    beta_w = beta_weights(c.beta, g.N);
    x.resize(g.M + 1);
    for (Index i = 0; i <= g.M; ++i) x[i] = g.x(i);
    phi2.resize(g.M + 1);
    for (Index i = 0; i <= g.M; ++i) phi2[i] = p.phi2(x[i]);
    source.resize(g.interior(), g.N + 1);
    for (Index n = 0; n <= g.N; ++n)
        for (Index i = 0; i < g.interior(); ++i) source(i, n) = p.f(x[i + 1], g.t(n));
}

SolutionHistory SolutionHistory::start(const ProblemSpec& problem, const GridSpec& grid, Scheme scheme) {
    SolutionHistory s;
    s.grid = grid;
    s.scheme = scheme;
    s.levels = Matrix<double>::Zero(grid.M + 1, grid.N + 1);
    s.increments = IncrementHistory<double>(grid.M + 1, grid.N, grid.tau);
    for (Index i = 0; i <= grid.M; ++i) s.levels(i, 0) = problem.phi1(grid.x(i));
    s.filled = 1;
    return s;
}

Vector<double> rhs_scheme1(const Discretization& disc, const SolutionHistory& state, Index n) {
    check_state(state, n, "rhs_scheme1");
    const auto& c = disc.problem->coeffs;
    const auto& g = disc.grid;
    const double tau = g.tau;
    const auto prev = state.levels.col(n - 1);

    double diag_carry = c.a1 / tau;
    Vector<double> known = Vector<double>::Zero(g.M + 1);
    for (std::size_t j = 0; j < c.gamma_terms.size(); ++j) {
        const double w = c.gamma_terms[j].weight * disc.mu1[j];
        diag_carry += w / tau;
        known += w * memory_term_l2(disc.gamma_w[j], state.increments, n, disc.phi2);
    }
    for (std::size_t l = 0; l < c.alpha_terms.size(); ++l) {
        const double w = c.alpha_terms[l].weight * disc.mu2[l];
        diag_carry += w / tau;
        known -= w * weighted_l1_sum(disc.alpha_w[l], state.increments, n, n - 1);
    }
    known += diag_carry * prev;

    // a4 mu3 sum_k d_{n-k} grad_t(delta^2 U^k): the k = n term contributes -delta^2 U^{n-1} / tau
    Vector<double> coupled = weighted_l1_sum(disc.beta_w, state.increments, n, n - 1) - prev / tau;

    const Index m = g.interior();
    Vector<double> rhs = known.segment(1, m) + c.a4 * disc.mu3 * second_difference(coupled, g.h) + disc.source.col(n);

    const double off = c.a3 / (g.h * g.h) + c.a4 * disc.mu3 / (tau * g.h * g.h);
    rhs[0] += off * disc.problem->g_left(g.t(n));
    rhs[m - 1] += off * disc.problem->g_right(g.t(n));
    return rhs;
}

Vector<double> rhs_scheme2(const Discretization& disc, const SolutionHistory& state, Index n) {
    check_state(state, n, "rhs_scheme2");
    const auto& c = disc.problem->coeffs;
    const auto& g = disc.grid;
    const double tau = g.tau;
    const auto prev = state.levels.col(n - 1);

    double diag_carry = c.a1 / tau - 0.5 * c.a2;
    Vector<double> known = Vector<double>::Zero(g.M + 1);
    for (std::size_t j = 0; j < c.gamma_terms.size(); ++j) {
        const double w = c.gamma_terms[j].weight * disc.mu1[j];
        diag_carry += w / tau;
        known += w * memory_term_l2(disc.gamma_w[j], state.increments, n, disc.phi2);
    }
    for (std::size_t l = 0; l < c.alpha_terms.size(); ++l) {
        const double w = 0.5 * c.alpha_terms[l].weight * disc.mu2[l];
        diag_carry += w / tau;
        known -= w * (weighted_l1_sum(disc.alpha_w[l], state.increments, n, n - 1) +
                      weighted_l1_sum(disc.alpha_w[l], state.increments, n - 1, n - 1));
    }
    known += diag_carry * prev;

    Vector<double> coupled = 0.5 * c.a3 * prev;
    coupled += 0.5 * c.a4 * disc.mu3 *
               (weighted_l1_sum(disc.beta_w, state.increments, n, n - 1) +
                weighted_l1_sum(disc.beta_w, state.increments, n - 1, n - 1) - prev / tau);

    const Index m = g.interior();
    // f^{n-1/2} is the average of the source at the two levels, like every other half-level quantity
    Vector<double> rhs = known.segment(1, m) + second_difference(coupled, g.h) +
                         0.5 * (disc.source.col(n) + disc.source.col(n - 1));

    const double off = 0.5 * c.a3 / (g.h * g.h) + 0.5 * c.a4 * disc.mu3 / (tau * g.h * g.h);
    rhs[0] += off * disc.problem->g_left(g.t(n));
    rhs[m - 1] += off * disc.problem->g_right(g.t(n));
    return rhs;
}

SolutionHistory march(const ProblemSpec& problem, const GridSpec& grid, Scheme scheme) {
    const Discretization disc(problem, grid);
    const Tridiagonal tri = assemble(scheme, problem.coeffs, grid);
    auto state = SolutionHistory::start(problem, grid, scheme);
    if (!state.levels.col(0).allFinite()) throw SolverError("march: initial level contains non-finite values");

    const Index m = grid.interior();
    for (Index n = 1; n <= grid.N; ++n) {
        auto fail = [n] {
            std::ostringstream os;
            os << "march: non-finite value at time level n=" << n;
            throw SolverError(os.str());
        };
        const Vector<double> rhs = scheme == Scheme::I ? rhs_scheme1(disc, state, n) : rhs_scheme2(disc, state, n);
        if (!rhs.allFinite()) fail();
        auto level = state.levels.col(n);
        level.segment(1, m) = thomas_solve(tri, rhs);
        level[0] = problem.g_left(grid.t(n));
        level[grid.M] = problem.g_right(grid.t(n));
        if (!level.allFinite()) fail();
        state.increments.push_difference(level, state.levels.col(n - 1));
        state.filled = n + 1;
    }
    return state;
}

namespace {

// Residual of every scheme equation, (M-1) x N, evaluated literally from the
// difference formulas for a complete space-time field U.
Matrix<double> scheme_residual(const ProblemSpec& p, const GridSpec& g, Scheme scheme, const Matrix<double>& U,
                               const std::vector<double>& phi2) {
    const auto& c = p.coeffs;
    const double tau = g.tau, h = g.h;
    auto grad = [&](Index i, Index k) { return (U(i, k) - U(i, k - 1)) / tau; };
    auto lap = [&](Index i, Index k) { return (U(i - 1, k) - 2.0 * U(i, k) + U(i + 1, k)) / (h * h); };
    auto grad_lap = [&](Index i, Index k) { return (lap(i, k) - lap(i, k - 1)) / tau; };
    auto a_w = [](double gamma, Index k) { return std::pow(k + 1.0, 2.0 - gamma) - std::pow(double(k), 2.0 - gamma); };
    auto d_w = [](double beta, Index k) { return std::pow(k + 1.0, 1.0 - beta) - std::pow(double(k), 1.0 - beta); };
    auto l1 = [&](double order, Index i, Index n, auto&& term) {
        double s = 0.0;
        for (Index k = 1; k <= n; ++k) s += d_w(order, n - k) * term(i, k);
        return s;
    };

    Matrix<double> r(g.M - 1, g.N);
    for (Index n = 1; n <= g.N; ++n) {
        for (Index i = 1; i < g.M; ++i) {
            double lhs = 0.0;
            for (const auto& t : c.gamma_terms) {
                const double mu = std::pow(tau, 1.0 - t.order) / std::tgamma(3.0 - t.order);
                double bracket = a_w(t.order, 0) * grad(i, n) - a_w(t.order, n - 1) * phi2[std::size_t(i)];
                for (Index k = 1; k < n; ++k) bracket -= (a_w(t.order, n - k - 1) - a_w(t.order, n - k)) * grad(i, k);
                lhs += t.weight * mu * bracket;
            }
            lhs += c.a1 * grad(i, n);
            const double mu3 = std::pow(tau, 1.0 - c.beta) / std::tgamma(2.0 - c.beta);
            double rhs = 0.0;
            if (scheme == Scheme::I) {
                for (const auto& t : c.alpha_terms) {
                    const double mu = std::pow(tau, 1.0 - t.order) / std::tgamma(2.0 - t.order);
                    lhs += t.weight * mu * l1(t.order, i, n, grad);
                }
                lhs += c.a2 * U(i, n);
                rhs = c.a3 * lap(i, n) + c.a4 * mu3 * l1(c.beta, i, n, grad_lap) + p.f(g.x(i), g.t(n));
            } else {
                for (const auto& t : c.alpha_terms) {
                    const double mu = std::pow(tau, 1.0 - t.order) / std::tgamma(2.0 - t.order);
                    lhs += 0.5 * t.weight * mu * (l1(t.order, i, n, grad) + l1(t.order, i, n - 1, grad));
                }
                lhs += c.a2 * 0.5 * (U(i, n) + U(i, n - 1));
                rhs = c.a3 * 0.5 * (lap(i, n) + lap(i, n - 1)) +
                      0.5 * c.a4 * mu3 * (l1(c.beta, i, n, grad_lap) + l1(c.beta, i, n - 1, grad_lap)) +
                      0.5 * (p.f(g.x(i), g.t(n)) + p.f(g.x(i), g.t(n - 1)));
            }
            r(i - 1, n - 1) = lhs - rhs;
        }
    }
    return r;
}

}  // namespace

SolutionHistory dense_oracle_solve(const ProblemSpec& problem, const GridSpec& grid, Scheme scheme) {
    problem.coeffs.validate();
    const Index m = grid.interior();
    const Index unknowns = m * grid.N;
    if (unknowns > kDenseOracleLimit)
        throw UsageError("dense_oracle_solve: " + std::to_string(unknowns) + " unknowns exceed the limit of " +
                         std::to_string(kDenseOracleLimit));

    std::vector<double> phi2(std::size_t(grid.M + 1));
    Matrix<double> base = Matrix<double>::Zero(grid.M + 1, grid.N + 1);
    for (Index i = 0; i <= grid.M; ++i) {
        base(i, 0) = problem.phi1(grid.x(i));
        phi2[std::size_t(i)] = problem.phi2(grid.x(i));
    }
    for (Index n = 1; n <= grid.N; ++n) {
        base(0, n) = problem.g_left(grid.t(n));
        base(grid.M, n) = problem.g_right(grid.t(n));
    }

    auto flat = [](const Matrix<double>& r) { return Eigen::Map<const Vector<double>>(r.data(), r.size()).eval(); };
    const Vector<double> r0 = flat(scheme_residual(problem, grid, scheme, base, phi2));

    // the residual is affine in the unknowns; probe one unit vector per column
    Matrix<double> A(unknowns, unknowns);
    for (Index col = 0; col < unknowns; ++col) {
        Matrix<double> probe = base;
        probe(1 + col % m, 1 + col / m) += 1.0;
        A.col(col) = flat(scheme_residual(problem, grid, scheme, probe, phi2)) - r0;
    }
    const Vector<double> z = A.partialPivLu().solve(-r0);

    auto sol = SolutionHistory::start(problem, grid, scheme);
    sol.levels = base;
    for (Index col = 0; col < unknowns; ++col) sol.levels(1 + col % m, 1 + col / m) = z[col];
    for (Index n = 1; n <= grid.N; ++n) sol.increments.push_difference(sol.levels.col(n), sol.levels.col(n - 1));
    sol.filled = grid.N + 1;
    return sol;
}

}  // namespace fracfluid
