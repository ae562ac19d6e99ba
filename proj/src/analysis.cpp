#include "fracfluid/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <sstream>

#include "fracfluid/csv.hpp"
#include "fracfluid/errors.hpp"
#include "fracfluid/random.hpp"

namespace fracfluid {

ErrorPair error_at_final(const SolutionHistory& sol, const std::optional<SpaceTimeFunction>& exact) {
    if (!exact) throw UsageError("error_at_final: problem has no exact solution");
    const auto& g = sol.grid;
    if (sol.filled != g.N + 1) throw ShapeError("error_at_final: solution history is incomplete");
    Vector<double> e(g.M + 1);
    for (Index i = 0; i <= g.M; ++i) e[i] = (*exact)(g.x(i), g.T) - sol.levels(i, g.N);
    return {std::sqrt(g.h * e.squaredNorm()), e.lpNorm<Eigen::Infinity>()};
}

double discrete_l2_norm(const Eigen::Ref<const Vector<double>>& v, double h) {
    if (v.size() < 2) throw ShapeError("discrete_l2_norm: need at least two nodes");
    return std::sqrt(h * v.segment(1, v.size() - 2).squaredNorm());
}

double discrete_h1_seminorm(const Eigen::Ref<const Vector<double>>& v, double h) {
    if (v.size() < 2) throw ShapeError("discrete_h1_seminorm: need at least two nodes");
    const Index m = v.size() - 1;
    return std::sqrt(h * ((v.tail(m) - v.head(m)) / h).squaredNorm());
}

H1Norm discrete_h1_norm(const Eigen::Ref<const Vector<double>>& v, const ModelCoefficients& coeffs, double h) {
    const double l2 = discrete_l2_norm(v, h);
    const double semi = discrete_h1_seminorm(v, h);
    return {std::sqrt(coeffs.a2 * l2 * l2 + coeffs.a3 * semi * semi), coeffs.a2 == 0.0};
}

std::string ConvergenceReport::to_csv() const {
    std::ostringstream os;
    os << "tau,l2_error,l2_order,linf_error,linf_order\n";
    for (const auto& r : rows) {
        os << format_sci(r.tau) << ',' << format_sci(r.errors.l2) << ',' << format_optional(r.order_l2) << ','
           << format_sci(r.errors.linf) << ',' << format_optional(r.order_linf) << '\n';
    }
    return os.str();
}

std::vector<double> log2_rates(const std::vector<double>& errors) {
    std::vector<double> rates;
    for (std::size_t i = 1; i < errors.size(); ++i) rates.push_back(std::log2(errors[i - 1] / errors[i]));
    return rates;
}

void require_halving(const std::vector<double>& taus) {
    if (taus.empty()) throw UsageError("tau list is empty");
    for (double t : taus)
        if (!(t > 0.0)) throw UsageError("tau values must be positive");
    for (std::size_t i = 1; i < taus.size(); ++i) {
        if (std::abs(taus[i] * 2.0 - taus[i - 1]) > 1e-9 * taus[i - 1])
            throw UsageError("tau list must halve row to row (order estimates assume a factor of 2)");
    }
}

ConvergenceReport convergence_table(const ProblemSpec& problem, Scheme scheme, const std::vector<double>& taus,
                                    double h, int workers, const RunObserver& observer) {
    require_halving(taus);
    if (!problem.exact) throw UsageError("convergence_table: problem has no exact solution");

    std::vector<GridSpec> grids;
    for (double tau : taus) grids.push_back(GridSpec::from_steps(problem.L, problem.T, h, tau));

    ConvergenceReport report;
    report.fixed_h = h;
    report.scheme = scheme;

    double scale = 0.0;
    for (Index i = 0; i <= grids.front().M; ++i)
        scale = std::max(scale, std::abs((*problem.exact)(grids.front().x(i), problem.T)));
    const double floor = kErrorFloor * std::max(scale, 1.0);

    auto collect = [&](std::size_t idx, const SolutionHistory& sol) {
        ConvergenceRow row;
        row.tau = taus[idx];
        row.errors = error_at_final(sol, problem.exact);
        if (idx > 0) {
            const auto& prev = report.rows.back();
            row.order_l2 = std::log2(prev.errors.l2 / row.errors.l2);
            row.order_linf = std::log2(prev.errors.linf / row.errors.linf);
            row.order_reliable = prev.errors.l2 > floor && row.errors.l2 > floor;
        } else {
            row.order_reliable = row.errors.l2 > floor;
        }
        report.rows.push_back(row);
        if (observer) observer(idx, sol);
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < grids.size(); ++i) collect(i, march(problem, grids[i], scheme));
        return report;
    }

    // bounded window of in-flight marches, drained in submission order
    std::deque<std::future<SolutionHistory>> pending;
    std::size_t next = 0, done = 0;
    while (done < grids.size()) {
        while (next < grids.size() && pending.size() < std::size_t(workers)) {
            pending.push_back(std::async(std::launch::async, [&, i = next] { return march(problem, grids[i], scheme); }));
            ++next;
        }
        collect(done, pending.front().get());
        pending.pop_front();
        ++done;
    }
    return report;
}

StabilityAudit stability_audit(const SolutionHistory& sol, const ProblemSpec& problem) {
    const auto& g = sol.grid;
    const auto& c = problem.coeffs;
    if (sol.filled != g.N + 1) throw ShapeError("stability_audit: solution history is incomplete");
    for (Index n = 1; n <= g.N; ++n) {
        if (sol.levels(0, n) != 0.0 || sol.levels(g.M, n) != 0.0)
            throw UsageError("stability_audit: the energy bound is only established for homogeneous Dirichlet "
                             "boundaries; this run has nonzero boundary values");
    }

    const double T = g.T;
    Vector<double> phi2(g.M + 1), f(g.M + 1);
    for (Index i = 0; i <= g.M; ++i) phi2[i] = problem.phi2(g.x(i));

    double eps0 = c.a1;
    double slope_part = 0.0;
    for (const auto& t : c.gamma_terms) {
        eps0 += t.weight * std::pow(T, 1.0 - t.order) / (2.0 * std::tgamma(2.0 - t.order));
        slope_part += t.weight * std::pow(T, 2.0 - t.order) / std::tgamma(3.0 - t.order);
    }
    const double phi2_norm = discrete_l2_norm(phi2, g.h);

    double max_f = 0.0;
    for (Index n = 1; n <= g.N; ++n) {
        for (Index i = 0; i <= g.M; ++i) {
            f[i] = sol.scheme == Scheme::I ? problem.f(g.x(i), g.t(n))
                                           : 0.5 * (problem.f(g.x(i), g.t(n)) + problem.f(g.x(i), g.t(n - 1)));
        }
        max_f = std::max(max_f, std::pow(discrete_l2_norm(f, g.h), 2));
    }

    // the bound concerns the interior vector, so boundary entries of level 0 are zeroed
    Vector<double> u0 = sol.level(0);
    u0[0] = u0[g.M] = 0.0;

    StabilityAudit a;
    a.lhs = std::pow(discrete_h1_norm(sol.final_level(), c, g.h).value, 2);
    a.rhs = std::pow(discrete_h1_norm(u0, c, g.h).value, 2) + slope_part * phi2_norm * phi2_norm +
            T / (2.0 * eps0) * max_f;
    a.pass = a.lhs <= a.rhs * (1.0 + kStabilitySlack);
    return a;
}

double l1_quadratic_form(const WeightSeqBeta<double>& d, const Eigen::Ref<const Vector<double>>& v) {
    const Index N = v.size();
    if (d.size() < N) throw ShapeError("l1_quadratic_form: weight sequence too short");
    double s = 0.0;
    for (Index n = 1; n <= N; ++n)
        for (Index k = 1; k <= n; ++k) s += d[n - k] * v[k - 1] * v[n - 1];
    return s;
}

double averaged_l1_quadratic_form(const WeightSeqBeta<double>& d, const Eigen::Ref<const Vector<double>>& v) {
    const Index N = v.size();
    double s = l1_quadratic_form(d, v);
    for (Index n = 1; n <= N; ++n)
        for (Index k = 1; k < n; ++k) s += d[n - 1 - k] * v[k - 1] * v[n - 1];
    return s;
}

Matrix<double> averaged_form_toeplitz(double beta, Index size) {
    const auto d = beta_weights(beta, std::max<Index>(size, 1));
    Matrix<double> H(size, size);
    for (Index i = 0; i < size; ++i) {
        for (Index j = 0; j < size; ++j) {
            const Index m = std::abs(i - j);
            H(i, j) = m == 0 ? d[0] : 0.5 * (d[m - 1] + d[m]);
        }
    }
    return H;
}

ToeplitzReport toeplitz_study(double beta, const std::vector<Index>& sizes, int samples, std::uint64_t seed) {
    if (sizes.empty()) throw UsageError("toeplitz_study: no sizes given");
    const Index max_size = *std::max_element(sizes.begin(), sizes.end());
    if (*std::min_element(sizes.begin(), sizes.end()) < 1 || max_size > kToeplitzMaxSize)
        throw UsageError("toeplitz_study: sizes must lie in [1, " + std::to_string(kToeplitzMaxSize) + "]");

    // one extra row so that det H_N / det H_{N+1} is available for the largest N
    const Index n = max_size + 1;
    Matrix<double> L = averaged_form_toeplitz(beta, n);
    Vector<double> pivots = Vector<double>::Zero(n);
    Index factored = 0;  // number of leading pivots that came out positive
    for (Index j = 0; j < n; ++j) {
        double dj = L(j, j);
        for (Index k = 0; k < j; ++k) dj -= L(j, k) * L(j, k) * pivots[k];
        if (!(dj > 0.0) || !std::isfinite(dj)) break;
        pivots[j] = dj;
        for (Index i = j + 1; i < n; ++i) {
            double s = L(i, j);
            for (Index k = 0; k < j; ++k) s -= L(i, k) * L(j, k) * pivots[k];
            L(i, j) = s / dj;
        }
        factored = j + 1;
    }

    ToeplitzReport r;
    r.beta = beta;
    r.sizes = sizes;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (Index N : sizes) {
        const bool pd = N <= factored;
        r.positive_definite.push_back(pd);
        double log_det = 0.0;
        for (Index k = 0; k < std::min(N, factored); ++k) log_det += std::log(pivots[k]);
        r.log_dets.push_back(pd ? log_det : nan);
        r.det_ratios.push_back(N + 1 <= factored ? std::exp(-std::log(pivots[N])) : nan);
    }

    Lcg64 rng(seed);
    const auto d = beta_weights(beta, max_size);
    r.min_quadform = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Index len = sizes[std::size_t(s) % sizes.size()];
        const Vector<double> v = random_vector(rng, len);
        r.min_quadform = std::min(r.min_quadform, averaged_l1_quadratic_form(d, v) / v.squaredNorm());
    }
    return r;
}

std::string to_string(CaputoFormula f) {
    switch (f) {
        case CaputoFormula::L2AtN: return "L2_at_n";
        case CaputoFormula::L2AtHalf: return "L2_at_half";
        case CaputoFormula::L1: return "L1";
    }
    return "?";
}

OperatorRates operator_convergence_check(double order, CaputoFormula formula, const TimeFunction& g,
                                         const TimeFunction& caputo_g, const std::vector<double>& taus,
                                         double t_final, double initial_slope) {
    require_halving(taus);
    OperatorRates out;
    for (double tau : taus) {
        const auto N = Index(std::llround(t_final / tau));
        if (std::abs(double(N) * tau - t_final) > 1e-9 * t_final)
            throw UsageError("operator_convergence_check: t_final is not a multiple of tau");
        IncrementHistory<double> hist(1, N, tau);
        Vector<double> prev(1), cur(1);
        prev[0] = g(0.0);
        for (Index k = 1; k <= N; ++k) {
            cur[0] = g(double(k) * tau);
            hist.push_difference(cur, prev);
            prev = cur;
        }
        double approx = 0.0, target = 0.0;
        if (formula == CaputoFormula::L1) {
            approx = l1_scale(order, tau) * l1_bracket(beta_weights(order, N), hist)[0];
            target = caputo_g(t_final);
        } else {
            Vector<double> slope(1);
            slope[0] = initial_slope;
            approx = l2_scale(order, tau) * l2_bracket(gamma_weights(order, N), hist, slope)[0];
            target = caputo_g(formula == CaputoFormula::L2AtN ? t_final : t_final - 0.5 * tau);
        }
        out.taus.push_back(tau);
        out.errors.push_back(std::abs(approx - target));
    }
    out.rates = log2_rates(out.errors);
    return out;
}

}  // namespace fracfluid
