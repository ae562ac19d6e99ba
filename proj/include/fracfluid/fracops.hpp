#pragma once

// Weight sequences and discrete Caputo operators for orders in (0,1) and (1,2).
//
// All history sums run over an IncrementHistory, whose column k-1 holds the
// time difference (U^k - U^{k-1}) / tau sampled on every spatial point.

#include <cmath>
#include <functional>
#include <string>
#include <type_traits>

#include <Eigen/Core>

#include "fracfluid/errors.hpp"

namespace fracfluid {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

namespace detail {

inline void require_open_interval(const char* name, double value, double lo, double hi) {
    if (!(value > lo && value < hi)) {
        throw DomainError(name, "order " + std::to_string(value) + " outside open interval (" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + ")");
    }
}

// (k+1)^p - k^p, evaluated without cancellation for large k.
template <typename Scalar>
Scalar power_increment(Index k, Scalar p) {
    using std::exp;
    using std::expm1;
    using std::log;
    using std::log1p;
    if (k == 0) return Scalar(1);
    const Scalar kk = Scalar(k);
    return exp(p * log(kk)) * expm1(p * log1p(Scalar(1) / kk));
}

template <typename Scalar>
Vector<Scalar> power_increments(Scalar p, Index count) {
    Vector<Scalar> w(count);
    for (Index k = 0; k < count; ++k) w[k] = power_increment<Scalar>(k, p);
    return w;
}

}  // namespace detail

/// a_k = (k+1)^{2-gamma} - k^{2-gamma}, used by the L2-type formula for 1 < gamma < 2.
template <typename Scalar = double>
struct WeightSeqGamma {
    Scalar order{};
    Vector<Scalar> weights;

    Index size() const { return weights.size(); }
    Scalar operator[](Index k) const { return weights[k]; }
};

/// d_k = (k+1)^{1-beta} - k^{1-beta}, used by the L1 formula for 0 < beta < 1.
template <typename Scalar = double>
struct WeightSeqBeta {
    Scalar order{};
    Vector<Scalar> weights;

    Index size() const { return weights.size(); }
    Scalar operator[](Index k) const { return weights[k]; }
};

template <typename Scalar = double>
WeightSeqGamma<Scalar> gamma_weights(Scalar order, Index count) {
    detail::require_open_interval("gamma", double(order), 1.0, 2.0);
    if (count < 1) throw DomainError("count", "need at least one weight");
    return {order, detail::power_increments<Scalar>(Scalar(2) - order, count)};
}

template <typename Scalar = double>
WeightSeqBeta<Scalar> beta_weights(Scalar order, Index count) {
    detail::require_open_interval("beta", double(order), 0.0, 1.0);
    if (count < 1) throw DomainError("count", "need at least one weight");
    return {order, detail::power_increments<Scalar>(Scalar(1) - order, count)};
}

/// Outcome of checking the positivity, monotonicity, telescoping and
/// convexity properties of an L1 weight sequence d_0..d_n.
struct WeightPropertyReport {
    bool unit_leading = false;  // d_0 == 1
    bool positive = false;
    bool monotone = false;      // strictly decreasing
    bool telescoping = false;   // sum_{k<m}(d_k - d_{k+1}) + d_m == 1 for every m <= n
    bool convex = false;        // d_{k+1} - 2 d_k + d_{k-1} >= 0
    double min_weight = 0.0;
    double min_decrease = 0.0;
    double telescoping_residual = 0.0;
    double min_convexity = 0.0;

    bool all() const { return unit_leading && positive && monotone && telescoping && convex; }
};

inline constexpr double kTelescopingTolerance = 1e-12;
inline constexpr double kConvexityTolerance = 1e-15;

template <typename Scalar>
WeightPropertyReport check_weight_properties(const Eigen::Ref<const Vector<std::type_identity_t<Scalar>>>& d) {
    using std::abs;
    using std::min;
    using std::max;
    if (d.size() < 3) throw DomainError("n", "need n >= 2");
    WeightPropertyReport r;
    r.unit_leading = d[0] == Scalar(1);
    r.min_weight = double(d.minCoeff());
    r.positive = r.min_weight > 0.0;

    r.min_decrease = double(d[0] - d[1]);
    for (Index k = 1; k + 1 < d.size(); ++k) r.min_decrease = min(r.min_decrease, double(d[k] - d[k + 1]));
    r.monotone = r.min_decrease > 0.0;

    Scalar running = 0;
    for (Index m = 1; m < d.size(); ++m) {
        running += d[m - 1] - d[m];
        r.telescoping_residual = max(r.telescoping_residual, double(abs(running + d[m] - Scalar(1))));
    }
    r.telescoping = r.telescoping_residual < kTelescopingTolerance;

    r.min_convexity = double(d[2] - 2 * d[1] + d[0]);
    for (Index k = 1; k + 1 < d.size(); ++k)
        r.min_convexity = min(r.min_convexity, double(d[k + 1] - 2 * d[k] + d[k - 1]));
    r.convex = r.min_convexity >= -kConvexityTolerance;
    return r;
}

/// Checks d_0..d_n for the given order.
inline WeightPropertyReport check_weight_properties(double order, Index n) {
    if (n < 2) throw DomainError("n", "need n >= 2");
    return check_weight_properties<double>(beta_weights(order, n + 1).weights);
}

/// Stored time differences grad_t U^k, k = 1..levels(), one column per level.
template <typename Scalar = double>
class IncrementHistory {
public:
    IncrementHistory() = default;
    IncrementHistory(Index points, Index capacity, Scalar tau)
        : values_(points, capacity), tau_(tau) {
        if (!(tau > Scalar(0))) throw DomainError("tau", "time step must be positive");
    }

    Index points() const { return values_.rows(); }
    Index capacity() const { return values_.cols(); }
    Index levels() const { return levels_; }
    Scalar tau() const { return tau_; }

    /// Appends (current - previous) / tau as the next level.
    template <typename A, typename B>
    void push_difference(const Eigen::MatrixBase<A>& current, const Eigen::MatrixBase<B>& previous) {
        check_push(current.size());
        if (previous.size() != points()) throw ShapeError("increment history: previous level length mismatch");
        values_.col(levels_) = (current - previous) / tau_;
        ++levels_;
    }

    template <typename A>
    void push(const Eigen::MatrixBase<A>& increment) {
        check_push(increment.size());
        values_.col(levels_) = increment;
        ++levels_;
    }

    /// grad_t U^k for 1 <= k <= levels().
    auto level(Index k) const { return values_.col(k - 1); }

    /// Columns for levels first..last inclusive.
    auto levels_range(Index first, Index last) const { return values_.middleCols(first - 1, last - first + 1); }

private:
    void check_push(Index size) {
        if (size != points()) throw ShapeError("increment history: vector length mismatch");
        if (levels_ >= capacity()) throw ShapeError("increment history: capacity exhausted");
    }

    Matrix<Scalar> values_;
    Index levels_ = 0;
    Scalar tau_ = 1;
};

namespace detail {

template <typename Scalar>
void require_levels(const IncrementHistory<Scalar>& h, Index needed, const char* op) {
    if (h.levels() < needed)
        throw ShapeError(std::string(op) + ": history holds " + std::to_string(h.levels()) + " levels, need " +
                         std::to_string(needed));
}

template <typename Scalar>
void require_weights(Index available, Index needed, const char* op) {
    if (available < needed)
        throw ShapeError(std::string(op) + ": weight sequence too short (" + std::to_string(available) + " < " +
                         std::to_string(needed) + ")");
}

}  // namespace detail

/// Known part of the L2-type bracket at level n:
///   sum_{k=1}^{n-1} (a_{n-k-1} - a_{n-k}) grad_t U^k + a_{n-1} * initial_slope.
/// Needs levels 1..n-1 only; the ghost level U^{-1} = U^0 - tau*phi2 is folded
/// into the initial_slope term.
template <typename Scalar>
Vector<Scalar> memory_term_l2(const WeightSeqGamma<Scalar>& a, const IncrementHistory<Scalar>& history, Index n,
                              const Eigen::Ref<const Vector<std::type_identity_t<Scalar>>>& initial_slope) {
    if (n < 1) throw ShapeError("memory_term_l2: level index must be >= 1");
    detail::require_levels(history, n - 1, "memory_term_l2");
    detail::require_weights<Scalar>(a.size(), n, "memory_term_l2");
    if (initial_slope.size() != history.points()) throw ShapeError("memory_term_l2: initial slope length mismatch");

    Vector<Scalar> out = a[n - 1] * initial_slope;
    if (n > 1) {
        Vector<Scalar> coef(n - 1);
        for (Index k = 1; k < n; ++k) coef[k - 1] = a[n - k - 1] - a[n - k];
        out.noalias() += history.levels_range(1, n - 1) * coef;
    }
    return out;
}

/// sum_{k=1}^{upto} d_{n-k} grad_t U^k. With upto == n this is the full L1 sum
/// at level n; with upto == n-1 it is the part known before level n is solved.
template <typename Scalar>
Vector<Scalar> weighted_l1_sum(const WeightSeqBeta<Scalar>& d, const IncrementHistory<Scalar>& history, Index n,
                               Index upto) {
    detail::require_levels(history, upto, "weighted_l1_sum");
    detail::require_weights<Scalar>(d.size(), n, "weighted_l1_sum");
    if (upto > n) throw ShapeError("weighted_l1_sum: upto exceeds n");
    Vector<Scalar> out = Vector<Scalar>::Zero(history.points());
    if (upto < 1) return out;
    Vector<Scalar> coef(upto);
    for (Index k = 1; k <= upto; ++k) coef[k - 1] = d[n - k];
    out.noalias() += history.levels_range(1, upto) * coef;
    return out;
}

/// a_0 grad_t U^n - sum_{k=1}^{n-1}(a_{n-k-1}-a_{n-k}) grad_t U^k - a_{n-1} phi2,
/// with n = history.levels(). Multiply by tau^{1-gamma}/Gamma(3-gamma) to get
/// the Caputo derivative of order gamma.
template <typename Scalar>
Vector<Scalar> l2_bracket(const WeightSeqGamma<Scalar>& a, const IncrementHistory<Scalar>& history,
                          const Eigen::Ref<const Vector<std::type_identity_t<Scalar>>>& initial_slope) {
    const Index n = history.levels();
    if (n < 1) throw ShapeError("l2_bracket: empty history");
    return a[0] * history.level(n) - memory_term_l2(a, history, n, initial_slope);
}

/// sum_{k=1}^{n} d_{n-k} grad_t U^k with n = history.levels().
template <typename Scalar>
Vector<Scalar> l1_bracket(const WeightSeqBeta<Scalar>& d, const IncrementHistory<Scalar>& history) {
    const Index n = history.levels();
    if (n < 1) throw ShapeError("l1_bracket: empty history");
    return weighted_l1_sum(d, history, n, n);
}

/// Average of the L1 sums at levels n and n-1 (approximates the derivative at t_{n-1/2}).
template <typename Scalar>
Vector<Scalar> averaged_l1_bracket(const WeightSeqBeta<Scalar>& d, const IncrementHistory<Scalar>& history) {
    const Index n = history.levels();
    if (n < 1) throw ShapeError("averaged_l1_bracket: empty history");
    return Scalar(0.5) * (weighted_l1_sum(d, history, n, n) + weighted_l1_sum(d, history, n - 1, n - 1));
}

/// tau^{1-gamma} / Gamma(3-gamma)
inline double l2_scale(double gamma, double tau) { return std::pow(tau, 1.0 - gamma) / std::tgamma(3.0 - gamma); }

/// tau^{1-beta} / Gamma(2-beta)
inline double l1_scale(double beta, double tau) { return std::pow(tau, 1.0 - beta) / std::tgamma(2.0 - beta); }

using TimeFunction = std::function<double(double)>;

/// Caputo derivative of g at t by product midpoint quadrature: the kernel
/// (t-s)^{m-1-order} / Gamma(m-order) is integrated exactly on each of `panels`
/// uniform subintervals and g^{(m)} is sampled at the panel midpoint, m = ceil(order).
/// `derivative` supplies g' (order < 1) or g'' (order > 1); when empty, a central
/// difference with step a quarter of the panel width is used.
inline double caputo_quadrature_oracle(const TimeFunction& g, double order, double t, Index panels,
                                       const TimeFunction& derivative = {}) {
    if (order == 1.0) throw DomainError("order", "order 1 is ambiguous between the two Caputo branches");
    if (!(order > 0.0 && order < 2.0)) throw DomainError("order", "must lie in (0,1) or (1,2)");
    if (!(t > 0.0)) throw DomainError("t", "must be positive");
    if (panels < 1) throw DomainError("panels", "need at least one panel");

    const int m = order < 1.0 ? 1 : 2;
    const double width = t / double(panels);
    const double step = 0.25 * width;
    auto dm = [&](double s) {
        if (derivative) return derivative(s);
        if (m == 1) return (g(s + step) - g(s - step)) / (2.0 * step);
        return (g(s + step) - 2.0 * g(s) + g(s - step)) / (step * step);
    };

    // integral of (t-s)^{p-1} over [a,b] is ((t-a)^p - (t-b)^p) / p with p = m - order
    const double p = double(m) - order;
    const double norm = std::tgamma(p + 1.0);
    double sum = 0.0;
    for (Index k = 0; k < panels; ++k) {
        const double a = k * width;
        const double b = (k + 1 == panels) ? t : (k + 1) * width;
        const double w = std::pow(t - a, p) - std::pow(t - b, p);
        sum += w * dm(0.5 * (a + b));
    }
    return sum / norm;
}

}  // namespace fracfluid
