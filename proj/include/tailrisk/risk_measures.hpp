#ifndef TAILRISK_RISK_MEASURES_HPP
#define TAILRISK_RISK_MEASURES_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "tailrisk/errors.hpp"
#include "tailrisk/loss_source.hpp"
#include "tailrisk/numeric/quadrature.hpp"
#include "tailrisk/numeric/roots.hpp"

namespace tailrisk {

namespace detail {

inline void require_level(double alpha, double lo, bool lo_inclusive, const char* what) {
    const bool ok = (lo_inclusive ? alpha >= lo : alpha > lo) && alpha < 1.0;
    if (!ok) {
        std::ostringstream os;
        os << what << ": alpha=" << alpha << " must lie in " << (lo_inclusive ? "[" : "(") << lo << ", 1)";
        throw InvalidArgument(os.str());
    }
}

inline void check_close(double a, double b, double rel, const char* what) {
    if (std::fabs(a - b) > rel * std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)))) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": cross-check mismatch " << a << " vs " << b;
        throw ComputationError(os.str());
    }
}

} // namespace detail

/// Expectile levels above this are rejected: the root bracket degenerates.
inline constexpr double max_expectile_level = 1.0 - 1e-12;

/// V@R_alpha = q_L(alpha), the left quantile.
inline double value_at_risk(const LossSource& src, double alpha) {
    detail::require_level(alpha, 0.0, false, "value_at_risk");
    return src.quantile(alpha, 1.0 - alpha);
}

/// ES_alpha by (1/(1-alpha)) times the quadrature of the quantile function over
/// [alpha, 1]. Independent of the closed forms; used as a cross-check.
inline double es_tail_average_quadrature(const DistributionSpec& d, double alpha, double rel_tol = 1e-11) {
    detail::require_level(alpha, 0.0, true, "es_tail_average_quadrature");
    const double w = 1.0 - alpha;
    // integrate over s = u - alpha in [0, w]; the distance to the right end is 1 - u
    auto f = [&](double, double from_left, double from_right) {
        return quantile(d, alpha + from_left, from_right);
    };
    const auto r = numeric::tanh_sinh(f, 0.0, w, rel_tol);
    if (!r.converged) throw ComputationError("es_tail_average_quadrature: no convergence");
    return r.value / w;
}

/// ES_alpha = q_alpha + E[(L - q_alpha)^+] / (1 - alpha); ES_0 = E[L].
inline double expected_shortfall(const LossSource& src, double alpha) {
    detail::require_level(alpha, 0.0, true, "expected_shortfall");
    if (alpha == 0.0) return src.mean();
    const double w = 1.0 - alpha;
    const double q = src.quantile(alpha, w);
    const double es = q + src.upper_partial_moment(q) / w;
#ifdef TAILRISK_ENABLE_CROSS_CHECKS
    detail::check_close(es, src.tail_integral(alpha, w) / w, 1e-9, "expected_shortfall (tail average)");
#endif
    return es;
}

/// g(m) = alpha E[(L-m)^+] - (1-alpha) E[(L-m)^-], strictly decreasing in m;
/// the expectile is its root.
inline double expectile_foc(const LossSource& src, double alpha, double m) {
    return (2.0 * alpha - 1.0) * src.upper_partial_moment(m) - (1.0 - alpha) * (m - src.mean());
}

namespace detail {

// Exact root of the piecewise-linear FOC of an empirical law.
inline double empirical_expectile(const Sample& s, double alpha) {
    if (s.is_constant()) return s.min();
    const auto x = s.values();
    const std::size_t n = x.size();
    const double nd = static_cast<double>(n);
    const double mu = s.mean();
    auto g = [&](double m) { return (2.0 * alpha - 1.0) * s.upper_partial_moment(m) - (1.0 - alpha) * (m - mu); };
    // g(x[0]) >= 0 >= g(x[n-1]); find the last index with g >= 0
    std::size_t lo = 0, hi = n - 1;
    if (g(x[hi]) >= 0.0) return x[hi];
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (g(x[mid]) >= 0.0) lo = mid;
        else hi = mid;
    }
    const double glo = g(x[lo]);
    if (glo == 0.0) return x[lo];
    // on [x[lo], x[hi]) the observations above m are fixed
    const std::size_t above_from = s.count_le(x[lo]);
    const double c = static_cast<double>(n - above_from) / nd;
    const double top = s.suffix_sum(above_from) / nd;
    const double m = ((2.0 * alpha - 1.0) * top + (1.0 - alpha) * mu) / ((2.0 * alpha - 1.0) * c + (1.0 - alpha));
    return std::clamp(m, x[lo], x[hi]);
}

} // namespace detail

/// Expectile e_alpha for 1/2 <= alpha < 1. Exactly the mean at alpha = 1/2.
inline double expectile(const LossSource& src, double alpha) {
    detail::require_level(alpha, 0.5, true, "expectile");
    if (alpha > max_expectile_level) throw InvalidArgument("expectile: alpha too close to 1 (limit 1-1e-12)");
    const double mu = src.mean();
    if (alpha == 0.5 || src.is_constant()) return src.is_constant() ? src.quantile(0.5) : mu;
    if (!src.is_parametric()) return detail::empirical_expectile(src.sample(), alpha);

    auto g = [&](double m) { return expectile_foc(src, alpha, m); };
    const double lo = mu;
    double hi = expected_shortfall(src, alpha);
    if (g(lo) <= 0.0) return lo;
    for (int i = 0; i < 60 && g(hi) > 0.0; ++i) hi += std::fmax(1.0, std::fabs(hi)) * 1e-12 * (1 << std::min(i, 30));
    const double tol = 1e-13 * std::fmax(1.0, std::fabs(hi));
    return numeric::brent(g, lo, hi, tol).root;
}

// ---------------------------------------------------------------------------
// Optimized certainty equivalent

/// Loss function l(x) = x^+/a - b x^- with 0 < a < 1 and 0 <= b <= 1.
struct OceParams {
    double a;
    double b;
};

inline void validate(const OceParams& p) {
    detail::require(p.a > 0.0 && p.a < 1.0, "oce: a must lie in (0, 1)");
    detail::require(p.b >= 0.0 && p.b <= 1.0, "oce: b must lie in [0, 1]");
    detail::require(1.0 / p.a >= p.b, "oce: requires 1/a >= b");
}

/// lambda(a, b) = (1 - a) / (1 - a b).
inline double oce_lambda(const OceParams& p) {
    validate(p);
    return (1.0 - p.a) / (1.0 - p.a * p.b);
}

/// m + E[l_{a,b}(L - m)], the objective whose infimum is the OCE.
inline double oce_objective(const LossSource& src, const OceParams& p, double m) {
    const double plus = src.upper_partial_moment(m);
    const double minus = plus - (src.mean() - m);
    return m + plus / p.a - p.b * minus;
}

/// OCE = (1 - b) ES_lambda + b E[L].
inline double oce(const LossSource& src, const OceParams& p) {
    validate(p);
    if (p.b == 1.0) return src.mean();
    const double lambda = oce_lambda(p);
    const double value = (1.0 - p.b) * expected_shortfall(src, lambda) + p.b * src.mean();
#ifdef TAILRISK_ENABLE_CROSS_CHECKS
    if (lambda > 0.0) detail::check_close(value, oce_objective(src, p, src.quantile(lambda)), 1e-9, "oce (minimizer)");
#endif
    return value;
}

// ---------------------------------------------------------------------------
// Expectile and expected shortfall

/// Weight (1 - alpha) / (alpha + (1 - 2 alpha) beta) placed on the mean.
inline double mean_weight(double alpha, double beta) { return (1.0 - alpha) / (alpha + (1.0 - 2.0 * alpha) * beta); }

/// (1 - w) ES_beta + w E[L] with w = mean_weight(alpha, beta).
inline double es_mean_mixture(const LossSource& src, double alpha, double beta) {
    const double w = mean_weight(alpha, beta);
    return (1.0 - w) * expected_shortfall(src, beta) + w * src.mean();
}

struct ExpectileBounds {
    double lower;
    double upper;
    double es_cap;
};

/// lower <= e_alpha <= upper <= es_cap for every beta in (0, 1).
inline ExpectileBounds expectile_bounds(const LossSource& src, double alpha, double beta) {
    detail::require_level(alpha, 0.5, true, "expectile_bounds");
    detail::require(beta > 0.0 && beta < 1.0, "expectile_bounds: beta must lie in (0, 1)");
    const double w = (1.0 - alpha) / alpha;
    return {es_mean_mixture(src, alpha, beta), (1.0 - w) * expected_shortfall(src, alpha) + w * src.mean(),
            expected_shortfall(src, (2.0 * alpha - 1.0) / alpha)};
}

/// The ES level at which the lower bound is attained: any beta in
/// [P[L < e_alpha], P[L <= e_alpha]].
struct BetaStarResult {
    double lower;
    double upper;
    double point;
    double expectile;
    /// 1 - point, computed from the survival function for continuous laws.
    double one_minus_point;
};

inline BetaStarResult beta_star(const LossSource& src, double alpha) {
    detail::require_level(alpha, 0.5, true, "beta_star");
    if (src.is_constant()) throw InvalidArgument("beta_star: undefined for an a.s. constant loss");
    const double e = expectile(src, alpha);
    BetaStarResult r{};
    r.expectile = e;
    r.lower = src.cdf_left(e);
    r.upper = src.cdf(e);
    if (!src.is_atomic()) {
        r.point = r.upper;
        r.one_minus_point = survival(src.distribution(), e);
    } else {
        r.point = 0.5 * (r.lower + r.upper);
        r.one_minus_point = 1.0 - r.point;
    }
    return r;
}

struct ReconstructionResult {
    double value;
    /// False when beta is outside [P[L < e_alpha], P[L <= e_alpha]].
    bool in_interval;
};

/// Expectile rebuilt from ES_beta and the mean. Exact when beta lies in the
/// beta* interval; in strict mode any other beta is an error.
inline ReconstructionResult expectile_from_es(const LossSource& src, double alpha, double beta, bool strict = false) {
    detail::require_level(alpha, 0.5, true, "expectile_from_es");
    detail::require(beta >= 0.0 && beta < 1.0, "expectile_from_es: beta must lie in [0, 1)");
    if (alpha == 0.5) return {src.mean(), true};
    bool inside = true;
    if (!src.is_constant()) {
        const auto bs = beta_star(src, alpha);
        constexpr double slack = 1e-12;
        inside = beta >= bs.lower - slack && beta <= bs.upper + slack;
    }
    if (strict && !inside) throw InvalidArgument("expectile_from_es: beta outside the beta* interval");
    return {es_mean_mixture(src, alpha, beta), inside};
}

// ---------------------------------------------------------------------------
// Distortion risk measures

/// phi(t) = alpha t / ((2 alpha - 1) t + 1 - alpha).
struct ExpectileDistortion {
    double alpha;
};
/// phi(t) = (1 - lambda) min(t/(1-beta), 1) + lambda min(t/(1-delta), 1).
struct MixtureDistortion {
    double lambda;
    double beta;
    double delta;
};
using DistortionSpec = std::variant<ExpectileDistortion, MixtureDistortion>;

inline void validate(const DistortionSpec& d) {
    if (const auto* e = std::get_if<ExpectileDistortion>(&d)) {
        detail::require_level(e->alpha, 0.5, true, "expectile distortion");
    } else {
        const auto& m = std::get<MixtureDistortion>(d);
        detail::require(m.lambda >= 0.0 && m.lambda <= 1.0, "mixture distortion: lambda must lie in [0, 1]");
        detail::require(m.beta >= 0.0 && m.beta < 1.0, "mixture distortion: beta must lie in [0, 1)");
        detail::require(m.delta >= 0.0 && m.delta < 1.0, "mixture distortion: delta must lie in [0, 1)");
    }
}

inline double distortion_phi(const DistortionSpec& d, double t) {
    detail::require(t >= 0.0 && t <= 1.0, "distortion_phi: t must lie in [0, 1]");
    if (const auto* e = std::get_if<ExpectileDistortion>(&d)) {
        const double a = e->alpha;
        return a * t / ((2.0 * a - 1.0) * t + 1.0 - a);
    }
    const auto& m = std::get<MixtureDistortion>(d);
    return (1.0 - m.lambda) * std::fmin(t / (1.0 - m.beta), 1.0) + m.lambda * std::fmin(t / (1.0 - m.delta), 1.0);
}

/// Optimal mixture ((1-alpha)/alpha, alpha, 0) dominating the expectile distortion.
inline MixtureDistortion optimal_mixture(double alpha) { return {(1.0 - alpha) / alpha, alpha, 0.0}; }

/// R_phi(L) = integral of phi'(t) q_L(1 - t) over [0, 1].
inline double distortion_value(const LossSource& src, const DistortionSpec& d) {
    validate(d);
    if (const auto* m = std::get_if<MixtureDistortion>(&d))
        return (1.0 - m->lambda) * expected_shortfall(src, m->beta) + m->lambda * expected_shortfall(src, m->delta);

    const double a = std::get<ExpectileDistortion>(d).alpha;
    auto phi = [&](double t) { return distortion_phi(d, t); };
    if (!src.is_parametric()) {
        // atoms x_(j) carry the t-interval [1 - j/n, 1 - (j-1)/n]
        const auto x = src.sample().values();
        const double nd = static_cast<double>(x.size());
        numeric::CompensatedSum acc;
        for (std::size_t j = 1; j <= x.size(); ++j) {
            const double hi = 1.0 - static_cast<double>(j - 1) / nd;
            const double lo = 1.0 - static_cast<double>(j) / nd;
            acc.add(x[j - 1] * (phi(hi) - phi(std::fmax(lo, 0.0))));
        }
        return acc.value();
    }
    const auto& dist = src.distribution();
    if (const auto* tp = std::get_if<TwoPoint>(&dist.family())) {
        const double upper_mass = phi(1.0 - tp->p);
        return (tp->x1 * (1.0 - upper_mass) + tp->x2 * upper_mass) + dist.shift();
    }
    const double c = 2.0 * a - 1.0;
    auto f = [&](double t, double from0, double from1) {
        const double den = c * t + 1.0 - a;
        // q_L(1 - t): u = 1 - t is the distance to 1, 1 - u = t
        return a * (1.0 - a) / (den * den) * quantile(dist, from1, from0);
    };
    const auto r = numeric::tanh_sinh(f, 0.0, 1.0, 1e-11);
    if (!r.converged) {
        std::ostringstream os;
        os << "distortion_value: quadrature did not converge (achieved error " << r.error_estimate << ")";
        throw ComputationError(os.str());
    }
    return r.value;
}

struct DistortionPoint {
    double t;
    double phi;
    double phi_mixture;
};

/// phi and the optimal mixture distortion on a uniform grid of `grid` points.
inline std::vector<DistortionPoint> distortion_curves(double alpha, std::size_t grid) {
    detail::require_level(alpha, 0.5, true, "distortion_curves");
    detail::require(grid >= 2, "distortion_curves: grid must be >= 2");
    const DistortionSpec e = ExpectileDistortion{alpha};
    const DistortionSpec m = optimal_mixture(alpha);
    std::vector<DistortionPoint> out;
    out.reserve(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        const double t = (i + 1 == grid) ? 1.0 : static_cast<double>(i) / static_cast<double>(grid - 1);
        out.push_back({t, distortion_phi(e, t), distortion_phi(m, t)});
    }
    return out;
}

} // namespace tailrisk

#endif // TAILRISK_RISK_MEASURES_HPP
