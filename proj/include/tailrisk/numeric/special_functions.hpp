#ifndef TAILRISK_NUMERIC_SPECIAL_FUNCTIONS_HPP
#define TAILRISK_NUMERIC_SPECIAL_FUNCTIONS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tailrisk/errors.hpp"

namespace tailrisk::numeric {

/// Principal branch W0 of the Lambert function, w e^w = x, for x >= -1/e.
/// Halley iteration from a branch-point series (small x) or the asymptotic
/// log expansion (large x).
inline double lambert_w0(double x) {
    constexpr double inv_e = 1.0 / std::numbers::e;
    if (std::isnan(x) || x < -inv_e) throw InvalidArgument("lambert_w0: argument below -1/e");
    if (x == 0.0) return 0.0;
    if (x == -inv_e) return -1.0;
    if (std::isinf(x)) return x;

    double w;
    if (x < -0.25) {
        const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < 3.0) {
        w = std::log1p(x);
        w *= 1.0 - std::log1p(w) / (2.0 + w);
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    if (x > 1e100) {
        // e^w overflows in Halley's form; Newton on w + ln w = ln x instead.
        const double lx = std::log(x);
        for (int i = 0; i < 100; ++i) {
            const double step = (w + std::log(w) - lx) / (1.0 + 1.0 / w);
            w -= step;
            if (std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(w)) break;
        }
        return w;
    }

    for (int i = 0; i < 100; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) break;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double step = f / denom;
        w -= step;
        if (std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(w))) break;
    }
    return w;
}

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Regularized incomplete beta I_x(a, b) together with its complement.
/// The smaller of the two is computed directly, so both are accurate to a
/// few ulps relative (the larger one to absolute epsilon).
struct IncompleteBeta {
    double value;
    double complement;
};

namespace detail {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps) return h;
    }
    throw ComputationError("incomplete beta: continued fraction did not converge");
}

} // namespace detail

/// `one_minus_x` must equal 1 - x; passing it separately keeps full relative
/// precision when x is close to 1.
inline IncompleteBeta incomplete_beta(double a, double b, double x, double one_minus_x) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete_beta: a and b must be positive");
    if (x <= 0.0) return {0.0, 1.0};
    if (one_minus_x <= 0.0) return {1.0, 0.0};
    const double log_front = a * std::log(x) + b * std::log(one_minus_x) - log_beta(a, b);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double v = front * detail::beta_continued_fraction(a, b, x) / a;
        return {v, 1.0 - v};
    }
    const double v = front * detail::beta_continued_fraction(b, a, one_minus_x) / b;
    return {1.0 - v, v};
}

inline IncompleteBeta incomplete_beta(double a, double b, double x) {
    return incomplete_beta(a, b, x, 1.0 - x);
}

/// Solution x of I_x(a, b) = p, returned together with 1 - x.
struct BetaQuantile {
    double x;
    double one_minus_x;
};

namespace detail {

// Bracketed Halley iteration for I_x(a, b) = p with p <= 1/2.
inline double inverse_incomplete_beta_lower(double a, double b, double p) {
    const double lbeta = log_beta(a, b);
    double x;
    {
        const double lna = std::log(a / (a + b));
        const double lnb = std::log(b / (a + b));
        const double t = std::exp(a * lna) / a;
        const double u = std::exp(b * lnb) / b;
        const double w = t + u;
        if (p < t / w) x = std::pow(a * w * p, 1.0 / a);
        else x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
        x = std::clamp(x, std::numeric_limits<double>::min(), 1.0 - 1e-16);
    }
    double lo = 0.0, hi = 1.0;
    const double a1 = a - 1.0, b1 = b - 1.0;
    for (int it = 0; it < 200; ++it) {
        const auto ib = incomplete_beta(a, b, x, 1.0 - x);
        const double err = ib.value - p;
        if (err == 0.0) return x;
        if (err < 0.0) lo = x;
        else hi = x;
        const double dens = std::exp(a1 * std::log(x) + b1 * std::log1p(-x) - lbeta);
        double next;
        if (dens > 0.0 && std::isfinite(dens)) {
            const double u = err / dens;
            const double corr = 1.0 - 0.5 * std::min(1.0, u * (a1 / x - b1 / (1.0 - x)));
            next = x - u / corr;
        } else {
            next = 0.5 * (lo + hi);
        }
        if (!(next > lo && next < hi)) next = (lo > 0.0) ? 0.5 * (lo + hi) : 0.5 * x;
        const double step = std::fabs(next - x);
        x = next;
        if (step <= 1e-15 * x) return x;
        if (hi - lo <= 1e-15 * lo) return 0.5 * (lo + hi);
    }
    throw ComputationError("inverse incomplete beta: no convergence");
}

} // namespace detail

inline BetaQuantile inverse_incomplete_beta(double a, double b, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return {0.0, 1.0};
        if (p == 1.0) return {1.0, 0.0};
        throw InvalidArgument("inverse_incomplete_beta: p outside [0,1]");
    }
    if (p <= 0.5) {
        const double x = detail::inverse_incomplete_beta_lower(a, b, p);
        return {x, 1.0 - x};
    }
    // I_x(a,b) = p  <=>  I_{1-x}(b,a) = 1-p
    const double y = detail::inverse_incomplete_beta_lower(b, a, 1.0 - p);
    return {1.0 - y, y};
}

// ---------------------------------------------------------------------------
// Student t with nu > 0 degrees of freedom (standard, zero location, unit scale)

inline double student_t_log_pdf(double nu, double x) {
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi) -
           0.5 * (nu + 1.0) * std::log1p(x * x / nu);
}

inline double student_t_pdf(double nu, double x) { return std::exp(student_t_log_pdf(nu, x)); }

/// P[T > x].
inline double student_t_sf(double nu, double x) {
    const double x2 = x * x;
    const double y = nu / (nu + x2);
    const double z = x2 / (nu + x2);
    const double half_tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, y, z).value;
    return x >= 0.0 ? half_tail : 1.0 - half_tail;
}

inline double student_t_cdf(double nu, double x) { return student_t_sf(nu, -x); }

/// The x >= 0 with P[T > x] = p, for 0 < p <= 1/2.
inline double student_t_upper_quantile(double nu, double p) {
    if (!(p > 0.0 && p <= 0.5)) throw InvalidArgument("student_t_upper_quantile: p must lie in (0, 1/2]");
    if (p == 0.5) return 0.0;
    // sf(x) = I_y(nu/2, 1/2) / 2 with y = nu / (nu + x^2)
    const auto q = inverse_incomplete_beta(0.5 * nu, 0.5, 2.0 * p);
    double x = std::sqrt(nu * q.one_minus_x) / std::sqrt(q.x);
    if (!std::isfinite(x)) {
        // y underflowed; use the power tail sf(x) ~ nu^{nu/2} x^{-nu} / (nu B(nu/2, 1/2))
        const double log_x = (0.5 * nu * std::log(nu) - log_beta(0.5 * nu, 0.5) - std::log(nu) - std::log(p)) / nu;
        x = std::exp(log_x);
        if (!std::isfinite(x)) throw ComputationError("student_t_upper_quantile: overflow");
    }
    // Newton polish directly on the survival function
    for (int i = 0; i < 3; ++i) {
        const double dens = student_t_pdf(nu, x);
        if (!(dens > 0.0)) break;
        const double step = (student_t_sf(nu, x) - p) / dens;
        if (!std::isfinite(step)) break;
        const double next = x + step;
        if (next < 0.0) break;
        x = next;
        if (std::fabs(step) <= 1e-15 * x) break;
    }
    return x;
}

} // namespace tailrisk::numeric

#endif // TAILRISK_NUMERIC_SPECIAL_FUNCTIONS_HPP
