#ifndef TAILRISK_NUMERIC_ROOTS_HPP
#define TAILRISK_NUMERIC_ROOTS_HPP

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "tailrisk/errors.hpp"

namespace tailrisk::numeric {

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Brent's bracketed root finder (zeroin). `f(lo)` and `f(hi)` must not share
/// a sign. Terminates when the bracket is narrower than
/// 2*eps*|x| + abs_tol/2 or an exact zero is hit.
template <class F>
RootResult brent(F&& f, double lo, double hi, double abs_tol = 1e-12, int max_iter = 300) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream os;
        os << "brent: no sign change on [" << lo << ", " << hi << "] (f=" << fa << ", " << fb << ")";
        throw ComputationError(os.str());
    }
    double c = a, fc = fa;
    double d = b - a, e = d;

    for (int iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * eps * std::fabs(b) + 0.5 * abs_tol;
        const double m = 0.5 * (c - b);
        if (std::fabs(m) <= tol || fb == 0.0) return {b, fb, iter};

        if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
            // inverse quadratic interpolation, secant when only two points differ
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            else p = -p;
            if (2.0 * p < std::fmin(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }
    throw ComputationError("brent: iteration limit reached");
}

/// Plain bisection; used as an independent check on Brent in tests and as the
/// fallback inside safeguarded Newton iterations.
template <class F>
RootResult bisection(F&& f, double lo, double hi, double abs_tol = 1e-12, int max_iter = 2000) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if ((flo > 0.0) == (fhi > 0.0)) throw ComputationError("bisection: no sign change");
    int iter = 0;
    while (iter < max_iter) {
        ++iter;
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi || hi - lo <= abs_tol) break;
        const double fm = f(mid);
        if (fm == 0.0) return {mid, 0.0, iter};
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, f(x), iter};
}

} // namespace tailrisk::numeric

#endif // TAILRISK_NUMERIC_ROOTS_HPP
