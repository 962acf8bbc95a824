#ifndef TAILRISK_TESTS_ORACLES_HPP
#define TAILRISK_TESTS_ORACLES_HPP

// Reference values computed independently of the library: closed forms
// evaluated by hand-written code and brute-force definitions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Principal Lambert W by plain Newton iteration on w e^w = x, x >= 0.
inline double lambert_w(double x) {
    double w = std::log1p(x);
    for (int i = 0; i < 200; ++i) {
        const double ew = std::exp(w);
        const double step = (w * ew - x) / (ew * (w + 1.0));
        w -= step;
        if (std::fabs(step) < 1e-16 * (1.0 + std::fabs(w))) break;
    }
    return w;
}

inline double uniform_expectile(double a) {
    if (a == 0.5) return 0.5;
    return (std::sqrt(a * (1.0 - a)) - a) / (1.0 - 2.0 * a);
}

inline double exponential_expectile(double a) {
    return 1.0 + lambert_w((2.0 * a - 1.0) / ((1.0 - a) * std::exp(1.0)));
}

inline double pareto2_expectile(double a) { return std::sqrt(a * (1.0 - a)) / (1.0 - a); }

inline double pareto2_beta_star(double a) {
    const double r = 2.0 * std::sqrt(a * (1.0 - a));
    return (a + r) / (1.0 + r);
}

/// Pareto with F(x) = 1 - (1 + x)^{-a}.
inline double pareto_quantile(double a, double u) { return std::pow(1.0 - u, -1.0 / a) - 1.0; }
inline double pareto_es(double a, double b) { return a / (a - 1.0) * std::pow(1.0 - b, -1.0 / a) - 1.0; }

/// Pareto expectile from its beta* equation, solved by bisection on beta.
inline double pareto_expectile(double a, double alpha) {
    auto g = [&](double b) { return a * (1.0 - alpha) * (std::pow(1.0 - b, 1.0 / a) - 1.0) + alpha + (1.0 - 2.0 * alpha) * b; };
    double lo = 0.0, hi = 1.0 - 1e-300;
    // g(0) = alpha > 0; g -> 1 - alpha - a(1-alpha) < 0 as b -> 1
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return pareto_quantile(a, 0.5 * (lo + hi));
}

/// Left quantile of a sample: x_(ceil(n u)).
inline double empirical_quantile(std::vector<double> x, double u) {
    std::sort(x.begin(), x.end());
    auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(x.size()) * u - 1e-12));
    k = std::clamp<std::size_t>(k, 1, x.size());
    return x[k - 1];
}

/// ES of a sample as the greedy solution of the dual: put density at most
/// 1/(1-alpha) on the largest atoms until the mass is exhausted.
inline double empirical_es_greedy(std::vector<double> x, double alpha) {
    std::sort(x.begin(), x.end(), std::greater<>());
    const double n = static_cast<double>(x.size());
    double mass = 1.0 - alpha, acc = 0.0;
    for (double v : x) {
        const double take = std::min(mass, 1.0 / n);
        acc += take * v;
        mass -= take;
        if (mass <= 0.0) break;
    }
    return acc / (1.0 - alpha);
}

/// Expectile of a sample by bisection on the raw FOC sums.
inline double empirical_expectile_bisection(const std::vector<double>& x, double alpha) {
    auto g = [&](double m) {
        long double up = 0, down = 0;
        for (double v : x) {
            if (v > m) up += v - m;
            else down += m - v;
        }
        return static_cast<double>(alpha * up - (1.0 - alpha) * down);
    };
    double lo = *std::min_element(x.begin(), x.end()), hi = *std::max_element(x.begin(), x.end());
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double mean(const std::vector<double>& x) {
    long double s = 0;
    for (double v : x) s += v;
    return static_cast<double>(s / x.size());
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Mixed-family sample of size n from a std::mt19937_64 stream (independent
/// of the library generator).
inline std::vector<double> random_sample(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> family(0, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int f = family(rng);
    const double shape = 1.5 + 3.0 * u(rng);
    std::vector<double> x(n);
    for (auto& v : x) {
        const double w = u(rng);
        switch (f) {
        case 0: v = std::pow(1.0 - w, -1.0 / shape) - 1.0; break;
        case 1: v = -std::log1p(-w); break;
        case 2: v = w * 10.0 - 5.0; break;
        case 3: v = std::floor(w * 4.0); break; // atoms with ties
        default: v = std::tan(M_PI * (w - 0.5)) / (1.0 + shape); break;
        }
    }
    return x;
}

} // namespace oracle

#endif // TAILRISK_TESTS_ORACLES_HPP
