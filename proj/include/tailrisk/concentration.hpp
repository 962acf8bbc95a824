#ifndef TAILRISK_CONCENTRATION_HPP
#define TAILRISK_CONCENTRATION_HPP

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "tailrisk/distributions.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/risk_measures.hpp"

namespace tailrisk {

/// E[exp(r |L|^k)] < inf with k > 1.
struct ExpMoment {
    double k;
    double r;
};
/// E[exp(r |L|^k)] < inf with k in (0, 1); the bound holds for every s in (0, k).
struct SubExpMoment {
    double k;
    double r;
    double s;
};
/// E[|L|^q] < inf with q > 2; the bound holds for every s in (2, q).
struct PolyMoment {
    double q;
    double s;
};

/// Moment assumption on the loss together with the constants C and c of the
/// Wasserstein concentration bound. The constants are not known in closed
/// form; both default to 1 and every report carries them.
struct TailClass {
    std::variant<ExpMoment, SubExpMoment, PolyMoment> kind;
    double C = 1.0;
    double c = 1.0;
};

inline void validate(const TailClass& tc) {
    detail::require(std::isfinite(tc.C) && tc.C > 0.0, "tail class: C must be > 0");
    detail::require(std::isfinite(tc.c) && tc.c > 0.0, "tail class: c must be > 0");
    if (const auto* e = std::get_if<ExpMoment>(&tc.kind)) {
        detail::require(e->k > 1.0 && e->r > 0.0, "tail class exp: requires k > 1 and r > 0");
    } else if (const auto* se = std::get_if<SubExpMoment>(&tc.kind)) {
        detail::require(se->k > 0.0 && se->k < 1.0 && se->r > 0.0, "tail class subexp: requires k in (0, 1) and r > 0");
        detail::require(se->s > 0.0 && se->s < se->k, "tail class subexp: requires s in (0, k)");
    } else {
        const auto& p = std::get<PolyMoment>(tc.kind);
        detail::require(p.q > 2.0, "tail class poly: requires q > 2");
        detail::require(p.s > 2.0 && p.s < p.q, "tail class poly: requires s in (2, q)");
    }
}

/// Parses "poly:q=3,s=2.5", "exp:k=2,r=1", "subexp:k=0.5,r=1,s=0.3", each
/// optionally with ",C=<value>" and ",c=<value>".
inline TailClass parse_tail_class(const std::string& text) {
    const std::string what = "tail class '" + text + "'";
    auto [name, kv] = detail::parse_keyed(text, what);
    TailClass tc{PolyMoment{0.0, 0.0}};
    if (auto it = kv.find("C"); it != kv.end()) {
        tc.C = it->second;
        kv.erase(it);
    }
    if (auto it = kv.find("c"); it != kv.end()) {
        tc.c = it->second;
        kv.erase(it);
    }
    if (name == "exp") {
        const double k = detail::take(kv, "k", what);
        tc.kind = ExpMoment{k, detail::take(kv, "r", what)};
    } else if (name == "subexp") {
        const double k = detail::take(kv, "k", what);
        const double r = detail::take(kv, "r", what);
        tc.kind = SubExpMoment{k, r, detail::take(kv, "s", what)};
    } else if (name == "poly") {
        const double q = detail::take(kv, "q", what);
        tc.kind = PolyMoment{q, detail::take(kv, "s", what)};
    } else {
        throw InvalidArgument(what + ": unknown kind '" + name + "' (expected exp, subexp or poly)");
    }
    if (!kv.empty()) throw InvalidArgument(what + ": unknown parameter '" + kv.begin()->first + "'");
    validate(tc);
    return tc;
}

enum class Measure { ES, Expectile };

inline const char* to_string(Measure m) { return m == Measure::ES ? "es" : "expectile"; }

/// Deviation scale h: eps (1 - alpha) for ES, eps (1 - alpha) / alpha for the expectile.
inline double deviation_scale(double epsilon, double alpha, Measure m) {
    detail::require_level(alpha, 0.5, true, "deviation bound");
    detail::require(epsilon > 0.0 && epsilon <= alpha / (1.0 - alpha), "epsilon must lie in (0, alpha/(1-alpha)]");
    const double h = epsilon * (1.0 - alpha);
    return m == Measure::ES ? h : h / alpha;
}

/// B(n, h), clamped to [0, 1].
inline double concentration_bound(const TailClass& tc, double n, double h) {
    validate(tc);
    detail::require(n >= 1.0, "concentration bound: n must be >= 1");
    detail::require(h > 0.0, "concentration bound: h must be > 0");
    double b;
    if (std::holds_alternative<ExpMoment>(tc.kind)) {
        b = tc.C * std::exp(-tc.c * n * h * h);
    } else if (const auto* se = std::get_if<SubExpMoment>(&tc.kind)) {
        b = tc.C * std::exp(-tc.c * std::pow(n, se->s) * h * h);
    } else {
        const double s = std::get<PolyMoment>(tc.kind).s;
        b = tc.C * std::pow(n, 1.0 - s) * std::pow(h, 2.0 * (1.0 - s));
    }
    return std::fmin(1.0, std::fmax(0.0, b));
}

/// Bound on P[|R_n - R| >= eps] for R = ES_alpha or e_alpha.
inline double deviation_bound(const TailClass& tc, double n, double epsilon, double alpha, Measure m) {
    return concentration_bound(tc, n, deviation_scale(epsilon, alpha, m));
}

struct SampleSize {
    /// Smallest size meeting the confidence, rounded up. A double since the
    /// values overflow 64-bit integers at extreme levels.
    double n;
    /// True when the formula gave a nonpositive size (gamma at or above the
    /// prefactor) and n was set to 1.
    bool clamped = false;
};

/// H(gamma, h).
inline SampleSize concentration_size(const TailClass& tc, double gamma, double h) {
    validate(tc);
    detail::require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    detail::require(h > 0.0, "h must be > 0");
    double n;
    if (std::holds_alternative<ExpMoment>(tc.kind)) {
        n = -std::log(gamma / tc.C) / tc.c / (h * h);
    } else if (const auto* se = std::get_if<SubExpMoment>(&tc.kind)) {
        const double l = -std::log(gamma / (2.0 * tc.C)) / tc.c;
        n = l > 0.0 ? std::pow(l, 1.0 / se->s) * std::pow(h, -2.0 / se->s) : l;
    } else {
        const double s = std::get<PolyMoment>(tc.kind).s;
        n = std::pow(tc.C / gamma, 1.0 / (s - 1.0)) / (h * h);
    }
    if (!(n > 0.0)) return {1.0, true};
    return {std::fmax(1.0, std::ceil(n)), false};
}

inline SampleSize sample_size(const TailClass& tc, double gamma, double epsilon, double alpha, Measure m) {
    return concentration_size(tc, gamma, deviation_scale(epsilon, alpha, m));
}

/// n_q = -ln(gamma/4) / (2 eps^2) * delta^-2, rounded up.
inline double var_sample_size(double delta_alpha, double gamma, double epsilon) {
    detail::require(delta_alpha > 0.0 && std::isfinite(delta_alpha), "var_sample_size: delta_alpha must be > 0");
    detail::require(gamma > 0.0 && gamma < 1.0, "var_sample_size: gamma must lie in (0, 1)");
    detail::require(epsilon > 0.0, "var_sample_size: epsilon must be > 0");
    return std::fmax(1.0, std::ceil(-std::log(gamma / 4.0) / (2.0 * epsilon * epsilon) / (delta_alpha * delta_alpha)));
}

struct SampleSizeReport {
    double alpha;
    double epsilon;
    double gamma;
    double delta_alpha;
    double n_var;
    double n_es;
    double n_expectile;
    double ratio_es;        // n_es / n_var
    double ratio_expectile; // n_expectile / n_var
    double C;
    double c;
    bool clamped = false;
};

/// Sizes for one level; delta_alpha is the density lower bound near q_alpha.
inline SampleSizeReport sample_size_report(const TailClass& tc, double gamma, double epsilon, double alpha,
                                           double delta_alpha) {
    const auto es = sample_size(tc, gamma, epsilon, alpha, Measure::ES);
    const auto ex = sample_size(tc, gamma, epsilon, alpha, Measure::Expectile);
    const double nv = var_sample_size(delta_alpha, gamma, epsilon);
    return {alpha, epsilon, gamma, delta_alpha, nv, es.n, ex.n, es.n / nv, ex.n / nv, tc.C, tc.c,
            es.clamped || ex.clamped};
}

/// Reports along an alpha grid with delta_alpha = f(q_alpha + delta_offset),
/// the density infimum for laws whose density decreases in the upper tail.
inline std::vector<SampleSizeReport> size_ratio_curve(const DistributionSpec& d, const TailClass& tc, double gamma,
                                                      double epsilon, const std::vector<double>& alphas,
                                                      double delta_offset = 1.0) {
    if (!d.is_continuous()) throw Unsupported("size_ratio_curve: the law has no density");
    detail::require(delta_offset >= 0.0, "size_ratio_curve: delta offset must be >= 0");
    std::vector<SampleSizeReport> out;
    for (double a : alphas) {
        const double delta = pdf(d, value_at_risk(d, a) + delta_offset);
        out.push_back(sample_size_report(tc, gamma, epsilon, a, delta));
    }
    return out;
}

} // namespace tailrisk

#endif // TAILRISK_CONCENTRATION_HPP
