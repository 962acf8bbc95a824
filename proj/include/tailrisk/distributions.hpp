#ifndef TAILRISK_DISTRIBUTIONS_HPP
#define TAILRISK_DISTRIBUTIONS_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "tailrisk/errors.hpp"
#include "tailrisk/numeric/special_functions.hpp"
#include "tailrisk/random.hpp"

namespace tailrisk {

/// Power law F(x) = x^a on [0, 1]; a = 1 is the uniform law.
struct PowerBeta {
    double a;
};
/// Unit-rate exponential.
struct Exponential {};
/// Pareto with F(x) = 1 - (1 + x)^{-a} on [0, inf).
struct Pareto {
    double a;
};
/// Standard Student t.
struct StudentT {
    double nu;
};
/// x1 with probability p, x2 with probability 1 - p.
struct TwoPoint {
    double x1;
    double x2;
    double p;
};
struct Uniform01 {};

using Family = std::variant<PowerBeta, Exponential, Pareto, StudentT, TwoPoint, Uniform01>;

/// A parametric loss law: one of the families above translated by `shift`.
class DistributionSpec {
public:
    DistributionSpec(Family family, double shift = 0.0) : family_(family), shift_(shift) { validate(); }

    const Family& family() const { return family_; }
    double shift() const { return shift_; }

    /// The same law translated so that its mean is zero.
    DistributionSpec centered() const;
    DistributionSpec with_shift(double shift) const { return DistributionSpec(family_, shift); }

    bool is_continuous() const { return !std::holds_alternative<TwoPoint>(family_); }

private:
    void validate() const {
        detail::require(std::isfinite(shift_), "shift must be finite");
        std::visit(
            [](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, PowerBeta>) {
                    detail::require(std::isfinite(f.a) && f.a > 0.0, "power: a must be > 0");
                } else if constexpr (std::is_same_v<T, Pareto>) {
                    detail::require(std::isfinite(f.a) && f.a > 1.0, "pareto: a must be > 1 (finite mean)");
                } else if constexpr (std::is_same_v<T, StudentT>) {
                    detail::require(std::isfinite(f.nu) && f.nu > 1.0, "student: nu must be > 1 (finite mean)");
                } else if constexpr (std::is_same_v<T, TwoPoint>) {
                    detail::require(std::isfinite(f.x1) && std::isfinite(f.x2), "twopoint: x1, x2 must be finite");
                    detail::require(f.x1 <= f.x2, "twopoint: requires x1 <= x2");
                    detail::require(f.p > 0.0 && f.p < 1.0, "twopoint: p must lie in (0, 1)");
                }
            },
            family_);
    }

    Family family_;
    double shift_;
};

// ---------------------------------------------------------------------------
// Text form

namespace detail {

inline double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InvalidArgument(what + ": cannot parse number '" + text + "'");
    }
    if (used != text.size()) throw InvalidArgument(what + ": trailing characters in '" + text + "'");
    return v;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

/// Splits "name:k1=v1,k2=v2" into the name and a key/value map.
inline std::pair<std::string, std::map<std::string, double>> parse_keyed(const std::string& text,
                                                                          const std::string& what) {
    const std::string s = trim(text);
    const auto colon = s.find(':');
    std::string name = trim(s.substr(0, colon));
    std::map<std::string, double> kv;
    if (colon != std::string::npos) {
        std::stringstream rest(s.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw InvalidArgument(what + ": expected key=value, got '" + item + "'");
            const std::string key = trim(item.substr(0, eq));
            if (kv.count(key)) throw InvalidArgument(what + ": duplicate key '" + key + "'");
            kv[key] = parse_number(trim(item.substr(eq + 1)), what + " key '" + key + "'");
        }
    }
    return {name, kv};
}

inline double take(std::map<std::string, double>& kv, const std::string& key, const std::string& what) {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidArgument(what + ": missing parameter '" + key + "'");
    const double v = it->second;
    kv.erase(it);
    return v;
}

/// Shortest text that parses back to exactly v.
inline std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace detail

/// Parses "pareto:a=2.1", "student:nu=2.3", "power:a=1.1", "exp", "uniform",
/// "twopoint:x1=0,x2=1,p=0.5", each optionally followed by ",shift=<value>"
/// (or ":shift=<value>" for the parameterless families).
inline DistributionSpec parse_distribution(const std::string& text) {
    const std::string what = "distribution '" + text + "'";
    auto [name, kv] = detail::parse_keyed(text, what);
    double shift = 0.0;
    if (auto it = kv.find("shift"); it != kv.end()) {
        shift = it->second;
        kv.erase(it);
    }
    std::optional<Family> fam;
    if (name == "pareto") fam = Pareto{detail::take(kv, "a", what)};
    else if (name == "student" || name == "t") fam = StudentT{detail::take(kv, "nu", what)};
    else if (name == "power" || name == "beta") fam = PowerBeta{detail::take(kv, "a", what)};
    else if (name == "exp" || name == "exponential") fam = Exponential{};
    else if (name == "uniform") fam = Uniform01{};
    else if (name == "twopoint") {
        const double x1 = detail::take(kv, "x1", what);
        const double x2 = detail::take(kv, "x2", what);
        fam = TwoPoint{x1, x2, detail::take(kv, "p", what)};
    } else {
        throw InvalidArgument(what + ": unknown family '" + name + "'");
    }
    if (!kv.empty()) throw InvalidArgument(what + ": unknown parameter '" + kv.begin()->first + "'");
    return DistributionSpec(*fam, shift);
}

inline std::string to_string(const DistributionSpec& d) {
    using detail::format_number;
    std::string s = std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PowerBeta>) return "power:a=" + format_number(f.a);
            else if constexpr (std::is_same_v<T, Exponential>) return "exp";
            else if constexpr (std::is_same_v<T, Pareto>) return "pareto:a=" + format_number(f.a);
            else if constexpr (std::is_same_v<T, StudentT>) return "student:nu=" + format_number(f.nu);
            else if constexpr (std::is_same_v<T, TwoPoint>)
                return "twopoint:x1=" + format_number(f.x1) + ",x2=" + format_number(f.x2) + ",p=" + format_number(f.p);
            else return "uniform";
        },
        d.family());
    if (d.shift() != 0.0) s += (s.find(':') == std::string::npos ? ":shift=" : ",shift=") + format_number(d.shift());
    return s;
}

// ---------------------------------------------------------------------------
// Unshifted family formulas. `w` always denotes 1 - u, passed separately so
// upper-tail quantities keep full relative precision.

namespace detail {

// Integral of (1 - x^a) over [m, 1] for m in [0, 1].
inline double power_partial(double a, double m) {
    const double d = 1.0 - m;
    if (d < 1e-2) {
        // sum_{k>=2} binom(a, k-1) (-d)^k / k
        double binom = a; // binom(a, 1)
        double dk = d * d;
        double acc = 0.0;
        for (int k = 2; k < 40; ++k) {
            const double term = binom * dk / k * ((k % 2 == 0) ? 1.0 : -1.0);
            acc += term;
            if (std::fabs(term) <= 1e-18 * std::fabs(acc)) break;
            binom *= (a - (k - 1)) / k;
            dk *= d;
        }
        return acc;
    }
    return d - (1.0 - std::pow(m, a + 1.0)) / (a + 1.0);
}

struct FamilyMath {
    static double mean(const PowerBeta& f) { return f.a / (f.a + 1.0); }
    static double mean(const Exponential&) { return 1.0; }
    static double mean(const Pareto& f) { return 1.0 / (f.a - 1.0); }
    static double mean(const StudentT&) { return 0.0; }
    static double mean(const TwoPoint& f) { return f.p * f.x1 + (1.0 - f.p) * f.x2; }
    static double mean(const Uniform01&) { return 0.5; }

    // P[L <= x]
    static double cdf(const PowerBeta& f, double x) { return x <= 0.0 ? 0.0 : x >= 1.0 ? 1.0 : std::pow(x, f.a); }
    static double cdf(const Exponential&, double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }
    static double cdf(const Pareto& f, double x) { return x <= 0.0 ? 0.0 : -std::expm1(-f.a * std::log1p(x)); }
    static double cdf(const StudentT& f, double x) { return numeric::student_t_cdf(f.nu, x); }
    static double cdf(const TwoPoint& f, double x) { return x < f.x1 ? 0.0 : x < f.x2 ? f.p : 1.0; }
    static double cdf(const Uniform01&, double x) { return x <= 0.0 ? 0.0 : x >= 1.0 ? 1.0 : x; }

    // P[L > x]
    static double sf(const PowerBeta& f, double x) {
        return x <= 0.0 ? 1.0 : x >= 1.0 ? 0.0 : -std::expm1(f.a * std::log(x));
    }
    static double sf(const Exponential&, double x) { return x <= 0.0 ? 1.0 : std::exp(-x); }
    static double sf(const Pareto& f, double x) { return x <= 0.0 ? 1.0 : std::exp(-f.a * std::log1p(x)); }
    static double sf(const StudentT& f, double x) { return numeric::student_t_sf(f.nu, x); }
    static double sf(const TwoPoint& f, double x) { return 1.0 - cdf(f, x); }
    static double sf(const Uniform01&, double x) { return x <= 0.0 ? 1.0 : x >= 1.0 ? 0.0 : 1.0 - x; }

    // P[L < x]
    static double cdf_left(const TwoPoint& f, double x) { return x <= f.x1 ? 0.0 : x <= f.x2 ? f.p : 1.0; }
    template <class T>
    static double cdf_left(const T& f, double x) { return cdf(f, x); }

    static double pdf(const PowerBeta& f, double x) {
        if (x < 0.0 || x > 1.0) return 0.0;
        if (x == 0.0) return f.a < 1.0 ? std::numeric_limits<double>::infinity() : (f.a == 1.0 ? 1.0 : 0.0);
        return f.a * std::pow(x, f.a - 1.0);
    }
    static double pdf(const Exponential&, double x) { return x < 0.0 ? 0.0 : std::exp(-x); }
    static double pdf(const Pareto& f, double x) { return x < 0.0 ? 0.0 : f.a * std::exp(-(f.a + 1.0) * std::log1p(x)); }
    static double pdf(const StudentT& f, double x) { return numeric::student_t_pdf(f.nu, x); }
    static double pdf(const TwoPoint&, double) { throw Unsupported("twopoint: no density"); }
    static double pdf(const Uniform01&, double x) { return (x < 0.0 || x > 1.0) ? 0.0 : 1.0; }

    static double quantile(const PowerBeta& f, double u, double w) {
        return u <= 0.5 ? std::pow(u, 1.0 / f.a) : std::exp(std::log1p(-w) / f.a);
    }
    static double quantile(const Exponential&, double u, double w) { return u <= 0.5 ? -std::log1p(-u) : -std::log(w); }
    static double quantile(const Pareto& f, double u, double w) {
        return u <= 0.5 ? std::expm1(-std::log1p(-u) / f.a) : std::expm1(-std::log(w) / f.a);
    }
    static double quantile(const StudentT& f, double u, double w) {
        if (u == 0.5) return 0.0;
        return u > 0.5 ? numeric::student_t_upper_quantile(f.nu, w) : -numeric::student_t_upper_quantile(f.nu, u);
    }
    static double quantile(const TwoPoint& f, double u, double) { return u <= f.p ? f.x1 : f.x2; }
    static double quantile(const Uniform01&, double u, double) { return u; }

    // integral of q over [u, 1], i.e. (1 - u) ES_u
    static double tail_integral(const PowerBeta& f, double u, double w) {
        const double e = 1.0 + 1.0 / f.a;
        const double one_minus_pow = u <= 0.5 ? 1.0 - std::pow(u, e) : -std::expm1(e * std::log1p(-w));
        return f.a / (f.a + 1.0) * one_minus_pow;
    }
    static double tail_integral(const Exponential&, double u, double w) { return w * (1.0 + quantile(Exponential{}, u, w)); }
    static double tail_integral(const Pareto& f, double u, double w) {
        // a/(a-1) w^{1-1/a} - w
        const double lw = u <= 0.5 ? std::log1p(-u) : std::log(w);
        return f.a / (f.a - 1.0) * std::exp((1.0 - 1.0 / f.a) * lw) - w;
    }
    static double tail_integral(const StudentT& f, double u, double w) {
        const double q = quantile(f, u, w);
        return pdf(f, q) * (f.nu + q * q) / (f.nu - 1.0);
    }
    static double tail_integral(const TwoPoint& f, double u, double w) {
        return u <= f.p ? (f.p - u) * f.x1 + (1.0 - f.p) * f.x2 : w * f.x2;
    }
    static double tail_integral(const Uniform01&, double u, double w) { return 0.5 * w * (1.0 + u); }

    // E[(L - m)^+]
    static double upper_partial(const PowerBeta& f, double m) {
        if (m >= 1.0) return 0.0;
        if (m <= 0.0) return mean(f) - m;
        return power_partial(f.a, m);
    }
    static double upper_partial(const Exponential&, double m) { return m >= 0.0 ? std::exp(-m) : 1.0 - m; }
    static double upper_partial(const Pareto& f, double m) {
        return m >= 0.0 ? std::exp((1.0 - f.a) * std::log1p(m)) / (f.a - 1.0) : mean(f) - m;
    }
    static double upper_partial(const StudentT& f, double m) {
        const double am = std::fabs(m);
        const double tail = numeric::student_t_pdf(f.nu, am) * (f.nu + am * am) / (f.nu - 1.0) - am * numeric::student_t_sf(f.nu, am);
        // E[(L-m)^+] - E[(m-L)^+] = -m, and the law is symmetric
        return m >= 0.0 ? tail : tail + am;
    }
    static double upper_partial(const TwoPoint& f, double m) {
        return f.p * std::fmax(f.x1 - m, 0.0) + (1.0 - f.p) * std::fmax(f.x2 - m, 0.0);
    }
    static double upper_partial(const Uniform01&, double m) {
        if (m >= 1.0) return 0.0;
        if (m <= 0.0) return 0.5 - m;
        return 0.5 * (1.0 - m) * (1.0 - m);
    }
};

} // namespace detail

// ---------------------------------------------------------------------------
// Public evaluation functions (shift applied)

inline double mean(const DistributionSpec& d) {
    return std::visit([](const auto& f) { return detail::FamilyMath::mean(f); }, d.family()) + d.shift();
}

inline DistributionSpec DistributionSpec::centered() const {
    const double m = std::visit([](const auto& f) { return detail::FamilyMath::mean(f); }, family_);
    return DistributionSpec(family_, -m);
}

/// P[L <= x].
inline double cdf(const DistributionSpec& d, double x) {
    detail::require(!std::isnan(x), "cdf: x is NaN");
    return std::visit([&](const auto& f) { return detail::FamilyMath::cdf(f, x - d.shift()); }, d.family());
}

/// P[L < x]; differs from cdf only at atoms.
inline double cdf_left(const DistributionSpec& d, double x) {
    detail::require(!std::isnan(x), "cdf_left: x is NaN");
    return std::visit([&](const auto& f) { return detail::FamilyMath::cdf_left(f, x - d.shift()); }, d.family());
}

/// P[L > x], accurate in the upper tail.
inline double survival(const DistributionSpec& d, double x) {
    detail::require(!std::isnan(x), "survival: x is NaN");
    return std::visit([&](const auto& f) { return detail::FamilyMath::sf(f, x - d.shift()); }, d.family());
}

/// Density; Unsupported for TwoPoint.
inline double pdf(const DistributionSpec& d, double x) {
    return std::visit([&](const auto& f) { return detail::FamilyMath::pdf(f, x - d.shift()); }, d.family());
}

/// Left quantile inf{m : F(m) >= u}, with one_minus_u = 1 - u supplied exactly.
/// Either of the pair may round to 1 when the other is tiny.
inline double quantile(const DistributionSpec& d, double u, double one_minus_u) {
    detail::require(u > 0.0 && one_minus_u > 0.0 && u <= 1.0 && one_minus_u <= 1.0, "quantile: u must lie in (0, 1)");
    return std::visit([&](const auto& f) { return detail::FamilyMath::quantile(f, u, one_minus_u); }, d.family()) +
           d.shift();
}

inline double quantile(const DistributionSpec& d, double u) { return quantile(d, u, 1.0 - u); }

/// Integral of the quantile function over [u, 1], that is (1 - u) ES_u.
inline double tail_integral(const DistributionSpec& d, double u, double one_minus_u) {
    detail::require(u >= 0.0 && one_minus_u > 0.0 && one_minus_u <= 1.0, "tail_integral: u must lie in [0, 1)");
    if (u == 0.0) return mean(d);
    return std::visit([&](const auto& f) { return detail::FamilyMath::tail_integral(f, u, one_minus_u); },
                      d.family()) +
           one_minus_u * d.shift();
}

inline double tail_integral(const DistributionSpec& d, double u) { return tail_integral(d, u, 1.0 - u); }

/// ES_beta from the closed-form tail integral.
inline double es_closed_form(const DistributionSpec& d, double beta, double one_minus_beta) {
    detail::require(beta >= 0.0 && beta < 1.0, "es_closed_form: beta must lie in [0, 1)");
    if (beta == 0.0) return mean(d);
    return tail_integral(d, beta, one_minus_beta) / one_minus_beta;
}

inline double es_closed_form(const DistributionSpec& d, double beta) { return es_closed_form(d, beta, 1.0 - beta); }

/// E[(L - m)^+] in closed form.
inline double upper_partial_moment(const DistributionSpec& d, double m) {
    detail::require(!std::isnan(m), "upper_partial_moment: m is NaN");
    return std::visit([&](const auto& f) { return detail::FamilyMath::upper_partial(f, m - d.shift()); }, d.family());
}

/// Smallest and largest points of the support (possibly infinite).
inline std::pair<double, double> support(const DistributionSpec& d) {
    static constexpr double inf = std::numeric_limits<double>::infinity();
    auto base = std::visit(
        [](const auto& f) -> std::pair<double, double> {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PowerBeta> || std::is_same_v<T, Uniform01>) return {0.0, 1.0};
            else if constexpr (std::is_same_v<T, Exponential> || std::is_same_v<T, Pareto>) return {0.0, inf};
            else if constexpr (std::is_same_v<T, StudentT>) return {-inf, inf};
            else return {f.x1, f.x2};
        },
        d.family());
    return {base.first + d.shift(), base.second + d.shift()};
}

// ---------------------------------------------------------------------------
// Extreme-value classification

enum class Mda { Frechet, Weibull, Gumbel };

inline const char* to_string(Mda m) {
    switch (m) {
    case Mda::Frechet: return "Frechet";
    case Mda::Weibull: return "Weibull";
    case Mda::Gumbel: return "Gumbel";
    }
    return "?";
}

/// Maximum domain of attraction with first-order index eta, second-order
/// parameter rho and auxiliary function A (absent for Gumbel).
struct EvClassification {
    Mda mda;
    double eta = 0.0;
    std::optional<double> rho;
    std::function<double(double)> auxiliary;
    std::optional<double> right_endpoint;
};

/// Classification of the law as specified, shift included. For Frechet laws a
/// nonzero shift s changes the auxiliary function to A(x) - eta s / x and
/// raises rho to max(-1, rho), the translation rule for second-order regular
/// variation (centering uses s = -E[L]).
inline EvClassification mda_classify(const DistributionSpec& d) {
    const double s = d.shift();
    return std::visit(
        [s](const auto& f) -> EvClassification {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Pareto> || std::is_same_v<T, StudentT>) {
                double eta, rho;
                std::function<double(double)> base;
                if constexpr (std::is_same_v<T, Pareto>) {
                    eta = f.a;
                    rho = -1.0;
                    base = [a = f.a](double x) { return a / x; };
                } else {
                    eta = f.nu;
                    rho = -2.0;
                    const double k = f.nu * f.nu * (f.nu + 1.0) / (f.nu + 2.0);
                    base = [k](double x) { return k / (x * x); };
                }
                if (s == 0.0) return {Mda::Frechet, eta, rho, base, std::nullopt};
                auto shifted = [base, eta, s](double x) { return base(x) - eta * s / x; };
                return {Mda::Frechet, eta, std::max(-1.0, rho), shifted, std::nullopt};
            } else if constexpr (std::is_same_v<T, PowerBeta>) {
                auto aux = [a = f.a](double x) { return (a - 1.0) / (2.0 * x); };
                return {Mda::Weibull, 1.0, -1.0, aux, 1.0 + s};
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return {Mda::Weibull, 1.0, -1.0, [](double) { return 0.0; }, 1.0 + s};
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return {Mda::Gumbel, 0.0, std::nullopt, nullptr, std::nullopt};
            } else {
                throw Unsupported("mda_classify: two-point laws have no extreme-value classification");
            }
        },
        d.family());
}

// ---------------------------------------------------------------------------
// Sampling

/// n draws by inverse transform from a SplitMix64 stream seeded with `seed`.
/// Returned unsorted, in draw order.
inline std::vector<double> draw(const DistributionSpec& d, std::size_t n, std::uint64_t seed) {
    detail::require(n >= 1, "sample: n must be >= 1");
    SplitMix64 rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [u, w] = rng.uniform_pair();
        out.push_back(quantile(d, u, w));
    }
    return out;
}

} // namespace tailrisk

#endif // TAILRISK_DISTRIBUTIONS_HPP
