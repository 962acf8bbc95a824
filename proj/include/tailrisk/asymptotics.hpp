#ifndef TAILRISK_ASYMPTOTICS_HPP
#define TAILRISK_ASYMPTOTICS_HPP

#include <cmath>
#include <vector>

#include "tailrisk/allocation.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/risk_measures.hpp"

namespace tailrisk {

/// Expansions are truncated: the o(.) remainders are dropped.
enum class Order { First, Second };

struct ExpansionResult {
    Order order;
    /// First-order constant, or the alpha-dependent leading factor.
    double leading;
    /// Multiplicative correction; value = leading * (1 + correction).
    double correction;
    double value;
    double alpha;
};

namespace detail {

inline ExpansionResult assemble(Order order, double leading, double correction, double alpha) {
    if (order == Order::First) correction = 0.0;
    return {order, leading, correction, leading * (1.0 + correction), alpha};
}

inline void require_frechet(double eta, double rho) {
    require(eta > 1.0, "frechet expansion: eta must be > 1");
    require(rho <= 0.0, "frechet expansion: rho must be <= 0");
}

} // namespace detail

/// C_{eta,rho} of the second-order Frechet expansion of e/ES.
inline double frechet_c(double eta, double rho) {
    detail::require_frechet(eta, rho);
    if (rho == 0.0) return (std::log(eta - 1.0) + 1.0 / (eta - 1.0)) / eta;
    const double denom = eta - rho - 1.0;
    if (denom == 0.0) throw InvalidArgument("frechet_c: eta - rho - 1 = 0");
    return (eta - 1.0) / (rho * eta) * (1.0 - std::pow(eta - 1.0, -rho / eta)) / denom;
}

/// e_alpha / ES_alpha in the Frechet domain. First order is the constant
/// (eta-1)^{(eta-1)/eta}/eta; second order multiplies (2 alpha - 1)^{1/eta}
/// into the leading factor and corrects by -C_{eta,rho} A(q_alpha).
inline ExpansionResult frechet_ratio(double eta, double rho, double a_at_q, double alpha, Order order) {
    detail::require_frechet(eta, rho);
    detail::require_level(alpha, 0.5, true, "frechet_ratio");
    if (order == Order::First) return detail::assemble(order, frechet_constant(eta), 0.0, alpha);
    const double leading = frechet_constant(eta) * std::pow(2.0 * alpha - 1.0, 1.0 / eta);
    return detail::assemble(order, leading, -frechet_c(eta, rho) * a_at_q, alpha);
}

/// (1 - beta*) / (1 - alpha) in the Frechet domain: eta - 1 at first order.
inline ExpansionResult frechet_beta_star_ratio(double eta, double rho, double a_at_q, double alpha, Order order) {
    detail::require_frechet(eta, rho);
    detail::require_level(alpha, 0.5, true, "frechet_beta_star_ratio");
    if (order == Order::First) return detail::assemble(order, eta - 1.0, 0.0, alpha);
    const double denom = eta - rho - 1.0;
    if (denom == 0.0) throw InvalidArgument("frechet_beta_star_ratio: eta - rho - 1 = 0");
    const double leading = (eta - 1.0) / (2.0 * alpha - 1.0);
    return detail::assemble(order, leading, -std::pow(eta - 1.0, -rho / eta) / denom * a_at_q, alpha);
}

/// Argument at which the Weibull auxiliary function is evaluated:
/// (xhat - q_alpha)^{-eta/(eta+1)}.
inline double weibull_a0_argument(double eta, double xhat, double q) {
    detail::require(q < xhat, "weibull expansion: q_alpha must be below the right endpoint");
    return std::pow(xhat - q, -eta / (eta + 1.0));
}

/// (xhat - ES_alpha) / (xhat - e_alpha) in the Weibull domain with
/// C~ = ((xhat - mean)(eta + 1))^{1/(eta+1)}. The leading factor tends to 0.
inline ExpansionResult weibull_ratio(double eta, double rho, double xhat, double mean, double q, double a0_at_q,
                                     double alpha, Order order) {
    detail::require(eta > 0.0, "weibull_ratio: eta must be > 0");
    detail::require(rho < 0.0, "weibull_ratio: rho must be < 0");
    detail::require(q < xhat, "weibull_ratio: q_alpha must be below the right endpoint");
    detail::require(mean < xhat, "weibull_ratio: mean must be below the right endpoint");
    detail::require_level(alpha, 0.5, true, "weibull_ratio");
    if (eta - rho + 1.0 == 0.0) throw InvalidArgument("weibull_ratio: eta - rho + 1 = 0");
    const double gap = xhat - q;
    const double c = std::pow((xhat - mean) * (eta + 1.0), 1.0 / (eta + 1.0));
    const double leading = eta * std::pow((2.0 * alpha - 1.0) * gap, 1.0 / (eta + 1.0)) / ((eta + 1.0) * c);
    const double correction = c * std::pow(gap, eta / (eta + 1.0)) / ((eta + 1.0) * (xhat - mean)) +
                              std::pow(c, -rho) * a0_at_q / (rho * (eta - rho + 1.0));
    return detail::assemble(order, leading, correction, alpha);
}

/// Equivalent of (1 - beta*) / (1 - alpha) in the Weibull domain:
/// ((xhat - mean)(eta + 1) / (xhat - q_alpha))^{eta/(eta+1)}. Diverges as alpha -> 1.
inline double weibull_beta_star_ratio(double eta, double xhat, double mean, double q, double alpha) {
    detail::require(eta > 0.0, "weibull_beta_star_ratio: eta must be > 0");
    detail::require(q < xhat, "weibull_beta_star_ratio: q_alpha must be below the right endpoint");
    detail::require(mean < xhat, "weibull_beta_star_ratio: mean must be below the right endpoint");
    detail::require_level(alpha, 0.5, true, "weibull_beta_star_ratio");
    return std::pow((xhat - mean) * (eta + 1.0) / (xhat - q), eta / (eta + 1.0));
}

enum class GumbelRelation { LogEquivalent, Equivalent };

inline const char* to_string(GumbelRelation g) {
    return g == GumbelRelation::Equivalent ? "Equivalent" : "LogEquivalent";
}

/// In the Gumbel domain ln e_alpha ~ ln ES_alpha always, and e_alpha ~ ES_alpha
/// under a finite endpoint or the regularity condition on the tail.
inline GumbelRelation gumbel_relation(bool has_finite_endpoint, bool satisfies_regularity) {
    return (has_finite_endpoint || satisfies_regularity) ? GumbelRelation::Equivalent : GumbelRelation::LogEquivalent;
}

/// The relation for a built-in law; only the exponential is of Gumbel type.
inline GumbelRelation gumbel_relation(const DistributionSpec& d) {
    if (!std::holds_alternative<Exponential>(d.family()))
        throw Unsupported("gumbel_relation: " + to_string(d) + " is not of Gumbel type");
    return gumbel_relation(false, true);
}

// ---------------------------------------------------------------------------
// Estimation

/// Default number of upper order statistics: ceil(n^0.7), at most n - 1.
inline std::size_t default_hill_k(std::size_t n) {
    const auto k = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 0.7)));
    return std::min(k, n > 1 ? n - 1 : std::size_t{1});
}

/// Hill estimator of the tail index from the top k order statistics:
/// k / sum_{i=1..k} ln(X_(n-i+1) / X_(n-k)).
inline double hill_estimator(const Sample& s, std::size_t k) {
    const std::size_t n = s.size();
    detail::require(k >= 2, "hill_estimator: k must be >= 2");
    detail::require(k < n, "hill_estimator: k must be below the sample size");
    const auto x = s.values();
    const double threshold = x[n - k - 1];
    detail::require(threshold > 0.0, "hill_estimator: order statistics in the tail window must be positive");
    const double log_threshold = std::log(threshold);
    numeric::CompensatedSum acc;
    for (std::size_t i = 0; i < k; ++i) acc.add(std::log(x[n - 1 - i]) - log_threshold);
    if (!(acc.value() > 0.0)) throw ComputationError("hill_estimator: tail window is flat");
    return static_cast<double>(k) / acc.value();
}

/// (eta^ - 1)^{-1/eta^} q_{alpha,n} with eta^ the Hill estimate.
inline double extreme_expectile_estimate(const Sample& s, double alpha, std::size_t k) {
    detail::require_level(alpha, 0.5, true, "extreme_expectile_estimate");
    const double eta = hill_estimator(s, k);
    if (!(eta > 1.0)) throw ComputationError("extreme_expectile_estimate: Hill estimate <= 1, no finite mean");
    return std::pow(eta - 1.0, -1.0 / eta) * s.quantile(alpha);
}

inline double extreme_expectile_estimate(const Sample& s, double alpha) {
    return extreme_expectile_estimate(s, alpha, default_hill_k(s.size()));
}

// ---------------------------------------------------------------------------
// Exact versus truncated curves for the built-in families

struct ExpansionPoint {
    double alpha;
    double exact;
    double first;
    double second;
};

/// e_alpha / ES_alpha of the centered law against both Frechet expansions.
/// The auxiliary function of the centered law comes from mda_classify.
inline std::vector<ExpansionPoint> frechet_ratio_curve(const DistributionSpec& d, const std::vector<double>& alphas) {
    const DistributionSpec c = d.centered();
    const auto cls = mda_classify(c);
    if (cls.mda != Mda::Frechet) throw Unsupported("frechet_ratio_curve: " + to_string(d) + " is not of Frechet type");
    std::vector<ExpansionPoint> out;
    for (double a : alphas) {
        const double q = value_at_risk(c, a);
        const double exact = expectile(c, a) / expected_shortfall(c, a);
        const double aq = cls.auxiliary(q);
        out.push_back({a, exact, frechet_ratio(cls.eta, *cls.rho, aq, a, Order::First).value,
                       frechet_ratio(cls.eta, *cls.rho, aq, a, Order::Second).value});
    }
    return out;
}

/// (1 - beta*) / (1 - alpha) of the centered law against both expansions.
inline std::vector<ExpansionPoint> frechet_beta_star_curve(const DistributionSpec& d, const std::vector<double>& alphas) {
    const DistributionSpec c = d.centered();
    const auto cls = mda_classify(c);
    if (cls.mda != Mda::Frechet) throw Unsupported("frechet_beta_star_curve: " + to_string(d) + " is not of Frechet type");
    std::vector<ExpansionPoint> out;
    for (double a : alphas) {
        const double aq = cls.auxiliary(value_at_risk(c, a));
        const double exact = beta_star(c, a).one_minus_point / (1.0 - a);
        out.push_back({a, exact, frechet_beta_star_ratio(cls.eta, *cls.rho, aq, a, Order::First).value,
                       frechet_beta_star_ratio(cls.eta, *cls.rho, aq, a, Order::Second).value});
    }
    return out;
}

/// (xhat - ES_alpha) / (xhat - e_alpha) against both Weibull expansions.
inline std::vector<ExpansionPoint> weibull_ratio_curve(const DistributionSpec& d, const std::vector<double>& alphas) {
    const auto cls = mda_classify(d);
    if (cls.mda != Mda::Weibull) throw Unsupported("weibull_ratio_curve: " + to_string(d) + " is not of Weibull type");
    const double xhat = *cls.right_endpoint;
    const double mu = mean(d);
    std::vector<ExpansionPoint> out;
    for (double a : alphas) {
        const double q = value_at_risk(d, a);
        const double exact = (xhat - expected_shortfall(d, a)) / (xhat - expectile(d, a));
        const double a0 = cls.auxiliary(weibull_a0_argument(cls.eta, xhat, q));
        out.push_back({a, exact, weibull_ratio(cls.eta, *cls.rho, xhat, mu, q, a0, a, Order::First).value,
                       weibull_ratio(cls.eta, *cls.rho, xhat, mu, q, a0, a, Order::Second).value});
    }
    return out;
}

} // namespace tailrisk

#endif // TAILRISK_ASYMPTOTICS_HPP
