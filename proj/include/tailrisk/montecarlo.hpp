#ifndef TAILRISK_MONTECARLO_HPP
#define TAILRISK_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tailrisk/asymptotics.hpp"
#include "tailrisk/csv.hpp"
#include "tailrisk/numeric/summation.hpp"
#include "tailrisk/random.hpp"
#include "tailrisk/risk_measures.hpp"

namespace tailrisk {

enum class Comparison { ExpectileVsVaR, ExpectileVsES };

struct SimulationConfig {
    DistributionSpec dist;
    std::vector<double> alphas;
    std::vector<std::size_t> ns;
    std::uint64_t seed = 1;
    Comparison comparison = Comparison::ExpectileVsES;
    /// Replications per cell; with more than one, the empirical ratio and
    /// Err% reported are medians over replications.
    std::size_t replications = 1;
};

struct RatioTableRow {
    double alpha;
    double theoretical;
    std::vector<double> empirical; // one per n
    std::vector<double> err_pct;   // one per n
};

/// Seed of one table cell: the master seed mixed with the alpha index, the
/// n index and the replication index.
inline std::uint64_t cell_seed(std::uint64_t master, std::size_t alpha_index, std::size_t n_index,
                               std::size_t replication) {
    return mix_seed(master, {alpha_index, n_index, replication});
}

/// e_alpha / q_alpha or e_alpha / ES_alpha.
inline double risk_ratio(const LossSource& src, double alpha, Comparison cmp) {
    const double e = expectile(src, alpha);
    return e / (cmp == Comparison::ExpectileVsVaR ? value_at_risk(src, alpha) : expected_shortfall(src, alpha));
}

inline double err_pct(double theoretical, double empirical) {
    return std::fabs(theoretical - empirical) / std::fabs(theoretical) * 100.0;
}

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace detail

/// Empirical against theoretical ratios, one row per alpha and one column
/// pair per sample size. Theoretical values come from the closed forms only.
inline std::vector<RatioTableRow> ratio_table(const SimulationConfig& cfg) {
    detail::require(!cfg.alphas.empty(), "ratio_table: alpha list is empty");
    detail::require(!cfg.ns.empty(), "ratio_table: n list is empty");
    detail::require(cfg.replications >= 1, "ratio_table: replications must be >= 1");
    for (double a : cfg.alphas) detail::require_level(a, 0.5, true, "ratio_table");
    for (std::size_t n : cfg.ns) detail::require(n >= 1, "ratio_table: n must be >= 1");

    std::vector<RatioTableRow> rows;
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
        const double a = cfg.alphas[i];
        RatioTableRow row{a, risk_ratio(cfg.dist, a, cfg.comparison), {}, {}};
        for (std::size_t j = 0; j < cfg.ns.size(); ++j) {
            std::vector<double> ratios, errs;
            for (std::size_t r = 0; r < cfg.replications; ++r) {
                const Sample s = sample(cfg.dist, cfg.ns[j], cell_seed(cfg.seed, i, j, r));
                const double emp = risk_ratio(LossSource(s), a, cfg.comparison);
                ratios.push_back(emp);
                errs.push_back(err_pct(row.theoretical, emp));
            }
            row.empirical.push_back(detail::median(ratios));
            row.err_pct.push_back(detail::median(errs));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// "1e6", "5e5" for sizes of the form m * 10^k with a single digit m,
/// otherwise the plain integer.
inline std::string size_label(std::size_t n) {
    std::size_t m = n;
    int k = 0;
    while (m >= 10 && m % 10 == 0) {
        m /= 10;
        ++k;
    }
    if (m < 10 && k > 0) return std::to_string(m) + "e" + std::to_string(k);
    return std::to_string(n);
}

/// Table as CSV: alpha,theo_ratio,emp_ratio_<n>,err_pct_<n>,...
inline CsvTable ratio_table_csv(const SimulationConfig& cfg, const std::vector<RatioTableRow>& rows) {
    CsvTable t;
    t.columns = {"alpha", "theo_ratio"};
    for (std::size_t n : cfg.ns) {
        t.columns.push_back("emp_ratio_" + size_label(n));
        t.columns.push_back("err_pct_" + size_label(n));
    }
    for (const auto& r : rows) {
        std::vector<double> v{r.alpha, r.theoretical};
        for (std::size_t j = 0; j < r.empirical.size(); ++j) {
            v.push_back(r.empirical[j]);
            v.push_back(r.err_pct[j]);
        }
        t.rows.push_back(std::move(v));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Wasserstein distance between an empirical and a parametric law

/// Exact integral of |q_n(u) - q(u)| over (0, 1), from closed-form partial
/// integrals of q on each step of the empirical quantile function.
inline double wasserstein_exact(const Sample& s, const DistributionSpec& d) {
    const auto x = s.values();
    const std::size_t n = x.size();
    const double nd = static_cast<double>(n);
    // integral of q over [u, 1] with 1 - u given
    auto tail = [&](double u, double w) { return w <= 0.0 ? 0.0 : tail_integral(d, u, w); };
    numeric::CompensatedSum acc;
    for (std::size_t j = 1; j <= n; ++j) {
        const double xj = x[j - 1];
        const double u0 = static_cast<double>(j - 1) / nd, w0 = static_cast<double>(n - j + 1) / nd;
        const double u1 = static_cast<double>(j) / nd, w1 = static_cast<double>(n - j) / nd;
        // q(u) <= xj exactly for u <= F(xj)
        double us = cdf(d, xj), ws = survival(d, xj);
        if (us <= u0) {
            us = u0;
            ws = w0;
        } else if (us >= u1) {
            us = u1;
            ws = w1;
        }
        const double t0 = tail(u0, w0), ts = tail(us, ws), t1 = tail(u1, w1);
        // below: xj - q on [u0, us]; above: q - xj on [us, u1]
        const double below = xj * (us - u0) - (t0 - ts);
        const double above = ts - t1 - xj * (u1 - us);
        acc.add(std::fmax(below, 0.0) + std::fmax(above, 0.0));
    }
    return acc.value();
}

struct WassersteinEstimate {
    double value;
    double error_estimate;
};

/// Trapezoid rule for the integral of |q_n(u) - q(u)| on a uniform u-grid of
/// `grid` cells, refined geometrically towards both ends down to 1e-12. The
/// error estimate compares against the rule on every other node.
inline WassersteinEstimate wasserstein_empirical(const Sample& s, const DistributionSpec& d, std::size_t grid) {
    detail::require(grid >= 100, "wasserstein_empirical: grid must be >= 100");
    const double gd = static_cast<double>(grid);
    // nodes as (u, 1 - u) pairs, increasing in u
    std::vector<std::pair<double, double>> nodes;
    std::vector<double> edge;
    for (double t = 1e-12; t < 1.0 / gd; t *= 2.0) edge.push_back(t);
    for (double t : edge) nodes.emplace_back(t, 1.0 - t);
    for (std::size_t i = 1; i < grid; ++i) {
        nodes.emplace_back(static_cast<double>(i) / gd, static_cast<double>(grid - i) / gd);
    }
    for (auto it = edge.rbegin(); it != edge.rend(); ++it) nodes.emplace_back(1.0 - *it, *it);

    std::vector<double> f(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto [u, w] = nodes[i];
        f[i] = std::fabs(s.quantile(std::fmin(u, std::nextafter(1.0, 0.0))) - quantile(d, u, w));
    }
    auto trapezoid = [&](std::size_t stride) {
        numeric::CompensatedSum acc;
        std::size_t prev = 0;
        for (std::size_t i = stride; i < nodes.size(); i += stride) {
            acc.add(0.5 * (f[prev] + f[i]) * (nodes[i].first - nodes[prev].first));
            prev = i;
        }
        if (prev != nodes.size() - 1) {
            const std::size_t last = nodes.size() - 1;
            acc.add(0.5 * (f[prev] + f[last]) * (nodes[last].first - nodes[prev].first));
        }
        return acc.value();
    };
    const double fine = trapezoid(1);
    const double coarse = trapezoid(2);
    return {fine, std::fabs(fine - coarse)};
}

// ---------------------------------------------------------------------------
// Figure data

enum class FigureKind { DistortionCurves, WeibullRatioBeta, FrechetRatioPareto, FrechetRatioStudent };

/// Curve data for plotting. DistortionCurves: `param` is alpha and `grid` the
/// t values; columns t,phi,phi_mixture. Ratio kinds: `param` is the shape
/// (a or nu) and `grid` the alpha values; columns alpha,exact,first_order,
/// second_order. The Weibull kind reports (xhat-ES)/(xhat-e) and, in the
/// inv_* columns, its reciprocal (1-e)/(1-ES).
inline CsvTable figure_series(FigureKind kind, double param, const std::vector<double>& grid) {
    CsvTable t;
    if (kind == FigureKind::DistortionCurves) {
        detail::require_level(param, 0.5, true, "figure distortion");
        const DistortionSpec e = ExpectileDistortion{param};
        const DistortionSpec m = optimal_mixture(param);
        t.columns = {"t", "phi", "phi_mixture"};
        for (double x : grid) t.rows.push_back({x, distortion_phi(e, x), distortion_phi(m, x)});
        return t;
    }
    std::vector<ExpansionPoint> pts;
    if (kind == FigureKind::WeibullRatioBeta) pts = weibull_ratio_curve(DistributionSpec(PowerBeta{param}), grid);
    else if (kind == FigureKind::FrechetRatioPareto) pts = frechet_ratio_curve(DistributionSpec(Pareto{param}), grid);
    else pts = frechet_ratio_curve(DistributionSpec(StudentT{param}), grid);
    t.columns = {"alpha", "exact", "first_order", "second_order"};
    if (kind == FigureKind::WeibullRatioBeta) {
        t.columns.insert(t.columns.end(), {"inv_exact", "inv_first_order", "inv_second_order"});
    }
    for (const auto& p : pts) {
        std::vector<double> r{p.alpha, p.exact, p.first, p.second};
        if (kind == FigureKind::WeibullRatioBeta) r.insert(r.end(), {1.0 / p.exact, 1.0 / p.first, 1.0 / p.second});
        t.rows.push_back(std::move(r));
    }
    return t;
}

} // namespace tailrisk

#endif // TAILRISK_MONTECARLO_HPP
