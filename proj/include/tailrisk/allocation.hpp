#ifndef TAILRISK_ALLOCATION_HPP
#define TAILRISK_ALLOCATION_HPP

#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "tailrisk/errors.hpp"
#include "tailrisk/numeric/summation.hpp"
#include "tailrisk/risk_measures.hpp"

namespace tailrisk {

/// Joint scenarios of d components: components[k][i] is component k in
/// scenario i. The total loss is the scenario-wise sum.
class Portfolio {
public:
    explicit Portfolio(std::vector<std::vector<double>> components) : components_(std::move(components)) {
        detail::require(!components_.empty(), "portfolio: at least one component required");
        const std::size_t n = components_.front().size();
        detail::require(n >= 1, "portfolio: at least one scenario required");
        for (const auto& c : components_) {
            detail::require(c.size() == n, "portfolio: components must have equal length");
            for (double v : c) detail::require(std::isfinite(v), "portfolio: values must be finite");
        }
        total_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            numeric::CompensatedSum s;
            for (const auto& c : components_) s.add(c[i]);
            total_[i] = s.value();
        }
    }

    /// Builds a portfolio from scenario rows.
    static Portfolio from_rows(const std::vector<std::vector<double>>& rows) {
        detail::require(!rows.empty(), "portfolio: at least one scenario required");
        const std::size_t d = rows.front().size();
        std::vector<std::vector<double>> comps(d, std::vector<double>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            detail::require(rows[i].size() == d, "portfolio: every row needs the same number of columns");
            for (std::size_t k = 0; k < d; ++k) comps[k][i] = rows[i][k];
        }
        return Portfolio(std::move(comps));
    }

    std::size_t dimension() const { return components_.size(); }
    std::size_t scenarios() const { return total_.size(); }
    const std::vector<double>& component(std::size_t k) const { return components_.at(k); }
    const std::vector<double>& total() const { return total_; }

private:
    std::vector<std::vector<double>> components_;
    std::vector<double> total_;
};

/// Reads one scenario per line, one column per component, comma separated.
/// A first line that does not parse as numbers is taken as a header.
inline Portfolio read_portfolio_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric_row = true;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(detail::parse_number(detail::trim(cell), "portfolio csv line " + std::to_string(line_no)));
            } catch (const InvalidArgument&) {
                if (rows.empty() && line_no == 1) {
                    numeric_row = false;
                    break;
                }
                throw;
            }
        }
        if (numeric_row) rows.push_back(std::move(row));
    }
    return Portfolio::from_rows(rows);
}

/// ES_alpha(L_k | L): mean of L_k over the scenarios with total > q_L(alpha).
/// Ties at the quantile are excluded by the strict inequality.
inline std::vector<double> es_euler(const Portfolio& p, double alpha) {
    detail::require_level(alpha, 0.0, false, "es_euler");
    const Sample total(p.total());
    const double q = total.quantile(alpha);
    std::size_t count = 0;
    std::vector<numeric::CompensatedSum> sums(p.dimension());
    for (std::size_t i = 0; i < p.scenarios(); ++i) {
        if (!(p.total()[i] > q)) continue;
        ++count;
        for (std::size_t k = 0; k < p.dimension(); ++k) sums[k].add(p.component(k)[i]);
    }
    if (count == 0) throw ComputationError("es_euler: no scenario with total above the alpha-quantile");
    std::vector<double> out(p.dimension());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = sums[k].value() / static_cast<double>(count);
    return out;
}

namespace detail {

struct ExpectileSplit {
    double expectile;
    double prob_le; // P[L <= e_alpha]
    std::vector<double> sum_gt;
    std::vector<double> sum_le;
};

// Component sums over {L > e} and {L <= e}; totals within 1e-12 of e count as <=.
inline ExpectileSplit expectile_split(const Portfolio& p, double alpha) {
    ExpectileSplit s;
    s.expectile = expectile(LossSource(Sample(p.total())), alpha);
    const double cut = s.expectile + 1e-12 * std::fmax(1.0, std::fabs(s.expectile));
    std::vector<numeric::CompensatedSum> gt(p.dimension()), le(p.dimension());
    std::size_t n_le = 0;
    for (std::size_t i = 0; i < p.scenarios(); ++i) {
        const bool below = p.total()[i] <= cut;
        n_le += below;
        for (std::size_t k = 0; k < p.dimension(); ++k) (below ? le : gt)[k].add(p.component(k)[i]);
    }
    s.prob_le = static_cast<double>(n_le) / static_cast<double>(p.scenarios());
    for (std::size_t k = 0; k < p.dimension(); ++k) {
        s.sum_gt.push_back(gt[k].value());
        s.sum_le.push_back(le[k].value());
    }
    return s;
}

} // namespace detail

/// e_alpha(L_k | L) = (alpha E[L_k 1{L > e}] + (1-alpha) E[L_k 1{L <= e}])
///                    / (alpha + (1 - 2 alpha) P[L <= e]).
inline std::vector<double> expectile_euler(const Portfolio& p, double alpha) {
    detail::require_level(alpha, 0.5, true, "expectile_euler");
    const auto s = detail::expectile_split(p, alpha);
    const double nd = static_cast<double>(p.scenarios());
    const double denom = alpha + (1.0 - 2.0 * alpha) * s.prob_le;
    std::vector<double> out(p.dimension());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (alpha * s.sum_gt[k] + (1.0 - alpha) * s.sum_le[k]) / nd / denom;
    return out;
}

/// The same contributions written as (1 - w) ES_{beta*}(L_k | L) + w E[L_k]
/// with beta* = P[L <= e_alpha] and w = (1-alpha)/(alpha + (1-2 alpha) beta*).
inline std::vector<double> expectile_euler_es_form(const Portfolio& p, double alpha) {
    detail::require_level(alpha, 0.5, true, "expectile_euler_es_form");
    const auto s = detail::expectile_split(p, alpha);
    const double nd = static_cast<double>(p.scenarios());
    const double beta = s.prob_le;
    const double w = mean_weight(alpha, beta);
    std::vector<double> out(p.dimension());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double mean_k = (s.sum_gt[k] + s.sum_le[k]) / nd;
        if (beta >= 1.0) {
            out[k] = mean_k;
            continue;
        }
        const double es_k = s.sum_gt[k] / nd / (1.0 - beta);
        out[k] = (1.0 - w) * es_k + w * mean_k;
    }
    return out;
}

/// (eta - 1)^{(eta - 1)/eta} / eta, the limit of e_alpha / ES_alpha in the
/// Frechet domain with index eta.
inline double frechet_constant(double eta) {
    detail::require(eta > 1.0, "frechet_constant: eta must be > 1");
    return std::pow(eta - 1.0, (eta - 1.0) / eta) / eta;
}

struct EulerRatioRow {
    double alpha;
    /// expectile_euler / es_euler per component; empty when degenerate.
    std::vector<double> ratio;
    bool degenerate = false;
    std::string note;
};

struct EulerRatioTable {
    double constant;
    std::vector<EulerRatioRow> rows;
};

/// Ratios of expectile to ES Euler contributions along an alpha grid, next
/// to the Frechet constant they approach.
inline EulerRatioTable euler_asymptotic_ratio(const Portfolio& p, double eta, const std::vector<double>& alphas) {
    EulerRatioTable t{frechet_constant(eta), {}};
    for (double a : alphas) {
        detail::require_level(a, 0.5, true, "euler_asymptotic_ratio");
        EulerRatioRow row{a, {}, false, ""};
        try {
            const auto ee = expectile_euler(p, a);
            const auto es = es_euler(p, a);
            for (std::size_t k = 0; k < ee.size(); ++k) row.ratio.push_back(ee[k] / es[k]);
        } catch (const ComputationError& e) {
            row.degenerate = true;
            row.note = e.what();
            row.ratio.clear();
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace tailrisk

#endif // TAILRISK_ALLOCATION_HPP
