#ifndef TAILRISK_SAMPLE_HPP
#define TAILRISK_SAMPLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tailrisk/distributions.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/numeric/summation.hpp"

namespace tailrisk {

/// An empirical law: observations sorted ascending, with compensated suffix
/// sums so that tail averages and partial moments cost O(log n).
class Sample {
public:
    explicit Sample(std::vector<double> values) : values_(std::move(values)) {
        detail::require(!values_.empty(), "sample: at least one observation required");
        for (double v : values_) detail::require(std::isfinite(v), "sample: values must be finite");
        std::sort(values_.begin(), values_.end());
        suffix_.assign(values_.size() + 1, 0.0);
        numeric::CompensatedSum acc;
        for (std::size_t i = values_.size(); i-- > 0;) {
            acc.add(values_[i]);
            suffix_[i] = acc.value();
        }
    }

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }
    bool is_constant() const { return values_.front() == values_.back(); }

    /// Sum of the observations with (0-based, sorted) index >= i.
    double suffix_sum(std::size_t i) const { return suffix_[std::min(i, values_.size())]; }

    double mean() const { return suffix_[0] / static_cast<double>(values_.size()); }

    std::size_t count_le(double x) const {
        return static_cast<std::size_t>(std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
    }
    std::size_t count_lt(double x) const {
        return static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), x) - values_.begin());
    }

    /// 1-based rank k of the left quantile at level u: the smallest k with
    /// k/n >= u (u in (0, 1]).
    std::size_t quantile_rank(double u) const {
        const auto n = values_.size();
        const double nd = static_cast<double>(n);
        auto k = static_cast<std::size_t>(std::clamp(std::ceil(nd * u), 1.0, nd));
        // guard against n*u rounding one step too high or too low
        while (k > 1 && static_cast<double>(k - 1) / nd >= u) --k;
        while (k < n && static_cast<double>(k) / nd < u) ++k;
        return k;
    }

    /// Left quantile inf{m : F_n(m) >= u}.
    double quantile(double u) const {
        detail::require(u > 0.0 && u < 1.0, "quantile: u must lie in (0, 1)");
        return values_[quantile_rank(u) - 1];
    }

    /// (1/n) sum (x_i - m)^+.
    double upper_partial_moment(double m) const {
        const std::size_t j = count_le(m);
        const double c = static_cast<double>(values_.size() - j);
        return (suffix_[j] - m * c) / static_cast<double>(values_.size());
    }

    /// Integral of the empirical quantile function over [u, 1].
    double tail_integral(double u) const {
        detail::require(u >= 0.0 && u < 1.0, "tail_integral: u must lie in [0, 1)");
        const double nd = static_cast<double>(values_.size());
        if (u == 0.0) return suffix_[0] / nd;
        const std::size_t k = quantile_rank(u);
        // mass of the k-th atom above u is k/n - u
        const double mass = std::fma(-nd, u, static_cast<double>(k)) / nd;
        return mass * values_[k - 1] + suffix_[k] / nd;
    }

private:
    std::vector<double> values_;
    std::vector<double> suffix_;
};

/// n seeded inverse-transform draws from `d`.
inline Sample sample(const DistributionSpec& d, std::size_t n, std::uint64_t seed) { return Sample(draw(d, n, seed)); }

} // namespace tailrisk

#endif // TAILRISK_SAMPLE_HPP
