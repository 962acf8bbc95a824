#ifndef TAILRISK_LOSS_SOURCE_HPP
#define TAILRISK_LOSS_SOURCE_HPP

#include <memory>
#include <variant>

#include "tailrisk/distributions.hpp"
#include "tailrisk/sample.hpp"

namespace tailrisk {

/// Either a parametric law or an empirical sample. Every risk functional
/// accepts a LossSource and dispatches on the alternative.
class LossSource {
public:
    LossSource(DistributionSpec d) : impl_(std::move(d)) {}
    LossSource(Sample s) : impl_(std::make_shared<const Sample>(std::move(s))) {}
    LossSource(std::shared_ptr<const Sample> s) : impl_(std::move(s)) {
        detail::require(std::get<1>(impl_) != nullptr, "loss source: null sample");
    }

    bool is_parametric() const { return impl_.index() == 0; }
    const DistributionSpec& distribution() const { return std::get<0>(impl_); }
    const Sample& sample() const { return *std::get<1>(impl_); }

    /// True when the law has atoms (empirical samples and two-point laws).
    bool is_atomic() const { return !is_parametric() || !distribution().is_continuous(); }

    bool is_constant() const {
        if (is_parametric()) {
            const auto* tp = std::get_if<TwoPoint>(&distribution().family());
            return tp != nullptr && tp->x1 == tp->x2;
        }
        return sample().is_constant();
    }

    double mean() const { return is_parametric() ? tailrisk::mean(distribution()) : sample().mean(); }

    double quantile(double u, double one_minus_u) const {
        return is_parametric() ? tailrisk::quantile(distribution(), u, one_minus_u) : sample().quantile(u);
    }
    double quantile(double u) const { return quantile(u, 1.0 - u); }

    double tail_integral(double u, double one_minus_u) const {
        return is_parametric() ? tailrisk::tail_integral(distribution(), u, one_minus_u) : sample().tail_integral(u);
    }

    double upper_partial_moment(double m) const {
        return is_parametric() ? tailrisk::upper_partial_moment(distribution(), m) : sample().upper_partial_moment(m);
    }

    /// P[L <= x].
    double cdf(double x) const {
        if (is_parametric()) return tailrisk::cdf(distribution(), x);
        return static_cast<double>(sample().count_le(x)) / static_cast<double>(sample().size());
    }
    /// P[L < x].
    double cdf_left(double x) const {
        if (is_parametric()) return tailrisk::cdf_left(distribution(), x);
        return static_cast<double>(sample().count_lt(x)) / static_cast<double>(sample().size());
    }

private:
    std::variant<DistributionSpec, std::shared_ptr<const Sample>> impl_;
};

} // namespace tailrisk

#endif // TAILRISK_LOSS_SOURCE_HPP
