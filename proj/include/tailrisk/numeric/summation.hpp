#ifndef TAILRISK_NUMERIC_SUMMATION_HPP
#define TAILRISK_NUMERIC_SUMMATION_HPP

#include <cmath>
#include <span>

namespace tailrisk::numeric {

/// Neumaier (improved Kahan) compensated accumulator. The reduction order is
/// the insertion order, so results are reproducible bit for bit.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

} // namespace tailrisk::numeric

#endif // TAILRISK_NUMERIC_SUMMATION_HPP
