#ifndef TAILRISK_RANDOM_HPP
#define TAILRISK_RANDOM_HPP

#include <cstdint>
#include <initializer_list>

namespace tailrisk {

/// SplitMix64 (Steele, Lea and Flood). State advances by the golden-ratio
/// increment; every output passes through the 64-bit finalizer below.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return finalize(state_);
    }

    /// A uniform u = (k + 1/2) / 2^52 from the top 52 bits, with 1 - u
    /// returned alongside. Both are exact, so neither is ever 0 or 1 and
    /// quantiles can be evaluated without cancellation in either tail.
    struct UniformPair {
        double u;
        double one_minus_u;
    };

    UniformPair uniform_pair() {
        constexpr double scale = 1.0 / 4503599627370496.0; // 2^-52
        const std::uint64_t k = next() >> 12;
        const std::uint64_t km = (std::uint64_t{1} << 52) - 1 - k;
        return {(static_cast<double>(k) + 0.5) * scale, (static_cast<double>(km) + 0.5) * scale};
    }

    double uniform() { return uniform_pair().u; }

private:
    std::uint64_t state_;
};

/// Deterministic seed derivation: folds each component into the master seed
/// through the SplitMix64 finalizer. Distinct component tuples give
/// statistically independent streams.
inline std::uint64_t mix_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = SplitMix64::finalize(master ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t p : parts) h = SplitMix64::finalize(h + 0x9e3779b97f4a7c15ULL * (p + 1));
    return h;
}

} // namespace tailrisk

#endif // TAILRISK_RANDOM_HPP
