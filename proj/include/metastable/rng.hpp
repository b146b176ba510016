#ifndef METASTABLE_RNG_HPP
#define METASTABLE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace metastable {

/// Counter-based random numbers keyed by (master_seed, trial, counter).
/// Every draw is a pure function of its key, so trial streams are
/// reproducible under any parallel schedule and random-access in the step
/// index. The mixer is SplitMix64 evaluated at key + counter * golden.
class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    CounterRng(std::uint64_t master_seed, std::uint64_t trial)
        : key_(mix(mix(master_seed) ^ (trial * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull))) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in the open interval (0,1); never 0, safe under log().
    double uniform(std::uint64_t counter) const {
        std::uint64_t u = mix(key_ + counter * kGolden);
        return (static_cast<double>(u >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    /// Standard normal pair via Box-Muller from counters (2c, 2c+1).
    void normal_pair(std::uint64_t pair_counter, double& n1, double& n2) const {
        double u1 = uniform(2 * pair_counter);
        double u2 = uniform(2 * pair_counter + 1);
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        n1 = r * std::cos(a);
        n2 = r * std::sin(a);
    }

private:
    std::uint64_t key_;
};

} // namespace metastable

#endif
