#ifndef PAIRTIME_RNG_HPP
#define PAIRTIME_RNG_HPP

#include <cmath>
#include <cstdint>

namespace pairtime {

// Deterministic counter-keyed random stream (splitmix64 core). Every pulse of
// the Monte Carlo generator draws from its own substream keyed by
// (seed, pulse_index), so output is independent of evaluation order and
// identical across platforms for the same build.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    static RandomStream substream(std::uint64_t seed, std::uint64_t key) {
        // two mixing rounds decorrelate (seed, key) pairs
        std::uint64_t s = mix(seed ^ 0x9e3779b97f4a7c15ULL);
        s = mix(s ^ mix(key + 0xbf58476d1ce4e5b9ULL));
        return RandomStream(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform in [0, 1) with 53-bit resolution
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1], safe as a log() argument
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_pos();
        double v = uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(kTau * v);
        have_spare_ = true;
        return r * std::cos(kTau * v);
    }

    // Poisson by Knuth product method; fine for the per-pulse means (<< 30)
    // used here.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        double limit = std::exp(-mean);
        double prod = uniform_pos();
        int k = 0;
        while (prod > limit) {
            prod *= uniform_pos();
            ++k;
        }
        return k;
    }

    // Bose-Einstein (single-mode thermal) photon number with the given mean:
    // P(k) = mean^k / (1+mean)^(k+1), sampled by CDF inversion.
    int thermal(double mean) {
        if (mean <= 0.0) return 0;
        double u = uniform_pos();
        // P(k >= j) = (mean/(1+mean))^j
        double ratio = mean / (1.0 + mean);
        return static_cast<int>(std::floor(std::log(u) / std::log(ratio)));
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    static constexpr double kTau = 6.28318530717958647692;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pairtime

#endif
