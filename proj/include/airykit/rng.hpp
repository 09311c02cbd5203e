#pragma once

#include <cmath>
#include <cstdint>

namespace airykit {

/// Counter-based deterministic RNG: every (seed, stream, index) triple maps
/// to an independent sequence, so parallel sample generation is
/// reproducible regardless of scheduling.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL)))
    {
        next_u64();
    }

    std::uint64_t next_u64()
    {
        // xorshift* step on a splitmix-initialized state
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in (0, 1) (never exactly 0 or 1).
    double next_uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by the polar method (fully specified, portable).
    double next_normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_uniform() - 1.0;
            v = 2.0 * next_uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// Geometric on {0, 1, ...} with P(k) = q (1-q)^k.
    long next_geometric(double q)
    {
        if (q >= 1.0) return 0;
        return static_cast<long>(std::log(next_uniform()) / std::log1p(-q));
    }

  private:
    static std::uint64_t mix(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace airykit
