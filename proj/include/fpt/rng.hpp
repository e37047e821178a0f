#pragma once

#include <cmath>
#include <cstdint>

namespace fpt {

// 64-bit finalizer (murmur3 variant); used to derive per-path generator states.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

// Counter-based generator in the splitmix family.  Each stream carries its own
// odd additive constant, so distinct (seed, stream, path) triples walk disjoint
// orbits and estimates do not depend on how paths are distributed over threads.
class Rng {
public:
    Rng(std::uint64_t state, std::uint64_t gamma)
        : state_(state), gamma_(gamma | 1ULL) {}

    explicit Rng(std::uint64_t seed)
        : Rng(mix64(seed), mix64(seed ^ 0x9e3779b97f4a7c15ULL)) {}

    std::uint64_t next_u64() {
        state_ += gamma_;
        return mix64(state_);
    }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    bool coin() { return (next_u64() >> 63) != 0; }

    // Standard normal via Box-Muller, second draw cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 6.283185307179586476925286766559 * uniform();
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    std::uint64_t gamma_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// Deterministic per-path generator: identical for a given (seed, stream, path)
// regardless of thread count or call order.
inline Rng path_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t path) {
    const std::uint64_t a = mix64(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x3c6ef372fe94f82aULL));
    const std::uint64_t state = mix64(a ^ (path * 0xd1b54a32d192ed03ULL));
    const std::uint64_t gamma = mix64(state ^ 0x8cb92ba72f3d8dd7ULL);
    return Rng(state, gamma);
}

// Compensated (Kahan) accumulator for long mass/moment sums.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;

    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace fpt
