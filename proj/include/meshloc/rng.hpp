#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>

#include "meshloc/types.hpp"

namespace meshloc {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based generator: output i is a pure function of (key, i), so
/// streams with distinct keys are independent and draws in one stream are
/// unaffected by activity in any other.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key = 0) : state_(key) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; always consumes two uniforms.
    double gaussian() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Exponential with the given mean (inverse CDF).
    double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

private:
    std::uint64_t state_;
};

enum class RngPurpose : std::uint64_t {
    LinkDelivery = 1,
    Turnaround = 2,
    UwbNoise = 3,
    Altimeter = 4,
};

/// Per-(purpose, node-pair) streams derived from one master seed. Streams are
/// created lazily; the key derivation ignores creation order, so adding nodes
/// or purposes never perturbs existing streams.
class RandomStreams {
public:
    explicit RandomStreams(std::uint64_t master_seed = 0) : master_(master_seed) {}

    static constexpr NodeId kNone = 0xffff;

    CounterRng& stream(RngPurpose purpose, NodeId a, NodeId b = kNone) {
        std::uint64_t key = derive_key(master_, purpose, a, b);
        auto it = streams_.find(key);
        if (it == streams_.end()) it = streams_.emplace(key, CounterRng(key)).first;
        return it->second;
    }

    static std::uint64_t derive_key(std::uint64_t master, RngPurpose purpose, NodeId a,
                                    NodeId b = kNone) {
        using detail::mix64;
        std::uint64_t h = mix64(master ^ (static_cast<std::uint64_t>(purpose) << 32));
        h = mix64(h ^ (static_cast<std::uint64_t>(a) + 1));
        h = mix64(h ^ ((static_cast<std::uint64_t>(b) + 1) << 16));
        return h;
    }

    std::uint64_t master_seed() const { return master_; }

private:
    std::uint64_t master_;
    std::map<std::uint64_t, CounterRng> streams_;
};

}  // namespace meshloc
