#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "meshloc/rng.hpp"
#include "meshloc/types.hpp"
#include "meshloc/world.hpp"

namespace meshloc {

/// Round-trip and reply durations measured on the two local clocks, in ns.
/// Ra/Da belong to the initiator, Rb/Db to the responder.
struct RangingTimestamps {
    double round_a = 0.0;  // Ra: poll tx -> response rx
    double round_b = 0.0;  // Rb: response tx -> final rx
    double delay_a = 0.0;  // Da: response rx -> final tx
    double delay_b = 0.0;  // Db: poll rx -> response tx
};

/// Asymmetric double-sided TWR estimator:
///   tof = (Ra*Rb - Da*Db) / (Ra + Rb + Da + Db).
/// Robust to clock offset (durations) and to first order in drift.
inline double ds_twr_tof(const RangingTimestamps& ts) {
    double denom = ts.round_a + ts.round_b + ts.delay_a + ts.delay_b;
    if (denom <= 0.0) throw std::domain_error("ds_twr_tof: malformed session, nonpositive denominator");
    return (ts.round_a * ts.round_b - ts.delay_a * ts.delay_b) / denom;
}

struct UwbChannel {
    double sigma_los = 0.10;      // meters, Gaussian noise std
    double nlos_bias_mean = 0.5;  // meters, exponential positive bias
    double max_range = 60.0;      // meters, hard frame loss beyond this
};

/// Additive measurement error for the channel between a and b, or nullopt
/// when out of range. Gaussian noise always applies; an exponential positive
/// bias is added on obstructed paths.
inline std::optional<double> sample_range_error(const World& world, const UwbChannel& ch,
                                                const Position& a, const Position& b,
                                                CounterRng& rng) {
    if (distance(a, b) > ch.max_range) return std::nullopt;
    double err = rng.gaussian() * ch.sigma_los;
    if (is_nlos(world, a, b)) err += rng.exponential(ch.nlos_bias_mean);
    return err;
}

/// One-shot range measurement: true distance plus channel error, clamped at 0.
inline std::optional<double> measure_range(const World& world, const UwbChannel& ch,
                                           const Position& a, const Position& b,
                                           CounterRng& rng) {
    auto err = sample_range_error(world, ch, a, b, rng);
    if (!err) return std::nullopt;
    double d = distance(a, b) + *err;
    return d < 0.0 ? 0.0 : d;
}

struct RangeMeasurement {
    NodeId initiator = 0;
    NodeId responder = 0;
    double dist = 0.0;  // meters
    double t = 0.0;     // seconds, simulation time at completion
    std::vector<std::uint8_t> payload;
};

enum class SessionState { Idle, PollSent, ResponseSent, FinalSent, Complete, Failed };

/// Round-robin selection: the peer ranged longest ago goes next; peers never
/// ranged count as -inf. Ascending iteration plus strict comparison breaks
/// ties to the lowest id.
inline std::optional<NodeId> schedule_next(const std::set<NodeId>& peers,
                                           const std::map<NodeId, double>& last_ranged) {
    std::optional<NodeId> best;
    double best_t = std::numeric_limits<double>::infinity();
    for (NodeId p : peers) {
        auto it = last_ranged.find(p);
        double t =
            it == last_ranged.end() ? -std::numeric_limits<double>::infinity() : it->second;
        if (!best || t < best_t) {
            best = p;
            best_t = t;
        }
    }
    return best;
}

}  // namespace meshloc
