#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "meshloc/types.hpp"

namespace meshloc {

enum class Transport { Mesh, UwbEmbedded, Auto };

inline constexpr std::size_t kUwbPayloadCap = 64;

struct Topic {
    std::string name;            // unique, <= 48 bytes
    std::uint16_t topic_id = 0;  // dense, assigned in scenario-file order
    double rate_limit = 0.0;     // messages/second; 0 = unlimited
    int burst = 1;
    Transport transport = Transport::Auto;
    std::size_t max_payload = kUwbPayloadCap;
    std::vector<NodeId> publishers;
    std::vector<NodeId> subscribers;
    // Traffic generation for simulation runs.
    double publish_hz = 1.0;
    std::size_t payload_bytes = 8;
};

struct Message {
    std::uint16_t topic_id = 0;
    NodeId publisher = 0;
    std::uint32_t seqno = 0;  // per (publisher, topic)
    std::vector<std::uint8_t> payload;
    double t_publish = 0.0;
};

/// Classic token bucket; tokens are fractional so sub-second refill behaves
/// exactly as rate * elapsed.
struct TokenBucket {
    double rate = 0.0;   // tokens/second; 0 disables throttling
    double burst = 1.0;  // max tokens
    double tokens = 0.0;
    double last_refill = 0.0;

    static TokenBucket make(double rate, int burst) {
        // Starts full, so an idle topic can burst immediately.
        return {rate, static_cast<double>(burst), static_cast<double>(burst), 0.0};
    }
};

/// Refill then take one token; false means the message is dropped at source.
inline bool throttle_check(TokenBucket& bucket, double now) {
    if (bucket.rate == 0.0) return true;
    bucket.tokens = std::min(bucket.burst, bucket.tokens + bucket.rate * (now - bucket.last_refill));
    bucket.last_refill = now;
    if (bucket.tokens >= 1.0) {
        bucket.tokens -= 1.0;
        return true;
    }
    return false;
}

/// Auto resolves by size: small payloads ride ranging frames, the rest take
/// the mesh. Explicit settings win.
inline Transport transport_select(const Topic& topic, std::size_t payload_len) {
    if (topic.transport != Transport::Auto) return topic.transport;
    return payload_len <= kUwbPayloadCap ? Transport::UwbEmbedded : Transport::Mesh;
}

enum class PublishResult { Accepted, Throttled, Oversize };

/// Per-topic delivery accounting. `instances` counts per-subscriber copies
/// created at accept time; each ends up delivered, dropped, or in flight.
struct TopicCounters {
    std::uint64_t published = 0;
    std::uint64_t accepted = 0;
    std::uint64_t throttled = 0;
    std::uint64_t oversize = 0;
    std::uint64_t instances = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0;
};

}  // namespace meshloc
