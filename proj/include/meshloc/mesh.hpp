#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>

#include "meshloc/types.hpp"

namespace meshloc {

/// Logistic distance falloff for the Wi-Fi channel.
struct LinkModel {
    double reference_range = 50.0;  // meters; delivery probability 0.5 here
    double falloff_width = 5.0;     // meters; smaller = sharper cutoff
};

/// p = (1 - attenuation) / (1 + exp((distance - R) / w)).
/// attenuation is the active interference factor covering either endpoint.
inline double link_delivery_prob(const LinkModel& model, double dist, double attenuation) {
    double p0 = 1.0 / (1.0 + std::exp((dist - model.reference_range) / model.falloff_width));
    return p0 * (1.0 - attenuation);
}

/// Originator message: periodic flooded beacon routes are derived from.
struct Ogm {
    NodeId origin = 0;
    std::uint32_t seqno = 0;
    int tq = 0;  // transmit quality, [0, 255]
    int ttl = 0;
    bool gateway = false;
};

struct MeshConfig {
    int seqno_window = 64;   // W: seqnos tracked per (origin, neighbor)
    double expiry = 10.0;    // seconds without an OGM before a route is purged
    int hop_penalty = 30;    // multiplicative (255 - penalty)/255 per rebroadcast
    int ttl = 16;
};

struct RouteEntry {
    NodeId next_hop = 0;
    int tq = 0;
    double last_seen = 0.0;
};

/// Per-node routing state, batman-adv style: per-(origin, neighbor) sliding
/// seqno windows give a link quality LQ; the route for an origin follows the
/// neighbor offering the best effective tq = tq_in * LQ / 255. Accepted OGMs
/// are rebroadcast (once per seqno) when they came in via the selected next
/// hop, with the carried tq degraded by the hop penalty.
class RoutingTable {
public:
    RoutingTable() = default;
    RoutingTable(NodeId self, MeshConfig cfg) : self_(self), cfg_(cfg) {}

    /// Process one received OGM. Returns the frame to rebroadcast, if any.
    std::optional<Ogm> process_ogm(const Ogm& ogm, NodeId from_neighbor, double now) {
        if (ogm.origin == self_) return std::nullopt;
        auto& os = origins_[ogm.origin];
        const std::uint32_t w = static_cast<std::uint32_t>(cfg_.seqno_window);
        if (os.any && ogm.seqno + w <= os.newest) return std::nullopt;  // stale

        auto& ring = os.per_neighbor[from_neighbor];
        if (std::find(ring.begin(), ring.end(), ogm.seqno) != ring.end())
            return std::nullopt;  // duplicate via this neighbor

        if (!os.any) {
            os.any = true;
            os.newest = os.first = ogm.seqno;
        } else {
            os.newest = std::max(os.newest, ogm.seqno);
            os.first = std::min(os.first, ogm.seqno);
        }
        ring.insert(std::upper_bound(ring.begin(), ring.end(), ogm.seqno), ogm.seqno);
        prune(ring, os.newest, w);

        int lq = link_quality(os, ring, w);
        int tq_eff = ogm.tq * lq / 255;

        auto it = routes_.find(ogm.origin);
        bool live = it != routes_.end() && now - it->second.last_seen <= cfg_.expiry;
        if (!live) {
            routes_[ogm.origin] = {from_neighbor, tq_eff, now};
        } else if (from_neighbor == it->second.next_hop) {
            // OGMs via the chosen hop track current quality and keep the
            // route fresh; tq may go down here.
            it->second.tq = tq_eff;
            it->second.last_seen = now;
        } else if (tq_eff > it->second.tq ||
                   (tq_eff == it->second.tq && from_neighbor < it->second.next_hop)) {
            it->second = {from_neighbor, tq_eff, now};
        }

        // Forward once per (origin, seqno), and only copies that arrive via
        // the selected next hop; a duplicate via the selected hop still
        // forwards when an earlier copy via another neighbor did not.
        bool am_relay = routes_[ogm.origin].next_hop == from_neighbor;
        bool already = std::find(os.rebroadcast.begin(), os.rebroadcast.end(), ogm.seqno) !=
                       os.rebroadcast.end();
        int tq_fwd = tq_eff * (255 - cfg_.hop_penalty) / 255;
        if (am_relay && !already && ogm.ttl > 0 && tq_fwd > 0) {
            os.rebroadcast.insert(
                std::upper_bound(os.rebroadcast.begin(), os.rebroadcast.end(), ogm.seqno),
                ogm.seqno);
            prune(os.rebroadcast, os.newest, w);
            return Ogm{ogm.origin, ogm.seqno, tq_fwd, ogm.ttl - 1, ogm.gateway};
        }
        return std::nullopt;
    }

    std::optional<NodeId> next_hop(NodeId dest, double now) const {
        auto it = routes_.find(dest);
        if (it == routes_.end() || now - it->second.last_seen > cfg_.expiry) return std::nullopt;
        return it->second.next_hop;
    }

    std::optional<int> route_tq(NodeId dest, double now) const {
        auto it = routes_.find(dest);
        if (it == routes_.end() || now - it->second.last_seen > cfg_.expiry) return std::nullopt;
        return it->second.tq;
    }

    /// Gateway with the best live route tq; ties break to the lowest id.
    std::optional<NodeId> best_gateway(const std::set<NodeId>& gateways, double now) const {
        std::optional<NodeId> best;
        int best_tq = -1;
        for (NodeId g : gateways) {
            auto tq = route_tq(g, now);
            if (tq && *tq > best_tq) {
                best_tq = *tq;
                best = g;
            }
        }
        return best;
    }

    std::size_t live_route_count(double now) const {
        std::size_t n = 0;
        for (const auto& [id, e] : routes_)
            if (now - e.last_seen <= cfg_.expiry) ++n;
        return n;
    }

    const std::map<NodeId, RouteEntry>& entries() const { return routes_; }

    /// Direct table injection, for tools and test harnesses.
    void set_route(NodeId dest, NodeId next, int tq, double last_seen) {
        routes_[dest] = {next, tq, last_seen};
    }

    NodeId self() const { return self_; }
    const MeshConfig& config() const { return cfg_; }

private:
    struct OriginState {
        bool any = false;
        std::uint32_t newest = 0;
        std::uint32_t first = 0;
        std::map<NodeId, std::deque<std::uint32_t>> per_neighbor;  // sorted seqnos
        std::deque<std::uint32_t> rebroadcast;                     // sorted seqnos
    };

    static void prune(std::deque<std::uint32_t>& ring, std::uint32_t newest, std::uint32_t w) {
        while (!ring.empty() && ring.front() + w <= newest) ring.pop_front();
    }

    int link_quality(const OriginState& os, std::deque<std::uint32_t>& ring,
                     std::uint32_t w) const {
        prune(ring, os.newest, w);
        std::uint32_t span = std::min<std::uint32_t>(w, os.newest - os.first + 1);
        if (span == 0) span = 1;
        return static_cast<int>(255u * static_cast<std::uint32_t>(ring.size()) / span);
    }

    NodeId self_ = 0;
    MeshConfig cfg_;
    std::map<NodeId, RouteEntry> routes_;
    std::map<NodeId, OriginState> origins_;
};

/// Mesh-visible peers; an origin whose OGMs reach this node is discovered.
class PeerTable {
public:
    PeerTable() = default;
    PeerTable(NodeId self, double expiry) : self_(self), expiry_(expiry) {}

    void observe(NodeId id, bool is_gateway, double now) {
        if (id == self_) return;
        auto& e = peers_[id];
        e.last_seen = now;
        e.is_gateway = is_gateway;
    }

    std::set<NodeId> discovered(double now) const {
        std::set<NodeId> out;
        for (const auto& [id, e] : peers_)
            if (now - e.last_seen <= expiry_) out.insert(id);
        return out;
    }

    std::set<NodeId> gateways(double now) const {
        std::set<NodeId> out;
        for (const auto& [id, e] : peers_)
            if (e.is_gateway && now - e.last_seen <= expiry_) out.insert(id);
        return out;
    }

private:
    struct Entry {
        double last_seen = 0.0;
        bool is_gateway = false;
    };
    NodeId self_ = 0;
    double expiry_ = 10.0;
    std::map<NodeId, Entry> peers_;
};

}  // namespace meshloc
