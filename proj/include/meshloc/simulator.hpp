#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "meshloc/bus.hpp"
#include "meshloc/event_queue.hpp"
#include "meshloc/localization.hpp"
#include "meshloc/log.hpp"
#include "meshloc/mesh.hpp"
#include "meshloc/metrics.hpp"
#include "meshloc/rng.hpp"
#include "meshloc/scenario.hpp"
#include "meshloc/types.hpp"
#include "meshloc/uwb.hpp"
#include "meshloc/wire.hpp"
#include "meshloc/world.hpp"

namespace meshloc {

/// Payload waiting to ride the next ranging session with one peer.
struct QueuedUwbPayload {
    std::uint16_t topic_id = 0;
    std::uint32_t seqno = 0;
    std::vector<std::uint8_t> bytes;
};

/// What another node announced about its topic roles.
struct AnnounceInfo {
    std::map<std::uint16_t, std::uint8_t> topics;  // topic id -> flags
    double last_seen = 0.0;
};

struct NodeState {
    NodeConfig cfg;
    RoutingTable routes;
    PeerTable peers;
    std::uint32_t next_ogm_seqno = 0;

    std::map<NodeId, AnnounceInfo> announces;
    std::map<std::uint16_t, TokenBucket> buckets;       // topics this node publishes
    std::map<std::uint16_t, std::uint32_t> pub_seqno;   // per published topic
    std::map<NodeId, std::deque<QueuedUwbPayload>> uwb_queues;

    std::map<NodeId, double> last_ranged;
    bool session_active = false;  // as initiator
    std::uint32_t next_session_seqno = 0;
    std::uint64_t ranging_attempts = 0;
    std::uint64_t ranging_successes = 0;
};

struct DeliveryRecord {
    double t = 0.0;
    std::uint16_t topic_id = 0;
    NodeId publisher = 0;
    NodeId subscriber = 0;
    std::uint32_t seqno = 0;
    std::vector<std::uint8_t> payload;
};

struct SubscriptionHandle {
    NodeId node = 0;
    std::uint16_t topic_id = 0;
};

/// One DS-TWR exchange in flight. Event instants are kept as nanosecond
/// offsets from the poll transmit, so duration math stays at full precision
/// however late the session runs; absolute times only order events.
struct Session {
    NodeId initiator = 0;
    NodeId responder = 0;
    std::uint32_t seqno = 0;
    SessionState state = SessionState::Idle;
    double t_start = 0.0;  // seconds, poll tx
    double off_poll_rx = 0.0;
    double off_resp_tx = 0.0;
    double off_resp_rx = 0.0;
    double off_final_tx = 0.0;
    double off_final_rx = 0.0;
};

/// Deterministic discrete-event run of one scenario. Single-threaded; all
/// behavior is a pure function of (scenario, seed).
class Simulator {
public:
    explicit Simulator(Scenario scenario)
        : sc_(std::move(scenario)), streams_(sc_.seed) {
        MeshConfig mc{sc_.protocol.seqno_window, sc_.protocol.route_expiry,
                      sc_.protocol.hop_penalty, sc_.protocol.ogm_ttl};
        for (const auto& nc : sc_.nodes) {
            NodeState st;
            st.cfg = nc;
            st.routes = RoutingTable(nc.id, mc);
            st.peers = PeerTable(nc.id, sc_.protocol.peer_expiry);
            nodes_.emplace(nc.id, std::move(st));
        }
        for (const auto& t : sc_.topics) {
            report_.topics[t.name];  // create counters in name order
            for (NodeId p : t.publishers)
                nodes_.at(p).buckets[t.topic_id] = TokenBucket::make(t.rate_limit, t.burst);
        }
        for (auto& [id, st] : nodes_) announce_bytes_[id] = build_announce(id);
        graph_ = RangeGraph(static_cast<std::size_t>(sc_.protocol.smoothing_window));
        report_.seed = sc_.seed;
        report_.duration = sc_.duration;
    }

    MetricsReport run() {
        if (ran_) throw std::logic_error("Simulator::run called twice");
        ran_ = true;
        log::info("run start: " + std::to_string(nodes_.size()) + " nodes, duration " +
                  std::to_string(sc_.duration) + " s, seed " + std::to_string(sc_.seed));
        schedule_initial();
        while (!queue_.empty() && queue_.next_time() < sc_.duration) {
            Event e = queue_.pop();
            e.fn();
        }
        finalize();
        log::info("run end");
        return report_;
    }

    // Introspection (tests, tools, harness setup).
    NodeState& node_state(NodeId id) { return nodes_.at(id); }
    const NodeState& node_state(NodeId id) const { return nodes_.at(id); }
    RangeGraph& range_graph() { return graph_; }
    const std::map<NodeId, PositionEstimate>& estimates() const { return estimates_; }
    const std::vector<DeliveryRecord>& deliveries() const { return deliveries_; }
    const Scenario& scenario() const { return sc_; }
    double now() const { return queue_.now(); }

    Position true_position(NodeId id, double t) const {
        return position_at(nodes_.at(id).cfg.trajectory, t);
    }

    /// Register an additional subscriber beyond the scenario binding. The
    /// node's next announce flood carries the new role; publishers start
    /// routing to it once that announce reaches them.
    SubscriptionHandle subscribe(NodeId node, std::uint16_t topic_id) {
        nodes_.at(node);  // unknown node is a configuration error
        if (topic_id >= sc_.topics.size()) throw std::out_of_range("unknown topic id");
        Topic& t = sc_.topics[topic_id];
        if (std::find(t.subscribers.begin(), t.subscribers.end(), node) == t.subscribers.end())
            t.subscribers.push_back(node);
        announce_bytes_[node] = build_announce(node);
        return {node, topic_id};
    }

    /// Publish on behalf of a node; normally driven by PublishTick events.
    PublishResult publish(NodeId n, std::uint16_t topic_id, const std::vector<std::uint8_t>& payload,
                          double now) {
        const Topic& topic = topic_by_id(topic_id);
        auto& tc = report_.topics.at(topic.name);
        ++tc.published;
        if (payload.size() > topic.max_payload) {
            ++tc.oversize;
            return PublishResult::Oversize;
        }
        auto& st = nodes_.at(n);
        auto bit = st.buckets.find(topic_id);
        if (bit == st.buckets.end())
            bit = st.buckets.emplace(topic_id, TokenBucket::make(topic.rate_limit, topic.burst)).first;
        if (!throttle_check(bit->second, now)) {
            ++tc.throttled;
            return PublishResult::Throttled;
        }
        ++tc.accepted;

        Transport tr = transport_select(topic, payload.size());
        std::uint32_t seq = st.pub_seqno[topic_id]++;
        for (NodeId s : known_subscribers(n, topic_id, now)) {
            ++tc.instances;
            if (tr == Transport::Mesh)
                mesh_unicast(n, s, topic, seq, payload, now);
            else
                enqueue_uwb(n, s, topic, seq, payload);
        }
        // A publisher that is also a listed subscriber hears itself directly.
        for (NodeId s : topic.subscribers)
            if (s == n) {
                ++tc.instances;
                deliver(topic, n, n, seq, payload, now);
            }
        return PublishResult::Accepted;
    }

private:
    using SessionKey = std::pair<NodeId, std::uint32_t>;  // (initiator, session seqno)

    const Topic& topic_by_id(std::uint16_t id) const {
        if (id >= sc_.topics.size()) throw std::out_of_range("unknown topic id");
        return sc_.topics[id];
    }

    std::vector<std::uint8_t> build_announce(NodeId id) const {
        wire::AnnounceFrame af;
        af.node = id;
        for (const auto& t : sc_.topics) {
            std::uint8_t flags = 0;
            for (NodeId p : t.publishers)
                if (p == id) flags |= wire::kFlagPublisher;
            for (NodeId s : t.subscribers)
                if (s == id) flags |= wire::kFlagSubscriber;
            if (flags) af.entries.push_back({t.topic_id, flags});
        }
        return wire::encode_announce(af);
    }

    void schedule_initial() {
        const auto& pc = sc_.protocol;
        for (const auto& [id, st] : nodes_) {
            if (pc.ogm_interval > 0.0) {
                NodeId nid = id;
                queue_.schedule(0.0, EventKind::OgmEmit, [this, nid] { on_ogm_emit(nid); });
            }
            if (pc.ranging_rate > 0.0) {
                NodeId nid = id;
                queue_.schedule(0.0, EventKind::RangingTick, [this, nid] { on_ranging_tick(nid); });
            }
        }
        if (pc.localization_cadence > 0.0)
            queue_.schedule(1.0 / pc.localization_cadence, EventKind::LocalizationTick,
                            [this] { on_localization_tick(); });
        if (pc.metrics_rate > 0.0)
            queue_.schedule(0.0, EventKind::MetricsSample, [this] { on_metrics_sample(); });
        for (const auto& t : sc_.topics) {
            if (t.publish_hz <= 0.0) continue;
            for (NodeId p : t.publishers) {
                std::uint16_t tid = t.topic_id;
                queue_.schedule(0.0, EventKind::PublishTick,
                                [this, tid, p] { on_publish_tick(tid, p); });
            }
        }
        for (const auto& w : sc_.world.interference_windows) {
            for (double edge : {w.start, w.end}) {
                if (edge < 0.0 || edge >= sc_.duration) continue;
                queue_.schedule(edge, EventKind::InterferenceEdge, [this, edge] {
                    log::trace("interference edge at t=" + std::to_string(edge));
                });
            }
        }
    }

    // ---- mesh layer ----

    void on_ogm_emit(NodeId id) {
        auto& st = nodes_.at(id);
        double now = queue_.now();
        wire::OgmFrame f{id, st.next_ogm_seqno++, 255, static_cast<std::uint8_t>(sc_.protocol.ogm_ttl),
                         st.cfg.is_gateway};
        broadcast(id, wire::encode_ogm(f), announce_bytes_.at(id), now);
        double next = now + sc_.protocol.ogm_interval;
        if (next < sc_.duration)
            queue_.schedule(next, EventKind::OgmEmit, [this, id] { on_ogm_emit(id); });
    }

    void broadcast(NodeId from, const std::vector<std::uint8_t>& ogm_bytes,
                   const std::vector<std::uint8_t>& announce, double now) {
        Position pf = true_position(from, now);
        for (const auto& [vid, vst] : nodes_) {
            if (vid == from) continue;
            Position pv = true_position(vid, now);
            double d = distance(pf, pv);
            double att = sc_.world.attenuation_at(now, pf, pv);
            double p = link_delivery_prob(sc_.channel.wifi, d, att);
            if (streams_.stream(RngPurpose::LinkDelivery, from, vid).uniform() >= p) continue;
            double t_arrive = now + d / kSpeedOfLightMetersPerS;
            NodeId to = vid;
            queue_.schedule(t_arrive, EventKind::OgmArrive,
                            [this, to, from, ogm_bytes, announce] {
                                on_ogm_arrive(to, from, ogm_bytes, announce);
                            });
        }
    }

    void on_ogm_arrive(NodeId v, NodeId from, const std::vector<std::uint8_t>& ogm_bytes,
                       const std::vector<std::uint8_t>& announce) {
        auto decoded = wire::decode_ogm(ogm_bytes);
        if (!decoded) return;
        double now = queue_.now();
        auto& st = nodes_.at(v);
        st.peers.observe(decoded->origin, decoded->gateway, now);
        if (auto af = wire::decode_announce(announce); af && af->node != v) {
            auto& info = st.announces[af->node];
            info.last_seen = now;
            info.topics.clear();
            for (const auto& e : af->entries) info.topics[e.topic_id] = e.flags;
        }
        Ogm ogm{decoded->origin, decoded->seqno, decoded->tq, decoded->ttl, decoded->gateway};
        auto rebroadcast = st.routes.process_ogm(ogm, from, now);
        if (rebroadcast) {
            wire::OgmFrame out{rebroadcast->origin, rebroadcast->seqno,
                               static_cast<std::uint8_t>(rebroadcast->tq),
                               static_cast<std::uint8_t>(rebroadcast->ttl), rebroadcast->gateway};
            broadcast(v, wire::encode_ogm(out), announce, now);
        }
    }

    // ---- pub/sub ----

    std::vector<NodeId> known_subscribers(NodeId n, std::uint16_t topic_id, double now) const {
        std::vector<NodeId> out;
        const auto& st = nodes_.at(n);
        for (const auto& [peer, info] : st.announces) {
            if (now - info.last_seen > sc_.protocol.peer_expiry) continue;
            auto it = info.topics.find(topic_id);
            if (it != info.topics.end() && (it->second & wire::kFlagSubscriber)) out.push_back(peer);
        }
        return out;
    }

    /// Hop-by-hop unicast along current routing tables; each hop is an
    /// independent Bernoulli draw, no retransmissions. Hops resolve at
    /// publish time (radio flight is nanoseconds against table dynamics).
    void mesh_unicast(NodeId from, NodeId dest, const Topic& topic, std::uint32_t seq,
                      const std::vector<std::uint8_t>& payload, double now) {
        auto& tc = report_.topics.at(topic.name);
        NodeId cur = from;
        double t_walk = now;
        int ttl = sc_.protocol.mesh_forward_ttl;
        while (cur != dest) {
            if (ttl-- <= 0) {
                ++tc.dropped;
                return;
            }
            auto nh = nodes_.at(cur).routes.next_hop(dest, now);
            if (!nh) {
                ++tc.dropped;
                return;
            }
            Position pc = true_position(cur, now);
            Position pn = true_position(*nh, now);
            double att = sc_.world.attenuation_at(now, pc, pn);
            double p = link_delivery_prob(sc_.channel.wifi, distance(pc, pn), att);
            if (streams_.stream(RngPurpose::LinkDelivery, cur, *nh).uniform() >= p) {
                ++tc.dropped;
                return;
            }
            t_walk += distance(pc, pn) / kSpeedOfLightMetersPerS;
            cur = *nh;
        }
        deliver(topic, from, dest, seq, payload, t_walk);
    }

    void enqueue_uwb(NodeId n, NodeId s, const Topic& topic, std::uint32_t seq,
                     const std::vector<std::uint8_t>& payload) {
        auto& q = nodes_.at(n).uwb_queues[s];
        q.push_back({topic.topic_id, seq, payload});
        if (q.size() > static_cast<std::size_t>(sc_.protocol.uwb_queue_depth)) {
            ++report_.topics.at(topic_by_id(q.front().topic_id).name).dropped;
            q.pop_front();  // freshest signal wins
        }
    }

    void deliver(const Topic& topic, NodeId publisher, NodeId subscriber, std::uint32_t seq,
                 const std::vector<std::uint8_t>& payload, double t) {
        auto key = std::make_tuple(publisher, topic.topic_id, seq, subscriber);
        if (!delivered_keys_.insert(key).second) return;  // at-most-once per subscriber
        ++report_.topics.at(topic.name).delivered;
        deliveries_.push_back({t, topic.topic_id, publisher, subscriber, seq, payload});
    }

    // ---- uwb ranging ----

    void on_ranging_tick(NodeId id) {
        auto& st = nodes_.at(id);
        double now = queue_.now();
        if (!st.session_active) {
            auto peer = schedule_next(st.peers.discovered(now), st.last_ranged);
            if (peer) start_session(id, *peer, now);
        }
        double next = now + 1.0 / sc_.protocol.ranging_rate;
        if (next < sc_.duration)
            queue_.schedule(next, EventKind::RangingTick, [this, id] { on_ranging_tick(id); });
    }

    void start_session(NodeId a, NodeId b, double now) {
        auto& st = nodes_.at(a);
        std::uint32_t seq = st.next_session_seqno++;
        st.last_ranged[b] = now;
        st.session_active = true;
        ++st.ranging_attempts;
        ++report_.ranging.attempts;

        Session s;
        s.initiator = a;
        s.responder = b;
        s.seqno = seq;
        s.state = SessionState::PollSent;
        s.t_start = now;
        SessionKey key{a, seq};
        sessions_[key] = s;

        wire::UwbFrame poll{wire::kUwbPoll, a, b, seq, 0, {}};
        std::uint32_t mseq = attach_payload(a, b, poll);
        send_uwb_frame(a, b, now, 0.0, poll, mseq);

        queue_.schedule(now + sc_.protocol.session_timeout, EventKind::SessionTimeout,
                        [this, key] { on_session_timeout(key); });
    }

    std::uint32_t attach_payload(NodeId from, NodeId to, wire::UwbFrame& frame) {
        auto& q = nodes_.at(from).uwb_queues[to];
        if (q.empty()) return 0;
        frame.topic_id = q.front().topic_id;
        frame.payload = std::move(q.front().bytes);
        std::uint32_t seq = q.front().seqno;
        q.pop_front();
        return seq;
    }

    /// Range-gate at transmit time; a frame beyond max_range is simply lost
    /// (and any riding payload with it). off_tx_ns is the session-relative
    /// transmit instant, carried forward so duration math never touches the
    /// absolute timeline.
    void send_uwb_frame(NodeId from, NodeId to, double t_tx, double off_tx_ns,
                        const wire::UwbFrame& frame, std::uint32_t msg_seqno) {
        Position pa = true_position(from, t_tx);
        Position pb = true_position(to, t_tx);
        double d = distance(pa, pb);
        bool ok = d <= sc_.channel.uwb.max_range;
        if (!frame.payload.empty()) {
            const Topic& topic = topic_by_id(frame.topic_id);
            if (ok)
                ++report_.topics.at(topic.name).in_flight;
            else
                ++report_.topics.at(topic.name).dropped;
        }
        if (!ok) return;
        auto bytes = wire::encode_uwb(frame);
        double off_rx_ns = off_tx_ns + d / kSpeedOfLightMetersPerNs;
        double t_arrive = t_tx + d / kSpeedOfLightMetersPerS;
        queue_.schedule(t_arrive, EventKind::UwbFrameArrive,
                        [this, to, bytes, msg_seqno, off_rx_ns] {
                            on_uwb_frame(to, bytes, msg_seqno, off_rx_ns);
                        });
    }

    void on_uwb_frame(NodeId v, const std::vector<std::uint8_t>& bytes, std::uint32_t msg_seqno,
                      double off_rx_ns) {
        auto f = wire::decode_uwb(bytes);
        if (!f) return;
        double now = queue_.now();

        if (!f->payload.empty()) {
            const Topic& topic = topic_by_id(f->topic_id);
            auto& tc = report_.topics.at(topic.name);
            --tc.in_flight;
            bool subscribed = false;
            for (NodeId s : topic.subscribers) subscribed = subscribed || s == v;
            if (subscribed)
                deliver(topic, f->src, v, msg_seqno, f->payload, now);
            else
                ++tc.dropped;
        }

        SessionKey key{f->type == wire::kUwbResponse ? f->dst : f->src, f->session};
        auto it = sessions_.find(key);
        if (it == sessions_.end()) return;
        Session& s = it->second;

        if (f->type == wire::kUwbPoll && s.state == SessionState::PollSent && v == s.responder) {
            s.off_poll_rx = off_rx_ns;
            double tau = draw_turnaround(v, s.initiator);
            s.off_resp_tx = s.off_poll_rx + tau * 1e9;
            s.state = SessionState::ResponseSent;
            wire::UwbFrame resp{wire::kUwbResponse, v, s.initiator, s.seqno, 0, {}};
            std::uint32_t mseq = attach_payload(v, s.initiator, resp);
            send_uwb_frame(v, s.initiator, s.t_start + s.off_resp_tx * 1e-9, s.off_resp_tx, resp,
                           mseq);
        } else if (f->type == wire::kUwbResponse && s.state == SessionState::ResponseSent &&
                   v == s.initiator) {
            s.off_resp_rx = off_rx_ns;
            double tau = draw_turnaround(v, s.responder);
            s.off_final_tx = s.off_resp_rx + tau * 1e9;
            s.state = SessionState::FinalSent;
            wire::UwbFrame fin{wire::kUwbFinal, v, s.responder, s.seqno, 0, {}};
            send_uwb_frame(v, s.responder, s.t_start + s.off_final_tx * 1e-9, s.off_final_tx, fin,
                           0);
        } else if (f->type == wire::kUwbFinal && s.state == SessionState::FinalSent &&
                   v == s.responder) {
            s.off_final_rx = off_rx_ns;
            s.state = SessionState::Complete;
            complete_session(s, now);
            nodes_.at(s.initiator).session_active = false;
            sessions_.erase(it);
        }
    }

    double draw_turnaround(NodeId who, NodeId peer) {
        double u = streams_.stream(RngPurpose::Turnaround, who, peer).uniform();
        return sc_.protocol.turnaround + sc_.protocol.turnaround_jitter * (2.0 * u - 1.0);
    }

    void complete_session(const Session& s, double now) {
        const auto& ca = nodes_.at(s.initiator).cfg.clock;
        const auto& cb = nodes_.at(s.responder).cfg.clock;
        RangingTimestamps ts;
        ts.round_a = ca.local_duration(0.0, s.off_resp_rx);
        ts.delay_a = ca.local_duration(s.off_resp_rx, s.off_final_tx);
        ts.round_b = cb.local_duration(s.off_resp_tx, s.off_final_rx);
        ts.delay_b = cb.local_duration(s.off_poll_rx, s.off_resp_tx);
        double dist_est = ds_twr_tof(ts) * kSpeedOfLightMetersPerNs;

        Position pa = true_position(s.initiator, s.t_start);
        Position pb = true_position(s.responder, s.t_start);
        auto err = sample_range_error(sc_.world, sc_.channel.uwb, pa, pb,
                                      streams_.stream(RngPurpose::UwbNoise, s.initiator, s.responder));
        double measured = dist_est + (err ? *err : 0.0);
        if (measured < 0.0) measured = 0.0;

        graph_.add(RangeMeasurement{s.initiator, s.responder, measured, now, {}});
        auto& st = nodes_.at(s.initiator);
        ++st.ranging_successes;
        ++report_.ranging.successes;
        report_.ranging.latency_sum += now - s.t_start;
    }

    void on_session_timeout(SessionKey key) {
        auto it = sessions_.find(key);
        if (it == sessions_.end()) return;  // completed and erased
        it->second.state = SessionState::Failed;
        nodes_.at(it->second.initiator).session_active = false;
        sessions_.erase(it);
    }

    // ---- traffic generation ----

    void on_publish_tick(std::uint16_t topic_id, NodeId publisher) {
        const Topic& topic = topic_by_id(topic_id);
        double now = queue_.now();
        std::vector<std::uint8_t> payload(topic.payload_bytes);
        for (std::size_t i = 0; i < payload.size(); ++i)
            payload[i] = static_cast<std::uint8_t>((topic_id * 37 + i) & 0xff);
        publish(publisher, topic_id, payload, now);
        double next = now + 1.0 / topic.publish_hz;
        if (next < sc_.duration)
            queue_.schedule(next, EventKind::PublishTick,
                            [this, topic_id, publisher] { on_publish_tick(topic_id, publisher); });
    }

    // ---- localization ----

    void on_localization_tick() {
        double now = queue_.now();
        SolverConfig cfg;
        cfg.mode = sc_.protocol.localization_mode;

        std::map<NodeId, AltitudeInfo> altitudes;
        for (auto& [id, st] : nodes_) {
            if (st.cfg.is_anchor || !st.cfg.has_altimeter) continue;
            double z_true = true_position(id, now).z;
            double z = z_true;
            if (st.cfg.altimeter_sigma > 0.0)
                z += st.cfg.altimeter_sigma * streams_.stream(RngPurpose::Altimeter, id).gaussian();
            altitudes[id] = {z, st.cfg.altimeter_sigma};
        }

        std::map<NodeId, PositionEstimate> seeds_map;
        std::set<NodeId> seeds;
        bool have_anchor = false;
        for (const auto& [id, st] : nodes_) have_anchor = have_anchor || st.cfg.is_anchor;
        loc_alignment_ = {};
        if (have_anchor) {
            for (const auto& [id, st] : nodes_) {
                if (!st.cfg.is_anchor) continue;
                seeds_map[id] = {true_position(id, now), Frame::Global, true, 0, 0.0};
                seeds.insert(id);
            }
        } else {
            // No surveyed nodes: seed the gateway at the origin and localize
            // the swarm relative to it.
            for (const auto& [id, st] : nodes_) {
                if (!st.cfg.is_gateway) continue;
                double z = altitudes.count(id) ? altitudes.at(id).z : 0.0;
                seeds_map[id] = {Position{0.0, 0.0, z}, Frame::Relative, true, 0, 0.0};
                seeds.insert(id);
                Position truth = true_position(id, now);
                loc_alignment_ = {truth.x, truth.y, 0.0};
                break;
            }
        }

        if (!seeds.empty())
            estimates_ = propagate_localization(graph_, std::move(seeds_map), seeds, cfg, altitudes);
        log::trace("localization tick at t=" + std::to_string(now));

        double next = now + 1.0 / sc_.protocol.localization_cadence;
        if (next < sc_.duration)
            queue_.schedule(next, EventKind::LocalizationTick, [this] { on_localization_tick(); });
    }

    double localization_error(NodeId id, const PositionEstimate& est, double t) const {
        Position aligned = est.position;
        if (est.frame == Frame::Relative) aligned = aligned + loc_alignment_;
        return distance(aligned, true_position(id, t));
    }

    // ---- metrics ----

    void on_metrics_sample() {
        double now = queue_.now();
        for (const auto& [id, st] : nodes_) {
            auto et = estimates_.find(id);
            bool localized = et != estimates_.end() && et->second.localized;
            // Seeds are inputs, not estimates; only inferred positions carry
            // a localization error sample.
            if (localized && et->second.hop_depth > 0)
                report_.series.push_back({now, id, SeriesMetric::LocErrorM,
                                          localization_error(id, et->second, now)});
            report_.series.push_back({now, id, SeriesMetric::Localized, localized ? 1.0 : 0.0});
            report_.series.push_back(
                {now, id, SeriesMetric::Routes,
                 static_cast<double>(st.routes.live_route_count(now))});
            if (st.ranging_attempts > 0)
                report_.series.push_back({now, id, SeriesMetric::RangingSuccess,
                                          static_cast<double>(st.ranging_successes) /
                                              static_cast<double>(st.ranging_attempts)});
        }
        double next = now + 1.0 / sc_.protocol.metrics_rate;
        if (next < sc_.duration)
            queue_.schedule(next, EventKind::MetricsSample, [this] { on_metrics_sample(); });
    }

    void finalize() {
        for (const auto& [id, st] : nodes_) {
            for (const auto& [peer, q] : st.uwb_queues)
                for (const auto& item : q)
                    ++report_.topics.at(topic_by_id(item.topic_id).name).in_flight;
            NodeFinal f;
            auto et = estimates_.find(id);
            if (et != estimates_.end() && et->second.localized) {
                f.localized = true;
                f.hop_depth = et->second.hop_depth;
                f.global_frame = et->second.frame == Frame::Global;
                f.error_m = localization_error(id, et->second, sc_.duration);
            }
            report_.final_nodes[id] = f;
        }
    }

    Scenario sc_;
    RandomStreams streams_;
    EventQueue queue_;
    std::map<NodeId, NodeState> nodes_;
    std::map<NodeId, std::vector<std::uint8_t>> announce_bytes_;
    std::map<SessionKey, Session> sessions_;
    RangeGraph graph_{5};
    std::map<NodeId, PositionEstimate> estimates_;
    Vec3 loc_alignment_;
    std::vector<DeliveryRecord> deliveries_;
    std::set<std::tuple<NodeId, std::uint16_t, std::uint32_t, NodeId>> delivered_keys_;
    MetricsReport report_;
    bool ran_ = false;
};

/// Convenience wrapper: one deterministic run of a scenario.
inline MetricsReport run(const Scenario& scenario) { return Simulator(scenario).run(); }

}  // namespace meshloc
