#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "meshloc/bus.hpp"
#include "meshloc/localization.hpp"
#include "meshloc/mesh.hpp"
#include "meshloc/types.hpp"
#include "meshloc/uwb.hpp"
#include "meshloc/world.hpp"

namespace meshloc {

struct ProtocolConfig {
    double ogm_interval = 1.0;      // seconds; 0 disables the mesh layer
    int ogm_ttl = 16;
    int hop_penalty = 30;           // tq scaling (255 - penalty)/255 per rebroadcast
    int seqno_window = 64;
    double route_expiry = 10.0;     // seconds
    double peer_expiry = 10.0;      // seconds
    double ranging_rate = 10.0;     // sessions initiated per second per node; 0 disables
    double turnaround = 300e-6;     // seconds between receiving and replying
    double turnaround_jitter = 10e-6;  // uniform +/- jitter on the turnaround
    double session_timeout = 5e-3;  // seconds
    double localization_cadence = 1.0;  // fixpoint recomputes per second; 0 disables
    SolverMode localization_mode = SolverMode::Planar2D;
    int smoothing_window = 5;       // median window per node pair
    double metrics_rate = 10.0;     // samples per second; 0 disables the series
    int uwb_queue_depth = 8;        // queued payloads per peer, drop-oldest
    int mesh_forward_ttl = 16;      // hop budget for mesh data frames
};

struct ChannelConfig {
    LinkModel wifi;
    UwbChannel uwb;
};

struct Scenario {
    int schema_version = 1;
    std::string description;
    double duration = 0.0;
    std::uint64_t seed = 0;
    World world;
    ChannelConfig channel;
    ProtocolConfig protocol;
    std::vector<NodeConfig> nodes;
    std::vector<Topic> topics;

    const NodeConfig* find_node(NodeId id) const {
        for (const auto& n : nodes)
            if (n.id == id) return &n;
        return nullptr;
    }
};

struct ValidationResult {
    std::optional<Scenario> scenario;  // set iff errors is empty
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
};

namespace detail {

using nlohmann::json;

class ScenarioParser {
public:
    ValidationResult parse(const std::string& text) {
        json root;
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            res_.errors.push_back("parse error at byte " + std::to_string(e.byte) + ": " +
                                  e.what());
            return std::move(res_);
        }
        parse_root(root);
        if (res_.errors.empty()) res_.scenario = std::move(sc_);
        return std::move(res_);
    }

private:
    void err(const std::string& m) { res_.errors.push_back(m); }
    void warn(const std::string& m) { res_.warnings.push_back(m); }

    void check_keys(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
        if (!obj.is_object()) {
            err(where + ": expected an object");
            return;
        }
        for (const auto& [key, value] : obj.items())
            if (!allowed.count(key)) err(where + ": unknown key '" + key + "'");
    }

    bool want(const json& obj, const std::string& where, const char* key, bool required) {
        if (obj.contains(key)) return true;
        if (required) err(where + ": missing required key '" + std::string(key) + "'");
        return false;
    }

    double num(const json& obj, const std::string& where, const char* key, double fallback,
               bool required = false) {
        if (!want(obj, where, key, required)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            err(where + "." + key + ": expected a number");
            return fallback;
        }
        return v.get<double>();
    }

    int int_num(const json& obj, const std::string& where, const char* key, int fallback) {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < -1000000 ||
            v.get<std::int64_t>() > 1000000) {
            err(where + "." + key + ": expected a small integer");
            return fallback;
        }
        return static_cast<int>(v.get<std::int64_t>());
    }

    bool flag(const json& obj, const std::string& where, const char* key, bool fallback) {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_boolean()) {
            err(where + "." + key + ": expected a boolean");
            return fallback;
        }
        return v.get<bool>();
    }

    std::optional<Vec3> vec3(const json& v, const std::string& where) {
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
            !v[2].is_number()) {
            err(where + ": expected [x, y, z]");
            return std::nullopt;
        }
        return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    std::optional<Aabb> box(const json& v, const std::string& where) {
        check_keys(v, where, {"min", "max"});
        if (!v.is_object() || !v.contains("min") || !v.contains("max")) {
            err(where + ": expected {min, max}");
            return std::nullopt;
        }
        auto mn = vec3(v["min"], where + ".min");
        auto mx = vec3(v["max"], where + ".max");
        if (!mn || !mx) return std::nullopt;
        if (mn->x > mx->x || mn->y > mx->y || mn->z > mx->z) {
            err(where + ": box extents are negative (min > max)");
            return std::nullopt;
        }
        return Aabb{*mn, *mx};
    }

    void parse_root(const json& root) {
        check_keys(root, "scenario",
                   {"schema_version", "description", "duration", "seed", "world", "channel",
                    "protocol", "nodes", "topics"});
        if (!root.is_object()) return;

        if (want(root, "scenario", "schema_version", true)) {
            if (!root["schema_version"].is_number_integer() ||
                root["schema_version"].get<int>() != 1)
                err("scenario.schema_version: only version 1 is supported");
        }
        if (root.contains("description")) {
            if (!root["description"].is_string())
                err("scenario.description: expected a string");
            else
                sc_.description = root["description"].get<std::string>();
        }
        sc_.duration = num(root, "scenario", "duration", 0.0, true);
        if (!(sc_.duration >= 0.0)) err("scenario.duration: must be >= 0");
        if (want(root, "scenario", "seed", true)) {
            if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
                err("scenario.seed: expected a non-negative integer");
            else if (root["seed"].is_number_integer() && root["seed"].get<std::int64_t>() < 0)
                err("scenario.seed: expected a non-negative integer");
            else
                sc_.seed = root["seed"].get<std::uint64_t>();
        }
        if (root.contains("world")) parse_world(root["world"]);
        if (root.contains("channel")) parse_channel(root["channel"]);
        if (root.contains("protocol")) parse_protocol(root["protocol"]);
        if (want(root, "scenario", "nodes", true)) parse_nodes(root["nodes"]);
        if (root.contains("topics")) parse_topics(root["topics"]);
        semantic_checks();  // report semantic violations alongside structural ones
    }

    void parse_world(const json& w) {
        check_keys(w, "world", {"obstacles", "interference_windows"});
        if (!w.is_object()) return;
        if (w.contains("obstacles")) {
            if (!w["obstacles"].is_array()) {
                err("world.obstacles: expected an array");
            } else {
                int i = 0;
                for (const auto& o : w["obstacles"]) {
                    auto b = box(o, "world.obstacles[" + std::to_string(i) + "]");
                    if (b) sc_.world.obstacles.push_back(*b);
                    ++i;
                }
            }
        }
        if (w.contains("interference_windows")) {
            if (!w["interference_windows"].is_array()) {
                err("world.interference_windows: expected an array");
                return;
            }
            int i = 0;
            for (const auto& o : w["interference_windows"]) {
                std::string where = "world.interference_windows[" + std::to_string(i++) + "]";
                check_keys(o, where, {"start", "end", "region", "attenuation"});
                if (!o.is_object()) continue;
                InterferenceWindow win;
                win.start = num(o, where, "start", 0.0, true);
                win.end = num(o, where, "end", 0.0, true);
                win.attenuation = num(o, where, "attenuation", 0.0, true);
                if (win.end < win.start) err(where + ": end before start");
                if (win.attenuation < 0.0 || win.attenuation > 1.0)
                    err(where + ".attenuation: must be in [0, 1]");
                if (want(o, where, "region", true)) {
                    auto b = box(o["region"], where + ".region");
                    if (b) win.region = *b;
                }
                sc_.world.interference_windows.push_back(win);
            }
        }
    }

    void parse_channel(const json& c) {
        check_keys(c, "channel", {"wifi", "uwb"});
        if (!c.is_object()) return;
        if (c.contains("wifi")) {
            const auto& w = c["wifi"];
            check_keys(w, "channel.wifi", {"reference_range", "falloff_width"});
            sc_.channel.wifi.reference_range =
                num(w, "channel.wifi", "reference_range", sc_.channel.wifi.reference_range);
            sc_.channel.wifi.falloff_width =
                num(w, "channel.wifi", "falloff_width", sc_.channel.wifi.falloff_width);
            if (!(sc_.channel.wifi.reference_range > 0.0))
                err("channel.wifi.reference_range: must be > 0");
            if (!(sc_.channel.wifi.falloff_width > 0.0))
                err("channel.wifi.falloff_width: must be > 0");
        }
        if (c.contains("uwb")) {
            const auto& u = c["uwb"];
            check_keys(u, "channel.uwb", {"sigma_los", "nlos_bias_mean", "max_range"});
            sc_.channel.uwb.sigma_los = num(u, "channel.uwb", "sigma_los", sc_.channel.uwb.sigma_los);
            sc_.channel.uwb.nlos_bias_mean =
                num(u, "channel.uwb", "nlos_bias_mean", sc_.channel.uwb.nlos_bias_mean);
            sc_.channel.uwb.max_range = num(u, "channel.uwb", "max_range", sc_.channel.uwb.max_range);
            if (sc_.channel.uwb.sigma_los < 0.0) err("channel.uwb.sigma_los: must be >= 0");
            if (sc_.channel.uwb.nlos_bias_mean < 0.0)
                err("channel.uwb.nlos_bias_mean: must be >= 0");
            if (!(sc_.channel.uwb.max_range > 0.0)) err("channel.uwb.max_range: must be > 0");
        }
    }

    void parse_protocol(const json& p) {
        check_keys(p, "protocol",
                   {"ogm_interval", "ogm_ttl", "hop_penalty", "seqno_window", "route_expiry",
                    "peer_expiry", "ranging_rate", "turnaround", "turnaround_jitter",
                    "session_timeout", "localization_cadence", "localization_mode",
                    "smoothing_window", "metrics_rate", "uwb_queue_depth", "mesh_forward_ttl"});
        if (!p.is_object()) return;
        auto& pc = sc_.protocol;
        pc.ogm_interval = num(p, "protocol", "ogm_interval", pc.ogm_interval);
        pc.ogm_ttl = int_num(p, "protocol", "ogm_ttl", pc.ogm_ttl);
        pc.hop_penalty = int_num(p, "protocol", "hop_penalty", pc.hop_penalty);
        pc.seqno_window = int_num(p, "protocol", "seqno_window", pc.seqno_window);
        pc.route_expiry = num(p, "protocol", "route_expiry", pc.route_expiry);
        pc.peer_expiry = num(p, "protocol", "peer_expiry", pc.peer_expiry);
        pc.ranging_rate = num(p, "protocol", "ranging_rate", pc.ranging_rate);
        pc.turnaround = num(p, "protocol", "turnaround", pc.turnaround);
        pc.turnaround_jitter = num(p, "protocol", "turnaround_jitter", pc.turnaround_jitter);
        pc.session_timeout = num(p, "protocol", "session_timeout", pc.session_timeout);
        pc.localization_cadence = num(p, "protocol", "localization_cadence", pc.localization_cadence);
        pc.smoothing_window = int_num(p, "protocol", "smoothing_window", pc.smoothing_window);
        pc.metrics_rate = num(p, "protocol", "metrics_rate", pc.metrics_rate);
        pc.uwb_queue_depth = int_num(p, "protocol", "uwb_queue_depth", pc.uwb_queue_depth);
        pc.mesh_forward_ttl = int_num(p, "protocol", "mesh_forward_ttl", pc.mesh_forward_ttl);
        if (p.contains("localization_mode")) {
            if (!p["localization_mode"].is_string()) {
                err("protocol.localization_mode: expected \"planar2d\" or \"full3d\"");
            } else {
                std::string m = p["localization_mode"].get<std::string>();
                if (m == "planar2d")
                    pc.localization_mode = SolverMode::Planar2D;
                else if (m == "full3d")
                    pc.localization_mode = SolverMode::Full3D;
                else
                    err("protocol.localization_mode: expected \"planar2d\" or \"full3d\"");
            }
        }
        if (pc.ogm_interval < 0.0) err("protocol.ogm_interval: must be >= 0 (0 disables)");
        if (pc.ogm_ttl < 1 || pc.ogm_ttl > 255) err("protocol.ogm_ttl: must be in [1, 255]");
        if (pc.hop_penalty < 0 || pc.hop_penalty > 255)
            err("protocol.hop_penalty: must be in [0, 255]");
        if (pc.seqno_window < 1) err("protocol.seqno_window: must be >= 1");
        if (!(pc.route_expiry > 0.0)) err("protocol.route_expiry: must be > 0");
        if (!(pc.peer_expiry > 0.0)) err("protocol.peer_expiry: must be > 0");
        if (pc.ranging_rate < 0.0) err("protocol.ranging_rate: must be >= 0 (0 disables)");
        if (!(pc.turnaround > 0.0)) err("protocol.turnaround: must be > 0");
        if (pc.turnaround_jitter < 0.0 || pc.turnaround_jitter >= pc.turnaround)
            err("protocol.turnaround_jitter: must be in [0, turnaround)");
        if (!(pc.session_timeout > 0.0)) err("protocol.session_timeout: must be > 0");
        if (pc.localization_cadence < 0.0)
            err("protocol.localization_cadence: must be >= 0 (0 disables)");
        if (pc.smoothing_window < 1) err("protocol.smoothing_window: must be >= 1");
        if (pc.metrics_rate < 0.0) err("protocol.metrics_rate: must be >= 0 (0 disables)");
        if (pc.uwb_queue_depth < 1) err("protocol.uwb_queue_depth: must be >= 1");
        if (pc.mesh_forward_ttl < 1) err("protocol.mesh_forward_ttl: must be >= 1");
        if (pc.session_timeout <= 2.0 * (pc.turnaround + pc.turnaround_jitter))
            warn("protocol.session_timeout is too short for two turnarounds; sessions will "
                 "always time out");
    }

    void parse_nodes(const json& arr) {
        if (!arr.is_array() || arr.empty()) {
            err("nodes: expected a non-empty array");
            return;
        }
        int i = 0;
        for (const auto& n : arr) {
            std::string where = "nodes[" + std::to_string(i++) + "]";
            check_keys(n, where,
                       {"id", "waypoints", "clock", "is_gateway", "is_anchor", "has_altimeter",
                        "altimeter_sigma"});
            if (!n.is_object()) continue;
            NodeConfig nc;
            if (want(n, where, "id", true)) {
                if (!n["id"].is_number_integer() || n["id"].get<std::int64_t>() < 0 ||
                    n["id"].get<std::int64_t>() > 0xfffe)
                    err(where + ".id: expected an integer in [0, 65534]");
                else
                    nc.id = static_cast<NodeId>(n["id"].get<std::int64_t>());
            }
            if (want(n, where, "waypoints", true)) {
                const auto& wps = n["waypoints"];
                if (!wps.is_array() || wps.empty()) {
                    err(where + ".waypoints: expected a non-empty array");
                } else {
                    int j = 0;
                    for (const auto& w : wps) {
                        std::string wwhere = where + ".waypoints[" + std::to_string(j++) + "]";
                        check_keys(w, wwhere, {"t", "pos"});
                        if (!w.is_object()) continue;
                        Waypoint wp;
                        wp.t = num(w, wwhere, "t", 0.0, true);
                        if (want(w, wwhere, "pos", true)) {
                            auto v = vec3(w["pos"], wwhere + ".pos");
                            if (v) wp.pos = *v;
                        }
                        if (!wp.pos.finite()) err(wwhere + ".pos: must be finite");
                        nc.trajectory.waypoints.push_back(wp);
                    }
                    for (std::size_t k = 1; k < nc.trajectory.waypoints.size(); ++k)
                        if (nc.trajectory.waypoints[k].t <= nc.trajectory.waypoints[k - 1].t)
                            err(where + ".waypoints: times must be strictly increasing");
                }
            }
            if (n.contains("clock")) {
                const auto& c = n["clock"];
                check_keys(c, where + ".clock", {"offset_ns", "drift_ppm"});
                nc.clock.offset_ns = num(c, where + ".clock", "offset_ns", 0.0);
                nc.clock.drift_ppm = num(c, where + ".clock", "drift_ppm", 0.0);
                if (std::abs(nc.clock.drift_ppm) > 100.0)
                    err(where + ".clock.drift_ppm: |drift| must be <= 100 ppm");
            }
            nc.is_gateway = flag(n, where, "is_gateway", false);
            nc.is_anchor = flag(n, where, "is_anchor", false);
            nc.has_altimeter = flag(n, where, "has_altimeter", false);
            nc.altimeter_sigma = num(n, where, "altimeter_sigma", 0.0);
            if (nc.altimeter_sigma < 0.0) err(where + ".altimeter_sigma: must be >= 0");
            if (nc.altimeter_sigma > 0.0 && !nc.has_altimeter)
                warn(where + ": altimeter_sigma set but has_altimeter is false");
            sc_.nodes.push_back(std::move(nc));
        }
    }

    void parse_topics(const json& arr) {
        if (!arr.is_array()) {
            err("topics: expected an array");
            return;
        }
        int i = 0;
        for (const auto& t : arr) {
            std::string where = "topics[" + std::to_string(i) + "]";
            check_keys(t, where,
                       {"name", "rate_limit", "burst", "transport", "max_payload", "publishers",
                        "subscribers", "publish_hz", "payload_bytes"});
            if (!t.is_object()) {
                ++i;
                continue;
            }
            Topic topic;
            topic.topic_id = static_cast<std::uint16_t>(i);
            if (want(t, where, "name", true)) {
                if (!t["name"].is_string())
                    err(where + ".name: expected a string");
                else
                    topic.name = t["name"].get<std::string>();
                if (topic.name.empty() || topic.name.size() > 48)
                    err(where + ".name: must be 1..48 bytes");
            }
            topic.rate_limit = num(t, where, "rate_limit", 0.0);
            topic.burst = int_num(t, where, "burst", 1);
            int mp = int_num(t, where, "max_payload", 64);
            if (mp < 0) {
                err(where + ".max_payload: must be >= 0");
                mp = 64;
            }
            topic.max_payload = static_cast<std::size_t>(mp);
            topic.publish_hz = num(t, where, "publish_hz", 1.0);
            int pb = int_num(t, where, "payload_bytes", 8);
            if (pb < 0) {
                err(where + ".payload_bytes: must be >= 0");
                pb = 0;
            }
            topic.payload_bytes = static_cast<std::size_t>(pb);
            if (t.contains("transport")) {
                if (!t["transport"].is_string()) {
                    err(where + ".transport: expected \"mesh\", \"uwb_embedded\" or \"auto\"");
                } else {
                    std::string tr = t["transport"].get<std::string>();
                    if (tr == "mesh")
                        topic.transport = Transport::Mesh;
                    else if (tr == "uwb_embedded")
                        topic.transport = Transport::UwbEmbedded;
                    else if (tr == "auto")
                        topic.transport = Transport::Auto;
                    else
                        err(where + ".transport: expected \"mesh\", \"uwb_embedded\" or \"auto\"");
                }
            }
            auto ids = [&](const char* key, std::vector<NodeId>& out) {
                if (!t.contains(key)) return;
                if (!t[key].is_array()) {
                    err(where + "." + key + ": expected an array of node ids");
                    return;
                }
                for (const auto& v : t[key]) {
                    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
                        v.get<std::int64_t>() > 0xfffe) {
                        err(where + "." + key + ": node ids must be integers in [0, 65534]");
                        continue;
                    }
                    out.push_back(static_cast<NodeId>(v.get<std::int64_t>()));
                }
            };
            ids("publishers", topic.publishers);
            ids("subscribers", topic.subscribers);
            if (topic.rate_limit < 0.0) err(where + ".rate_limit: must be >= 0");
            if (topic.burst < 1) err(where + ".burst: must be >= 1");
            if (topic.transport == Transport::UwbEmbedded && topic.max_payload > kUwbPayloadCap)
                err(where + ": uwb_embedded topics require max_payload <= 64");
            if (topic.payload_bytes > topic.max_payload)
                err(where + ".payload_bytes: exceeds max_payload");
            if (topic.publish_hz < 0.0) err(where + ".publish_hz: must be >= 0");
            sc_.topics.push_back(std::move(topic));
            ++i;
        }
    }

    void semantic_checks() {
        std::set<NodeId> ids;
        int gateways = 0;
        int anchors = 0;
        for (const auto& n : sc_.nodes) {
            if (!ids.insert(n.id).second)
                err("nodes: duplicate node id " + std::to_string(n.id));
            if (n.is_gateway) ++gateways;
            if (n.is_anchor) ++anchors;
        }
        if (gateways > 1) err("nodes: at most one gateway per scenario");

        std::set<std::string> names;
        for (const auto& t : sc_.topics) {
            if (!names.insert(t.name).second) err("topics: duplicate topic name '" + t.name + "'");
            for (NodeId p : t.publishers)
                if (!ids.count(p))
                    err("topic '" + t.name + "': publisher references nonexistent node " +
                        std::to_string(p));
            for (NodeId s : t.subscribers)
                if (!ids.count(s))
                    err("topic '" + t.name + "': subscriber references nonexistent node " +
                        std::to_string(s));
        }

        if (sc_.protocol.localization_cadence > 0.0) {
            int k = sc_.protocol.localization_mode == SolverMode::Planar2D ? 3 : 4;
            if (anchors < k && gateways == 0)
                warn("localization enabled with fewer than " + std::to_string(k) +
                     " anchors and no gateway; nodes may never localize");
            if (sc_.protocol.localization_mode == SolverMode::Planar2D)
                for (const auto& n : sc_.nodes)
                    if (!n.is_anchor && !n.has_altimeter)
                        warn("node " + std::to_string(n.id) +
                             " has no altimeter; it cannot localize in planar2d mode");
        }
    }

    Scenario sc_;
    ValidationResult res_;
};

}  // namespace detail

/// Full schema check, reporting every violation at once. Unknown keys are
/// errors; warnings do not block a run.
inline ValidationResult validate_scenario(const std::string& text) {
    return detail::ScenarioParser{}.parse(text);
}

/// A documented, self-validating sample scenario.
inline std::string example_scenario_text() {
    return R"({
  "schema_version": 1,
  "description": "Five hovering nodes: anchors 0-2 seed planar localization, node 3 localizes from the anchors (hop 1), node 4 from 1, 2 and 3 (hop 2; uwb max_range excludes anchor 0). Topic 'status' rides ranging frames, 'bulk' takes the mesh.",
  "duration": 30.0,
  "seed": 42,
  "world": {
    "obstacles": [],
    "interference_windows": []
  },
  "channel": {
    "wifi": { "reference_range": 50.0, "falloff_width": 5.0 },
    "uwb": { "sigma_los": 0.05, "nlos_bias_mean": 0.5, "max_range": 8.3 }
  },
  "protocol": {
    "ogm_interval": 1.0,
    "ranging_rate": 10.0,
    "localization_cadence": 1.0,
    "localization_mode": "planar2d",
    "metrics_rate": 10.0
  },
  "nodes": [
    { "id": 0, "waypoints": [ { "t": 0.0, "pos": [0.0, 0.0, 0.0] } ], "is_anchor": true, "is_gateway": true },
    { "id": 1, "waypoints": [ { "t": 0.0, "pos": [10.0, 0.0, 0.0] } ], "is_anchor": true },
    { "id": 2, "waypoints": [ { "t": 0.0, "pos": [0.0, 10.0, 0.0] } ], "is_anchor": true },
    { "id": 3, "waypoints": [ { "t": 0.0, "pos": [3.0, 4.0, 0.0] } ], "has_altimeter": true, "altimeter_sigma": 0.0 },
    { "id": 4, "waypoints": [ { "t": 0.0, "pos": [6.0, 6.0, 0.0] } ], "has_altimeter": true, "altimeter_sigma": 0.0 }
  ],
  "topics": [
    { "name": "status", "transport": "uwb_embedded", "rate_limit": 5.0, "burst": 2,
      "max_payload": 16, "publishers": [3], "subscribers": [4],
      "publish_hz": 2.0, "payload_bytes": 12 },
    { "name": "bulk", "transport": "mesh", "rate_limit": 0.0, "burst": 1,
      "max_payload": 512, "publishers": [0], "subscribers": [3, 4],
      "publish_hz": 1.0, "payload_bytes": 256 }
  ]
}
)";
}

}  // namespace meshloc
