#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "meshloc/bus.hpp"
#include "meshloc/types.hpp"

namespace meshloc {

enum class SeriesMetric { LocErrorM, Localized, Routes, RangingSuccess };

inline const char* series_metric_name(SeriesMetric m) {
    switch (m) {
        case SeriesMetric::LocErrorM: return "loc_error_m";
        case SeriesMetric::Localized: return "localized";
        case SeriesMetric::Routes: return "routes";
        case SeriesMetric::RangingSuccess: return "ranging_success";
    }
    return "?";
}

struct SeriesPoint {
    double t = 0.0;
    NodeId node = 0;
    SeriesMetric metric = SeriesMetric::LocErrorM;
    double value = 0.0;
};

struct RangingStats {
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
    double latency_sum = 0.0;  // seconds over successes
};

struct NodeFinal {
    bool localized = false;
    int hop_depth = 0;
    bool global_frame = false;
    double error_m = 0.0;  // meaningful only when localized
};

struct MetricsReport {
    double duration = 0.0;
    std::uint64_t seed = 0;
    std::vector<SeriesPoint> series;
    std::map<std::string, TopicCounters> topics;
    RangingStats ranging;
    std::map<NodeId, NodeFinal> final_nodes;

    /// RMSE of localization error over the last quarter of the run; NaN when
    /// no samples fall in the window (headline excludes the transient).
    double rmse_last_quarter() const {
        double cutoff = 0.75 * duration;
        double sum = 0.0;
        std::uint64_t n = 0;
        for (const auto& p : series) {
            if (p.metric != SeriesMetric::LocErrorM || p.t < cutoff) continue;
            sum += p.value * p.value;
            ++n;
        }
        if (n == 0) return std::numeric_limits<double>::quiet_NaN();
        return std::sqrt(sum / static_cast<double>(n));
    }

    std::string to_csv() const {
        std::string out = "time_s,node_id,metric,value\n";
        char buf[128];
        for (const auto& p : series) {
            std::snprintf(buf, sizeof(buf), "%.9g,%u,%s,%.9g\n", p.t, static_cast<unsigned>(p.node),
                          series_metric_name(p.metric), p.value);
            out += buf;
        }
        return out;
    }

    nlohmann::json series_to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& p : series)
            rows.push_back({p.t, p.node, series_metric_name(p.metric), p.value});
        return nlohmann::json{{"columns", {"time_s", "node_id", "metric", "value"}},
                              {"rows", rows}};
    }

    nlohmann::json summary_to_json() const {
        nlohmann::json topics_j = nlohmann::json::object();
        for (const auto& [name, c] : topics) {
            double pdr = c.published == 0
                             ? 0.0
                             : static_cast<double>(c.delivered) / static_cast<double>(c.published);
            topics_j[name] = {{"published", c.published}, {"accepted", c.accepted},
                              {"throttled", c.throttled}, {"oversize", c.oversize},
                              {"instances", c.instances}, {"delivered", c.delivered},
                              {"dropped", c.dropped},     {"in_flight", c.in_flight},
                              {"pdr", pdr}};
        }
        nlohmann::json nodes_j = nlohmann::json::object();
        for (const auto& [id, f] : final_nodes) {
            nlohmann::json nj = {{"localized", f.localized}};
            if (f.localized) {
                nj["hop_depth"] = f.hop_depth;
                nj["frame"] = f.global_frame ? "global" : "relative";
                nj["error_m"] = f.error_m;
            }
            nodes_j[std::to_string(id)] = nj;
        }
        double rmse = rmse_last_quarter();
        double mean_latency = ranging.successes == 0
                                  ? 0.0
                                  : ranging.latency_sum / static_cast<double>(ranging.successes);
        double ratio = ranging.attempts == 0 ? 0.0
                                             : static_cast<double>(ranging.successes) /
                                                   static_cast<double>(ranging.attempts);
        nlohmann::json j = {
            {"schema_version", 1},
            {"seed", seed},
            {"duration_s", duration},
            {"rmse_last_quarter_m", std::isnan(rmse) ? nlohmann::json() : nlohmann::json(rmse)},
            {"ranging",
             {{"attempts", ranging.attempts},
              {"successes", ranging.successes},
              {"success_ratio", ratio},
              {"mean_latency_s", mean_latency}}},
            {"topics", topics_j},
            {"nodes", nodes_j},
        };
        return j;
    }
};

}  // namespace meshloc
