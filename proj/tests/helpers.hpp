#pragma once

// Shared scaffolding for the test suites: scenario assembly shortcuts and
// independent graph oracles (BFS hop counts, connectivity).

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "meshloc/meshloc.hpp"

namespace testutil {

using namespace meshloc;

inline NodeConfig static_node(NodeId id, Position p) {
    NodeConfig n;
    n.id = id;
    n.trajectory.waypoints = {{0.0, p}};
    return n;
}

/// Baseline scenario: static nodes, defaults everywhere, no topics.
inline Scenario make_scenario(const std::vector<std::pair<NodeId, Position>>& nodes,
                              double duration, std::uint64_t seed) {
    Scenario sc;
    sc.duration = duration;
    sc.seed = seed;
    for (const auto& [id, p] : nodes) sc.nodes.push_back(static_node(id, p));
    return sc;
}

/// Near-deterministic links: a tiny falloff width turns the logistic into a
/// step at the reference range.
inline void sharp_links(Scenario& sc, double radius) {
    sc.channel.wifi.reference_range = radius;
    sc.channel.wifi.falloff_width = 1e-9;
}

/// BFS hop counts from src over an explicit adjacency; unreachable nodes are
/// absent from the result.
inline std::map<NodeId, int> bfs_hops(const std::map<NodeId, std::set<NodeId>>& adj, NodeId src) {
    std::map<NodeId, int> dist;
    dist[src] = 0;
    std::queue<NodeId> q;
    q.push(src);
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        auto it = adj.find(u);
        if (it == adj.end()) continue;
        for (NodeId v : it->second)
            if (!dist.count(v)) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

/// Geometric adjacency: edge iff distance < radius (strict).
inline std::map<NodeId, std::set<NodeId>> geometric_adjacency(
    const std::vector<std::pair<NodeId, Position>>& nodes, double radius) {
    std::map<NodeId, std::set<NodeId>> adj;
    for (const auto& [id, p] : nodes) adj[id];
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (distance(nodes[i].second, nodes[j].second) < radius) {
                adj[nodes[i].first].insert(nodes[j].first);
                adj[nodes[j].first].insert(nodes[i].first);
            }
    return adj;
}

inline bool is_connected(const std::map<NodeId, std::set<NodeId>>& adj) {
    if (adj.empty()) return true;
    auto hops = bfs_hops(adj, adj.begin()->first);
    return hops.size() == adj.size();
}

/// Random connected geometric graph with no node pair too close to the
/// radius threshold (keeps the step-link model unambiguous).
inline std::vector<std::pair<NodeId, Position>> random_connected_graph(std::uint64_t seed, int n,
                                                                       double box, double radius) {
    CounterRng rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::pair<NodeId, Position>> nodes;
        for (int i = 0; i < n; ++i)
            nodes.push_back({static_cast<NodeId>(i),
                             Position{rng.uniform(0.0, box), rng.uniform(0.0, box), 0.0}});
        bool ambiguous = false;
        for (std::size_t i = 0; i < nodes.size() && !ambiguous; ++i)
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                double d = distance(nodes[i].second, nodes[j].second);
                if (std::abs(d - radius) < 1e-3) {
                    ambiguous = true;
                    break;
                }
            }
        if (ambiguous) continue;
        if (is_connected(geometric_adjacency(nodes, radius))) return nodes;
    }
    throw std::runtime_error("random_connected_graph: no connected layout found");
}

}  // namespace testutil
