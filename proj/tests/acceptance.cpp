// Acceptance suite: one criterion per entry, one PASS/FAIL line each,
// wall-clock budget enforced. Run all with no arguments or a single
// criterion by number. Exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "meshloc/meshloc.hpp"

using namespace meshloc;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& why) {
        if (!cond && ok) {
            ok = false;
            detail = why;
        }
    }
    void note(const std::string& msg) {
        if (detail.empty()) detail = msg;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string scenario_path(const char* name) {
    return std::string(MESHLOC_SCENARIOS_DIR) + "/" + name;
}

Scenario load_bundled(const char* name) {
    std::ifstream in(scenario_path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    auto res = validate_scenario(ss.str());
    if (!res.ok()) throw std::runtime_error("bundled scenario invalid: " + std::string(name));
    return *res.scenario;
}

// 1. Noiseless, drift-free end-to-end sessions report the true distance
//    within 1e-9 m at 1, 10 and 50 m.
Check criterion_exactness() {
    Check c;
    double worst = 0.0;
    for (double d : {1.0, 10.0, 50.0}) {
        auto sc = testutil::make_scenario({{0, {0, 0, 0}}, {1, {d, 0, 0}}}, 0.2, 17);
        sc.channel.uwb.sigma_los = 0.0;
        sc.protocol.localization_cadence = 0.0;
        sc.protocol.metrics_rate = 0.0;
        testutil::sharp_links(sc, 200.0);
        Simulator sim(sc);
        auto report = sim.run();
        c.require(report.ranging.successes > 0, "no completed session at d=" + fmt(d));
        auto got = sim.range_graph().smoothed_range(0, 1);
        c.require(got.has_value(), "no measurement at d=" + fmt(d));
        if (got) {
            double err = std::abs(*got - d);
            worst = std::max(worst, err);
            c.require(err <= 1e-9,
                      "error " + fmt(err) + " m > 1e-9 m at d=" + fmt(d));
        }
    }
    c.note("worst end-to-end error " + fmt(worst) + " m");
    return c;
}

// 2. Drift sweep as specified: clock-induced distance error <= 1 mm at every
//    grid point. The asymmetric DS-TWR estimator returns tof scaled by the
//    harmonic mean of the clock rates, so equal-sign drift pairs produce
//    d*|eA+eB|/2 of error -- 3.0 mm at the (+/-50 ppm, +/-50 ppm) corners at
//    60 m. That common-mode term is unobservable from the four durations, so
//    this criterion cannot pass as stated; it runs faithfully and reports
//    the true worst case.
Check criterion_drift_sweep() {
    Check c;
    const double turnarounds_ns[] = {0.1e6, 0.5e6, 1.0e6};
    double worst = 0.0;
    int worst_da = 0, worst_db = 0;
    for (int da = -50; da <= 50; da += 10)
        for (int db = -50; db <= 50; db += 10) {
            double ka = 1.0 + da * 1e-6, kb = 1.0 + db * 1e-6;
            for (double ta : turnarounds_ns)
                for (double tb : turnarounds_ns)
                    for (double d : {1.0, 30.0, 60.0}) {
                        double tof = d / kSpeedOfLightMetersPerNs;
                        RangingTimestamps ts{ka * (2 * tof + tb), kb * (2 * tof + ta),
                                             ka * ta, kb * tb};
                        double err = std::abs(ds_twr_tof(ts) - tof) * kSpeedOfLightMetersPerNs;
                        if (err > worst) {
                            worst = err;
                            worst_da = da;
                            worst_db = db;
                        }
                    }
        }
    c.require(worst <= 1e-3, "max clock-induced error " + fmt(worst) + " m > 1e-3 m (at drift " +
                                 std::to_string(worst_da) + "/" + std::to_string(worst_db) +
                                 " ppm, 60 m; estimator scale = harmonic mean of clock rates, "
                                 "common mode is unobservable)");
    c.note("max clock-induced error " + fmt(worst) + " m");
    return c;
}

Scenario five_node_geometry(double sigma, double duration, std::uint64_t seed) {
    auto sc = testutil::make_scenario({{0, {0, 0, 0}},
                                       {1, {10, 0, 0}},
                                       {2, {0, 10, 0}},
                                       {3, {3, 4, 0}},
                                       {4, {6, 6, 0}}},
                                      duration, seed);
    sc.channel.uwb.sigma_los = sigma;
    // 8.3 m keeps every needed pair in range but cuts node 4 off from
    // anchor 0 (8.49 m), forcing it to rely on node 3 (hop depth 2).
    sc.channel.uwb.max_range = 8.3;
    for (int i = 0; i < 3; ++i) sc.nodes[i].is_anchor = true;
    sc.nodes[3].has_altimeter = true;
    sc.nodes[4].has_altimeter = true;
    return sc;
}

// 3. Zero-noise localization of the bundled 5-node geometry: D and E within
//    1e-5 m at hop depths 1 and 2.
Check criterion_localization_consistency() {
    Check c;
    auto report = run(five_node_geometry(0.0, 10.0, 23));
    const auto& d = report.final_nodes.at(3);
    const auto& e = report.final_nodes.at(4);
    c.require(d.localized, "node D never localized");
    c.require(e.localized, "node E never localized");
    if (d.localized && e.localized) {
        c.require(d.error_m <= 1e-5, "D error " + fmt(d.error_m) + " m > 1e-5");
        c.require(e.error_m <= 1e-5, "E error " + fmt(e.error_m) + " m > 1e-5");
        c.require(d.hop_depth == 1, "D hop depth " + std::to_string(d.hop_depth) + " != 1");
        c.require(e.hop_depth == 2, "E hop depth " + std::to_string(e.hop_depth) + " != 2");
        c.note("D err " + fmt(d.error_m) + " m (hop 1), E err " + fmt(e.error_m) + " m (hop 2)");
    }
    return c;
}

// 4. Final-window RMSE shrinks with sigma and stays under 3*sigma + 1e-5,
//    averaged over 20 seeds per level.
Check criterion_noise_convergence() {
    Check c;
    const double sigmas[] = {0.10, 0.05, 0.01, 0.0};
    std::vector<double> means;
    for (double sigma : sigmas) {
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto report = run(five_node_geometry(sigma, 30.0, 1000 + seed));
            double rmse = report.rmse_last_quarter();
            c.require(!std::isnan(rmse), "no localization samples at sigma=" + fmt(sigma));
            if (!std::isnan(rmse)) sum += rmse;
        }
        means.push_back(sum / 20.0);
    }
    std::string series;
    for (std::size_t i = 0; i < means.size(); ++i) {
        c.require(means[i] < 3.0 * sigmas[i] + 1e-5,
                  "rmse " + fmt(means[i]) + " m >= 3*" + fmt(sigmas[i]) + " + 1e-5");
        if (i > 0)
            c.require(means[i] <= means[i - 1] + 1e-12,
                      "rmse not monotone: " + fmt(means[i - 1]) + " -> " + fmt(means[i]) +
                          " as sigma drops");
        series += (i ? ", " : "") + fmt(sigmas[i]) + "->" + fmt(means[i]);
    }
    c.note("mean rmse by sigma: " + series);
    return c;
}

// 5. On 50 random connected graphs with perfect links, every next hop lies
//    on a BFS minimum-hop path after 5 OGM intervals.
Check criterion_routing_oracle() {
    Check c;
    const double radius = 40.0;
    int checked = 0;
    for (int g = 0; g < 50 && c.ok; ++g) {
        int n = 3 + g % 6;  // 3..8 nodes
        auto nodes = testutil::random_connected_graph(9000 + g, n, 100.0, radius);
        auto sc = testutil::make_scenario(nodes, 5.5, 9000 + g);
        testutil::sharp_links(sc, radius);
        sc.protocol.ranging_rate = 0.0;
        sc.protocol.localization_cadence = 0.0;
        sc.protocol.metrics_rate = 0.0;
        Simulator sim(sc);
        sim.run();
        auto adj = testutil::geometric_adjacency(nodes, radius);
        for (const auto& [vid, vp] : nodes) {
            for (const auto& [oid, op] : nodes) {
                if (oid == vid) continue;
                auto oh = testutil::bfs_hops(adj, oid);
                auto nh = sim.node_state(vid).routes.next_hop(oid, 5.4);
                c.require(nh.has_value(), "graph " + std::to_string(g) + ": no route " +
                                              std::to_string(vid) + "->" + std::to_string(oid));
                if (nh)
                    c.require(oh.at(*nh) == oh.at(vid) - 1,
                              "graph " + std::to_string(g) + ": next hop off min-hop path " +
                                  std::to_string(vid) + "->" + std::to_string(oid));
                ++checked;
            }
        }
    }
    c.note(std::to_string(checked) + " (node, origin) pairs verified against BFS");
    return c;
}

// 6. 10-node random geometric graphs, perfect links: every node discovers
//    exactly its connected component within 3 OGM intervals.
Check criterion_discovery() {
    Check c;
    const double radius = 45.0;
    for (int g = 0; g < 15 && c.ok; ++g) {
        auto nodes = testutil::random_connected_graph(500 + g, 10, 120.0, radius);
        auto sc = testutil::make_scenario(nodes, 3.05, 500 + g);
        testutil::sharp_links(sc, radius);
        sc.protocol.ranging_rate = 0.0;
        sc.protocol.localization_cadence = 0.0;
        sc.protocol.metrics_rate = 0.0;
        Simulator sim(sc);
        sim.run();
        for (const auto& [id, p] : nodes) {
            std::set<NodeId> expect;
            for (const auto& [other, q] : nodes)
                if (other != id) expect.insert(other);
            c.require(sim.node_state(id).peers.discovered(3.0) == expect,
                      "graph " + std::to_string(g) + ": node " + std::to_string(id) +
                          " discovery incomplete after 3 intervals");
        }
    }
    c.note("15 graphs x 10 nodes converged");
    return c;
}

// 7. Fixed 2-hop route at per-link p = 0.5: measured PDR of 10,000 publishes
//    within 3 binomial standard deviations of 0.25.
Check criterion_delivery_ratio() {
    Check c;
    auto sc = testutil::make_scenario(
        {{0, {0, 0, 0}}, {1, {50, 0, 0}}, {2, {100, 0, 0}}}, 0.0, 4321);
    // Default link model: p = 0.5 at exactly the 50 m reference range.
    sc.protocol.ogm_interval = 0.0;
    sc.protocol.ranging_rate = 0.0;
    sc.protocol.localization_cadence = 0.0;
    sc.protocol.metrics_rate = 0.0;
    sc.protocol.route_expiry = 1e9;
    sc.protocol.peer_expiry = 1e9;
    Topic t;
    t.name = "load";
    t.topic_id = 0;
    t.transport = Transport::Mesh;
    t.max_payload = 64;
    t.publishers = {0};
    t.subscribers = {2};
    t.publish_hz = 0.0;
    sc.topics.push_back(t);

    Simulator sim(sc);
    sim.node_state(0).routes.set_route(2, 1, 200, 0.0);
    sim.node_state(1).routes.set_route(2, 2, 255, 0.0);
    auto& info = sim.node_state(0).announces[2];
    info.last_seen = 0.0;
    info.topics[0] = wire::kFlagSubscriber;

    const int n = 10000;
    for (int i = 0; i < n; ++i) sim.publish(0, 0, {0xAB}, i * 1e-3);
    auto report = sim.run();
    const auto& tc = report.topics.at("load");
    double pdr = static_cast<double>(tc.delivered) / static_cast<double>(tc.published);
    double band = 3.0 * std::sqrt(0.25 * 0.75 / n);
    c.require(tc.published == n, "published " + std::to_string(tc.published));
    c.require(std::abs(pdr - 0.25) <= band,
              "pdr " + fmt(pdr) + " outside 0.25 +/- " + fmt(band));
    c.note("pdr " + fmt(pdr) + " (target 0.25 +/- " + fmt(band) + ")");
    return c;
}

// 8. Token bucket: the hand-simulated example matches exactly and accepted
//    counts obey burst + rate*T over every sliding window.
Check criterion_throttle() {
    Check c;
    TokenBucket hand = TokenBucket::make(5.0, 1);
    bool a0 = throttle_check(hand, 0.0);
    bool a1 = throttle_check(hand, 0.1);
    bool a2 = throttle_check(hand, 0.2);
    bool a3 = throttle_check(hand, 0.3);
    c.require(a0 && !a1 && a2 && !a3, "hand-simulated pattern mismatch");

    const double rate = 5.0;
    TokenBucket b = TokenBucket::make(rate, 2);
    CounterRng rng(424242);
    std::vector<double> accepts;
    double t = 0.0;
    for (int i = 0; i < 5000; ++i) {
        t += rng.exponential(0.02);
        if (throttle_check(b, t)) accepts.push_back(t);
    }
    for (double T : {0.5, 1.0, 2.0}) {
        for (double start : accepts) {
            auto lo = std::lower_bound(accepts.begin(), accepts.end(), start);
            auto hi = std::upper_bound(accepts.begin(), accepts.end(), start + T);
            c.require(static_cast<double>(hi - lo) <= 2.0 + rate * T + 1e-9,
                      "window bound violated at T=" + fmt(T));
        }
    }
    c.note(std::to_string(accepts.size()) + " accepts, every window within 2 + 5T");
    return c;
}

// 9. Situated-communication locality: a UWB-embedded topic never reaches a
//    mesh-connected subscriber beyond UWB range, while a mesh topic does.
Check criterion_situated_locality() {
    Check c;
    auto sc = load_bundled("situated_comm.json");
    auto report = run(sc);
    const auto& far = report.topics.at("signal_far");
    const auto& near = report.topics.at("signal_near");
    const auto& bulk = report.topics.at("bulk");
    c.require(far.delivered == 0,
              "uwb topic reached the out-of-range subscriber " +
                  std::to_string(far.delivered) + " times");
    c.require(bulk.delivered >= 1, "mesh topic never delivered");
    c.require(near.delivered >= 1, "uwb topic never delivered even in range");
    c.require(far.instances == far.dropped + far.in_flight,
              "far-topic conservation broken");
    c.note("far uwb 0 of " + std::to_string(far.instances) + " instances, near uwb " +
           std::to_string(near.delivered) + ", mesh " + std::to_string(bulk.delivered));
    return c;
}

// 10. Bundled scenarios run twice with the same seed give byte-identical
//     metrics and summary.
Check criterion_determinism() {
    Check c;
    for (const char* name : {"example.json", "situated_comm.json", "nlos_interference.json"}) {
        auto sc = load_bundled(name);
        auto r1 = run(sc);
        auto r2 = run(sc);
        c.require(r1.to_csv() == r2.to_csv(), std::string(name) + ": metrics.csv differs");
        c.require(r1.summary_to_json().dump() == r2.summary_to_json().dump(),
                  std::string(name) + ": summary.json differs");
        c.require(!r1.series.empty(), std::string(name) + ": empty series");
    }
    c.note("3 bundled scenarios byte-stable");
    return c;
}

// 11. Analytic range jacobian vs central finite differences on 1,000 random
//     non-degenerate configurations, relative error <= 1e-6.
Check criterion_gradient() {
    Check c;
    CounterRng rng(31415);
    int tested = 0;
    double worst = 0.0;
    while (tested < 1000) {
        Position a{rng.uniform(0, 20), rng.uniform(0, 20), rng.uniform(0, 5)};
        Position x{rng.uniform(0, 20), rng.uniform(0, 20), rng.uniform(0, 5)};
        SolverMode mode = (tested % 2 == 0) ? SolverMode::Planar2D : SolverMode::Full3D;
        double sep = mode == SolverMode::Planar2D ? std::hypot(x.x - a.x, x.y - a.y)
                                                  : distance(x, a);
        if (sep < 0.5) continue;
        ++tested;
        auto row = range_jacobian_row(x, a, mode);
        const double h = 1e-6;
        int dims = mode == SolverMode::Planar2D ? 2 : 3;
        double err2 = 0.0;
        for (int k = 0; k < dims; ++k) {
            Position xp = x, xm = x;
            (k == 0 ? xp.x : k == 1 ? xp.y : xp.z) += h;
            (k == 0 ? xm.x : k == 1 ? xm.y : xm.z) -= h;
            double dp = mode == SolverMode::Planar2D ? std::hypot(xp.x - a.x, xp.y - a.y)
                                                     : distance(xp, a);
            double dm = mode == SolverMode::Planar2D ? std::hypot(xm.x - a.x, xm.y - a.y)
                                                     : distance(xm, a);
            double fd = (dp - dm) / (2.0 * h);
            err2 += (row[k] - fd) * (row[k] - fd);
        }
        worst = std::max(worst, std::sqrt(err2));  // rows are unit vectors
    }
    c.require(worst <= 1e-6, "relative error " + fmt(worst) + " > 1e-6");
    c.note("1000 configurations, worst relative error " + fmt(worst));
    return c;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Check()> fn;
    double budget_s;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "ds-twr end-to-end exactness", criterion_exactness, 1.0},
        {2, "ds-twr drift sweep (as specified)", criterion_drift_sweep, 5.0},
        {3, "localization consistency", criterion_localization_consistency, 1.0},
        {4, "noise convergence", criterion_noise_convergence, 30.0},
        {5, "routing min-hop oracle", criterion_routing_oracle, 10.0},
        {6, "discovery convergence", criterion_discovery, 10.0},
        {7, "2-hop delivery ratio", criterion_delivery_ratio, 10.0},
        {8, "throttle bound", criterion_throttle, 1.0},
        {9, "situated-communication locality", criterion_situated_locality, 5.0},
        {10, "determinism of bundled scenarios", criterion_determinism, 60.0},
        {11, "solver gradient check", criterion_gradient, 5.0},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    int failures = 0;
    for (const auto& cr : criteria()) {
        if (only != 0 && cr.id != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        Check result;
        try {
            result = cr.fn();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > cr.budget_s) {
            result.ok = false;
            result.detail += (result.detail.empty() ? "" : "; ") + std::string("over budget ") +
                             fmt(cr.budget_s) + " s";
        }
        std::printf("[%s] criterion %2d (%5.2f s): %s%s%s\n", result.ok ? "PASS" : "FAIL", cr.id,
                    elapsed, cr.name, result.detail.empty() ? "" : " -- ",
                    result.detail.c_str());
        if (!result.ok) ++failures;
    }
    return failures;
}
