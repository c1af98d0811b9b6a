#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "helpers.hpp"
#include "meshloc/bus.hpp"

using namespace meshloc;

TEST_CASE("throttle_check hand-simulated fractional refill") {
    TokenBucket b = TokenBucket::make(5.0, 1);
    CHECK(throttle_check(b, 0.0));
    CHECK_FALSE(throttle_check(b, 0.1));
    CHECK(throttle_check(b, 0.2));
    CHECK_FALSE(throttle_check(b, 0.3));
}

TEST_CASE("rate 0 disables throttling") {
    TokenBucket b = TokenBucket::make(0.0, 1);
    for (int i = 0; i < 100; ++i) CHECK(throttle_check(b, 0.0));
}

TEST_CASE("burst cap after idle") {
    TokenBucket b = TokenBucket::make(1.0, 3);
    CHECK(throttle_check(b, 0.0));
    CHECK(throttle_check(b, 0.0));
    CHECK(throttle_check(b, 0.0));
    CHECK_FALSE(throttle_check(b, 0.0));
    // Idle 10 s refills to the cap, not beyond.
    CHECK(throttle_check(b, 10.0));
    CHECK(throttle_check(b, 10.0));
    CHECK(throttle_check(b, 10.0));
    CHECK_FALSE(throttle_check(b, 10.0));
}

TEST_CASE("accepted count in every sliding window is bounded by burst + rate*T") {
    const double rate = 5.0, T_values[] = {0.3, 1.0, 2.5};
    TokenBucket b = TokenBucket::make(rate, 2);
    CounterRng rng(88);
    std::vector<double> times;
    double t = 0.0;
    for (int i = 0; i < 1000; ++i) {
        t += rng.exponential(0.01);
        times.push_back(t);
    }
    std::vector<double> accepts;
    for (double ti : times)
        if (throttle_check(b, ti)) accepts.push_back(ti);
    REQUIRE(!accepts.empty());
    for (double T : T_values) {
        for (double start : accepts) {
            auto lo = std::lower_bound(accepts.begin(), accepts.end(), start);
            auto hi = std::upper_bound(accepts.begin(), accepts.end(), start + T);
            CHECK(static_cast<double>(hi - lo) <= 2.0 + rate * T + 1e-9);
        }
    }
}

TEST_CASE("transport_select: auto by size, explicit wins") {
    Topic t;
    t.transport = Transport::Auto;
    t.max_payload = 512;
    CHECK(transport_select(t, 16) == Transport::UwbEmbedded);
    CHECK(transport_select(t, 200) == Transport::Mesh);
    t.transport = Transport::Mesh;
    CHECK(transport_select(t, 8) == Transport::Mesh);
    t.transport = Transport::UwbEmbedded;
    CHECK(transport_select(t, 8) == Transport::UwbEmbedded);
}

namespace {

Scenario three_node_line(double spacing, double radius) {
    auto sc = testutil::make_scenario(
        {{0, {0, 0, 0}}, {1, {spacing, 0, 0}}, {2, {2 * spacing, 0, 0}}}, 1.0, 21);
    testutil::sharp_links(sc, radius);
    sc.protocol.ogm_interval = 0.0;  // routes injected by hand below
    sc.protocol.ranging_rate = 0.0;
    sc.protocol.localization_cadence = 0.0;
    sc.protocol.metrics_rate = 0.0;
    return sc;
}

Topic mesh_topic(const std::string& name, std::vector<NodeId> pubs, std::vector<NodeId> subs) {
    Topic t;
    t.name = name;
    t.topic_id = 0;
    t.transport = Transport::Mesh;
    t.max_payload = 512;
    t.publishers = std::move(pubs);
    t.subscribers = std::move(subs);
    t.publish_hz = 0.0;
    return t;
}

void let_know_subscriber(Simulator& sim, NodeId at, NodeId sub, std::uint16_t topic_id) {
    auto& info = sim.node_state(at).announces[sub];
    info.last_seen = 0.0;
    info.topics[topic_id] = wire::kFlagSubscriber;
}

}  // namespace

TEST_CASE("mesh publish over a perfect 2-hop route delivers exactly once") {
    auto sc = three_node_line(50.0, 60.0);
    sc.topics.push_back(mesh_topic("bulk", {0}, {2}));
    Simulator sim(sc);
    sim.node_state(0).routes.set_route(2, 1, 200, 0.0);
    sim.node_state(1).routes.set_route(2, 2, 255, 0.0);
    let_know_subscriber(sim, 0, 2, 0);

    CHECK(sim.publish(0, 0, {1, 2, 3}, 0.0) == PublishResult::Accepted);
    auto report = sim.run();
    const auto& c = report.topics.at("bulk");
    CHECK(c.published == 1);
    CHECK(c.accepted == 1);
    CHECK(c.instances == 1);
    CHECK(c.delivered == 1);
    CHECK(c.dropped == 0);
    REQUIRE(sim.deliveries().size() == 1);
    CHECK(sim.deliveries()[0].subscriber == 2);
    CHECK(sim.deliveries()[0].payload == std::vector<std::uint8_t>{1, 2, 3});
}

TEST_CASE("two subscribers fan out as two independent unicasts") {
    auto sc = three_node_line(30.0, 60.0);
    sc.topics.push_back(mesh_topic("bulk", {0}, {1, 2}));
    Simulator sim(sc);
    sim.node_state(0).routes.set_route(1, 1, 255, 0.0);
    sim.node_state(0).routes.set_route(2, 1, 200, 0.0);
    sim.node_state(1).routes.set_route(2, 2, 255, 0.0);
    let_know_subscriber(sim, 0, 1, 0);
    let_know_subscriber(sim, 0, 2, 0);

    sim.publish(0, 0, {9}, 0.0);
    auto report = sim.run();
    CHECK(report.topics.at("bulk").instances == 2);
    CHECK(report.topics.at("bulk").delivered == 2);
}

TEST_CASE("publish before any announce reaches the publisher delivers nothing") {
    auto sc = three_node_line(30.0, 60.0);
    sc.topics.push_back(mesh_topic("bulk", {0}, {2}));
    Simulator sim(sc);
    sim.node_state(0).routes.set_route(2, 1, 200, 0.0);
    CHECK(sim.publish(0, 0, {7}, 0.0) == PublishResult::Accepted);
    auto report = sim.run();
    CHECK(report.topics.at("bulk").instances == 0);
    CHECK(report.topics.at("bulk").delivered == 0);
}

TEST_CASE("oversize payloads are rejected at publish") {
    auto sc = three_node_line(30.0, 60.0);
    auto t = mesh_topic("bulk", {0}, {2});
    t.max_payload = 4;
    sc.topics.clear();
    sc.topics.push_back(t);
    Simulator sim(sc);
    CHECK(sim.publish(0, 0, {1, 2, 3, 4, 5}, 0.0) == PublishResult::Oversize);
    auto report = sim.run();
    CHECK(report.topics.at("bulk").oversize == 1);
    CHECK(report.topics.at("bulk").accepted == 0);
}

TEST_CASE("no known route drops the instance at the publisher") {
    auto sc = three_node_line(30.0, 60.0);
    sc.topics.push_back(mesh_topic("bulk", {0}, {2}));
    Simulator sim(sc);
    let_know_subscriber(sim, 0, 2, 0);
    sim.publish(0, 0, {7}, 0.0);
    auto report = sim.run();
    CHECK(report.topics.at("bulk").instances == 1);
    CHECK(report.topics.at("bulk").dropped == 1);
    CHECK(report.topics.at("bulk").delivered == 0);
}

TEST_CASE("sim: subscription announces gate delivery, late publishes go through") {
    auto sc = testutil::make_scenario({{0, {0, 0, 0}}, {1, {3, 0, 0}}}, 2.5, 33);
    testutil::sharp_links(sc, 50.0);
    sc.protocol.ranging_rate = 0.0;
    sc.protocol.localization_cadence = 0.0;
    sc.protocol.metrics_rate = 0.0;
    Topic t = mesh_topic("bulk", {0}, {1});
    t.publish_hz = 1.0;  // publishes at t = 0, 1, 2
    sc.topics.push_back(t);

    Simulator sim(sc);
    auto report = sim.run();
    const auto& c = report.topics.at("bulk");
    // The t=0 publish precedes the first announce flood; the rest deliver.
    CHECK(c.published == 3);
    CHECK(c.accepted == 3);
    CHECK(c.instances == 2);
    CHECK(c.delivered == 2);
}

TEST_CASE("sim: a subscribe call takes effect after the next announce flood") {
    auto sc = testutil::make_scenario({{0, {0, 0, 0}}, {1, {3, 0, 0}}}, 2.5, 33);
    testutil::sharp_links(sc, 50.0);
    sc.protocol.ranging_rate = 0.0;
    sc.protocol.localization_cadence = 0.0;
    sc.protocol.metrics_rate = 0.0;
    Topic t = mesh_topic("bulk", {0}, {});  // no subscribers in the scenario
    t.publish_hz = 1.0;
    sc.topics.push_back(t);

    Simulator sim(sc);
    auto handle = sim.subscribe(1, 0);
    CHECK(handle.node == 1);
    CHECK(handle.topic_id == 0);
    auto report = sim.run();
    // The t=0 publish precedes the announce; publishes at 1 s and 2 s land.
    CHECK(report.topics.at("bulk").delivered == 2);
    for (const auto& d : sim.deliveries()) CHECK(d.subscriber == 1);

    CHECK_THROWS_AS(sim.subscribe(1, 99), std::out_of_range);
    CHECK_THROWS_AS(sim.subscribe(77, 0), std::out_of_range);
}

TEST_CASE("sim: counters conserve across a lossy run") {
    auto sc = testutil::make_scenario(
        {{0, {0, 0, 0}}, {1, {50, 0, 0}}, {2, {100, 0, 0}}}, 10.0, 4242);
    // Default logistic link: p = 0.5 per 50 m hop.
    Topic bulk = mesh_topic("bulk", {0}, {2});
    bulk.rate_limit = 2.0;
    bulk.burst = 1;
    bulk.publish_hz = 20.0;
    Topic sig;
    sig.name = "sig";
    sig.topic_id = 1;
    sig.transport = Transport::UwbEmbedded;
    sig.publishers = {0};
    sig.subscribers = {1};
    sig.publish_hz = 15.0;
    sig.payload_bytes = 8;
    sc.topics = {bulk, sig};

    Simulator sim(sc);
    auto report = sim.run();
    for (const auto& [name, c] : report.topics) {
        INFO(name);
        CHECK(c.published == c.accepted + c.throttled + c.oversize);
        CHECK(c.instances == c.delivered + c.dropped + c.in_flight);
    }
    CHECK(report.topics.at("bulk").throttled > 0);
    CHECK(report.topics.at("bulk").delivered > 0);
    CHECK(report.topics.at("sig").delivered > 0);

    // No duplication: each (publisher, topic, seqno, subscriber) at most once.
    std::set<std::tuple<NodeId, std::uint16_t, std::uint32_t, NodeId>> seen;
    for (const auto& d : sim.deliveries())
        CHECK(seen.insert({d.publisher, d.topic_id, d.seqno, d.subscriber}).second);
}
