#include "test_helpers.hpp"

#include "cxp/engine.hpp"

#include <doctest.h>

#include <random>

using namespace cxp;
using namespace cxp::testing;

TEST_SUITE_BEGIN("engine");

TEST_CASE("try_embed: empty graph rejects") {
    Multigraph g = make_graph(2, {});
    EmbeddingEngine engine(g, EngineConfig{});
    Request r = make_request(1, 2, 1.0, 100.0);
    CHECK(!engine.try_embed(r));
    CHECK(engine.reservations().empty());
}

TEST_CASE("try_embed: unitary capacity blocks the second request") {
    Multigraph g = make_graph(2, {{1, 2, 1.0, 5.0}});
    EmbeddingEngine engine(g, EngineConfig{});
    Request r1 = make_request(1, 2, 1.0, 100.0);
    Request r2 = make_request(1, 2, 1.0, 100.0);
    r2.id = 8;
    CHECK(engine.try_embed(r1));
    CHECK(engine.graph().edge_at(0).residual_bandwidth == doctest::Approx(0.0));
    CHECK(!engine.try_embed(r2));
    CHECK(engine.reservations().size() == 1);
}

TEST_CASE("try_embed: rejection leaves the graph bit-identical") {
    Multigraph g = make_graph(3, {{1, 2, 1.0, 5.0}, {2, 3, 1.0, 60.0}});
    EmbeddingEngine engine(g, EngineConfig{});
    Request r = make_request(1, 3, 1.0, 30.0); // 65 > 30, infeasible
    std::vector<double> before;
    for (const PathletEdge& e : engine.graph().edges())
        before.push_back(e.residual_bandwidth);
    CHECK(!engine.try_embed(r));
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(engine.graph().edge_at(i).residual_bandwidth == before[i]);
}

TEST_CASE("utilization: empty, partial, full, and the error case") {
    Multigraph g = make_graph(3, {{1, 2, 2.0, 5.0}, {2, 3, 2.0, 5.0}});
    CHECK(utilization(g) == doctest::Approx(0.0));
    g.reserve_bandwidth(0, 1.0);
    CHECK(utilization(g) == doctest::Approx(0.25)); // 1 of 4 units
    g.reserve_bandwidth(0, 1.0);
    g.reserve_bandwidth(1, 2.0);
    CHECK(utilization(g) == doctest::Approx(1.0));
    Multigraph empty = make_graph(2, {});
    CHECK_THROWS_AS(utilization(empty), GraphError);
}

TEST_CASE("run_online: zero requests reported by convention") {
    Multigraph g = make_graph(2, {{1, 2, 1.0, 5.0}});
    RunMetrics m = run_online(g, {}, EngineConfig{});
    CHECK(m.acceptance_ratio == doctest::Approx(1.0));
    CHECK(m.zero_denominator);
    CHECK(m.accepted == 0);
}

TEST_CASE("run_online: disjointly fitting stream fills exactly") {
    // Two unit edges; two requests, one per edge.
    Multigraph g = make_graph(4, {{1, 2, 1.0, 5.0}, {3, 4, 1.0, 5.0}});
    std::vector<Request> reqs;
    Request a = make_request(1, 2, 1.0, 100.0);
    a.id = 0;
    Request b = make_request(3, 4, 1.0, 100.0);
    b.id = 1;
    reqs.push_back(a);
    reqs.push_back(b);
    RunMetrics m = run_online(g, reqs, EngineConfig{});
    CHECK(m.accepted == 2);
    CHECK(m.acceptance_ratio == doctest::Approx(1.0));
    CHECK(m.utilization == doctest::Approx(1.0));
    CHECK(m.request_times_us.size() == 2);
}

TEST_CASE("run_online: acceptance sequence identical across reruns") {
    std::mt19937_64 rng(131);
    Multigraph g = random_multigraph(rng, 8, 0.4, 3, 2.0, 20.0);

    std::vector<Request> reqs;
    for (int i = 0; i < 100; ++i) {
        std::uniform_int_distribution<NodeId> node(1, 8);
        NodeId s = node(rng), t = node(rng);
        Request r;
        r.id = static_cast<RequestId>(i);
        r.src_access = {AccessPoint{s, 1.0}};
        r.dst_access = {AccessPoint{t, 1.0}};
        r.min_bandwidth = 1.0;
        std::uniform_real_distribution<double> bound(10.0, 60.0);
        r.max_latency_ms = bound(rng);
        reqs.push_back(r);
    }

    for (SampleAlgo algo : {SampleAlgo::PerturbedDijkstra, SampleAlgo::GuidedDijkstra,
                            SampleAlgo::GuidedWalk}) {
        EngineConfig cfg;
        cfg.algo = algo;
        cfg.k = 5;
        cfg.seed = 1234;

        Multigraph g1 = g;
        Multigraph g2 = g;
        EmbeddingEngine e1(std::move(g1), cfg);
        EmbeddingEngine e2(std::move(g2), cfg);
        for (const Request& r : reqs)
            CHECK(e1.try_embed(r) == e2.try_embed(r));
        CHECK(e1.current_utilization() == doctest::Approx(e2.current_utilization()));
    }
}

TEST_CASE("capacity safety under load") {
    std::mt19937_64 rng(137);
    for (int trial = 0; trial < 10; ++trial) {
        Multigraph g = random_multigraph(rng, 7, 0.5, 3, 2.0, 20.0);
        EngineConfig cfg;
        cfg.algo = SampleAlgo::GuidedWalk;
        cfg.k = 4;
        cfg.seed = trial;
        EmbeddingEngine engine(std::move(g), cfg);
        std::uniform_int_distribution<NodeId> node(1, 7);
        for (int i = 0; i < 60; ++i) {
            Request r;
            r.id = static_cast<RequestId>(i);
            r.src_access = {AccessPoint{node(rng), 1.0}};
            r.dst_access = {AccessPoint{node(rng), 1.0}};
            r.min_bandwidth = 1.0;
            r.max_latency_ms = 50.0;
            engine.try_embed(r);
            for (const PathletEdge& e : engine.graph().edges()) {
                CHECK(e.residual_bandwidth >= 0.0);
                CHECK(e.residual_bandwidth <= e.bandwidth);
            }
        }
    }
}

TEST_CASE("swap_reservations moves load atomically") {
    Multigraph g = make_graph(4, {{1, 2, 1.0, 5.0}, {2, 4, 1.0, 5.0},
                                  {1, 3, 1.0, 9.0}, {3, 4, 1.0, 9.0}});
    EmbeddingEngine engine(g, EngineConfig{});
    Request r = make_request(1, 4, 1.0, 100.0);
    REQUIRE(engine.try_embed(r));
    REQUIRE(engine.reservations().size() == 1);
    CHECK(engine.reservations()[0].path.edge_ids == std::vector<EdgeId>{0, 1});

    // Move the embedding to the other route.
    Path alt;
    alt.edge_ids = {2, 3};
    alt.total_latency_ms = 18.0;
    alt.hop_count = 2;
    alt.access_src = r.src_access[0];
    alt.access_dst = r.dst_access[0];
    std::vector<std::size_t> remove{0};
    engine.swap_reservations(remove, {Reservation{r, alt, 1.0}});

    CHECK(engine.graph().edge_at(0).residual_bandwidth == doctest::Approx(1.0));
    CHECK(engine.graph().edge_at(2).residual_bandwidth == doctest::Approx(0.0));
    REQUIRE(engine.reservations().size() == 1);
    CHECK(engine.reservations()[0].path.edge_ids == alt.edge_ids);
}

TEST_SUITE_END();
