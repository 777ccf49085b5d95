#include "test_helpers.hpp"

#include "cxp/rng.hpp"
#include "cxp/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace cxp;
using namespace cxp::testing;

namespace {

Request random_request(std::mt19937_64& rng, std::size_t n_nodes) {
    std::uniform_int_distribution<NodeId> node(1, static_cast<NodeId>(n_nodes));
    std::uniform_real_distribution<double> lat_bound(5.0, 120.0);
    std::uniform_real_distribution<double> access(0.5, 5.0);
    std::uniform_int_distribution<int> bw(1, 3);
    Request r;
    r.id = rng();
    NodeId s = node(rng);
    NodeId t = node(rng);
    r.src_access = {AccessPoint{s, access(rng)}};
    r.dst_access = {AccessPoint{t, access(rng)}};
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.3) {
        NodeId s2 = node(rng);
        if (s2 != s)
            r.src_access.push_back(AccessPoint{s2, access(rng)});
    }
    r.min_bandwidth = static_cast<double>(bw(rng));
    r.max_latency_ms = lat_bound(rng);
    return r;
}

double oracle_min_latency(const Multigraph& g, const Request& r) {
    double best = std::numeric_limits<double>::infinity();
    for (const OraclePath& p : oracle_feasible_paths(g, r))
        best = std::min(best, p.total_latency);
    return best;
}

} // namespace

TEST_SUITE_BEGIN("sampling");

TEST_CASE("feasibility: single adequate edge") {
    Multigraph g = make_graph(2, {{1, 2, 2.0, 10.0}});
    Request r = make_request(1, 2, 1.0, 20.0, 1.0, 2.0);
    auto p = exists_feasible_path(g, r);
    REQUIRE(p.has_value());
    CHECK(p->edge_ids == std::vector<EdgeId>{0});
    CHECK(p->total_latency_ms == doctest::Approx(13.0));
    CHECK(p->hop_count == 1);
}

TEST_CASE("feasibility: exact latency boundary is feasible") {
    Multigraph g = make_graph(2, {{1, 2, 2.0, 10.0}});
    Request r = make_request(1, 2, 1.0, 13.0, 1.0, 2.0);
    auto p = exists_feasible_path(g, r);
    REQUIRE(p.has_value());
    CHECK(p->total_latency_ms == doctest::Approx(13.0));
    r.max_latency_ms = 12.999;
    CHECK(!exists_feasible_path(g, r).has_value());
}

TEST_CASE("feasibility: zero-hop path through a shared access IXP") {
    Multigraph g = make_graph(2, {{1, 2, 1.0, 500.0}});
    Request r;
    r.id = 1;
    r.src_access = {AccessPoint{1, 5.0}};
    r.dst_access = {AccessPoint{1, 6.0}};
    r.min_bandwidth = 1.0;
    r.max_latency_ms = 12.0;
    auto p = exists_feasible_path(g, r);
    REQUIRE(p.has_value());
    CHECK(p->edge_ids.empty());
    CHECK(p->total_latency_ms == doctest::Approx(11.0));
}

TEST_CASE("feasibility: verdict equals exhaustive enumeration on 200 random instances") {
    std::mt19937_64 rng(101);
    int feasible_count = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Multigraph g = random_multigraph(rng, 8, 0.35, 4);
        Request r = random_request(rng, 8);
        bool expect = oracle_feasible(g, r);
        auto got = exists_feasible_path(g, r);
        CHECK(got.has_value() == expect);
        if (got) {
            ++feasible_count;
            std::string why;
            check_path_valid(g, r, *got, &why);
            CHECK(why.empty());
        }
    }
    CHECK(feasible_count > 40); // the sweep must exercise both verdicts
    CHECK(feasible_count < 160);
}

TEST_CASE("feasibility: multi-access verdict is the OR over endpoint pairs") {
    std::mt19937_64 rng(173);
    for (int trial = 0; trial < 60; ++trial) {
        Multigraph g = random_multigraph(rng, 7, 0.35, 3);
        Request r = random_request(rng, 7);
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5 &&
            r.dst_access[0].ixp != 7)
            r.dst_access.push_back(AccessPoint{7, 1.5});

        bool any_pair = false;
        for (const AccessPoint& s : r.src_access) {
            for (const AccessPoint& d : r.dst_access) {
                Request sub = r;
                sub.src_access = {s};
                sub.dst_access = {d};
                any_pair = any_pair || exists_feasible_path(g, sub).has_value();
            }
        }
        CHECK(exists_feasible_path(g, r).has_value() == any_pair);
    }
}

TEST_CASE("pd: one feasible route, k=3, yields exactly one path") {
    Multigraph g = make_graph(3, {{1, 2, 2.0, 5.0}, {2, 3, 2.0, 5.0}});
    Request r = make_request(1, 3, 1.0, 50.0);
    auto paths = sample_pd(g, r, 3);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].edge_ids == std::vector<EdgeId>{0, 1});
}

TEST_CASE("pd: diamond returns both disjoint routes, shortest first") {
    Multigraph g = make_graph(4, {{1, 2, 1.0, 5.0}, {2, 4, 1.0, 5.0},
                                  {1, 3, 1.0, 7.0}, {3, 4, 1.0, 7.0}});
    Request r = make_request(1, 4, 1.0, 100.0);
    auto paths = sample_pd(g, r, 2);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].total_latency_ms == doctest::Approx(10.0));
    CHECK(paths[1].total_latency_ms == doctest::Approx(14.0));
    std::set<EdgeId> first(paths[0].edge_ids.begin(), paths[0].edge_ids.end());
    for (EdgeId e : paths[1].edge_ids)
        CHECK(first.count(e) == 0);
}

TEST_CASE("pd: first path is the brute-force latency minimum") {
    std::mt19937_64 rng(103);
    int informative = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Multigraph g = random_multigraph(rng, 7, 0.4, 3);
        Request r = random_request(rng, 7);
        auto paths = sample_pd(g, r, 4);
        double expect = oracle_min_latency(g, r);
        if (paths.empty()) {
            CHECK(std::isinf(expect));
        } else {
            ++informative;
            CHECK(paths[0].total_latency_ms == doctest::Approx(expect));
        }
    }
    CHECK(informative > 20);
}

TEST_CASE("pd: outputs pairwise edge-disjoint, sound, complete") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 100; ++trial) {
        Multigraph g = random_multigraph(rng, 7, 0.45, 3);
        Request r = random_request(rng, 7);
        auto paths = sample_pd(g, r, 5);
        CHECK(paths.empty() == !oracle_feasible(g, r));
        std::set<EdgeId> used;
        for (const Path& p : paths) {
            std::string why;
            check_path_valid(g, r, p, &why);
            CHECK(why.empty());
            for (EdgeId e : p.edge_ids) {
                CHECK(used.count(e) == 0);
                used.insert(e);
            }
        }
    }
}

TEST_CASE("gw: single-route graph always returns that route") {
    Multigraph g = make_graph(3, {{1, 2, 2.0, 5.0}, {2, 3, 2.0, 5.0}});
    Request r = make_request(1, 3, 1.0, 50.0, 1.0, 1.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        std::mt19937_64 rng = rng_for(s, 0);
        auto paths = sample_gw(g, r, 1, rng);
        REQUIRE(paths.size() == 1);
        CHECK(paths[0].edge_ids == std::vector<EdgeId>{0, 1});
    }
}

TEST_CASE("gw: sampled paths are feasible and loop-free over random sweeps") {
    std::mt19937_64 rng(109);
    std::size_t produced = 0;
    for (int trial = 0; trial < 150; ++trial) {
        Multigraph g = random_multigraph(rng, 8, 0.45, 3);
        Request r = random_request(rng, 8);
        std::mt19937_64 walk_rng = rng_for(1000 + trial, 1);
        auto paths = sample_gw(g, r, 6, walk_rng);
        CHECK(paths.empty() == !oracle_feasible(g, r));
        for (const Path& p : paths) {
            ++produced;
            std::string why;
            check_path_valid(g, r, p, &why);
            CHECK(why.empty());
            CHECK(p.hop_count <= static_cast<int>(g.node_count()));
        }
    }
    CHECK(produced > 200);
}

TEST_CASE("gw: symmetric disjoint routes sampled near-uniformly") {
    Multigraph g = make_graph(4, {{1, 2, 1.0, 5.0}, {2, 4, 1.0, 5.0},
                                  {1, 3, 1.0, 5.0}, {3, 4, 1.0, 5.0}});
    Request r = make_request(1, 4, 1.0, 100.0, 1.0, 1.0);
    const int n = 4000;
    int via_node2 = 0;
    for (int i = 0; i < n; ++i) {
        std::mt19937_64 rng = rng_for(5000, static_cast<std::uint64_t>(i));
        auto paths = sample_gw(g, r, 1, rng);
        REQUIRE(paths.size() == 1);
        via_node2 += paths[0].edge_ids[0] == 0;
    }
    double phat = static_cast<double>(via_node2) / n;
    double sigma = std::sqrt(0.25 / n);
    CHECK(std::abs(phat - 0.5) <= 3.0 * sigma);
}

TEST_CASE("gd: single-route graph returns that route") {
    Multigraph g = make_graph(3, {{1, 2, 2.0, 5.0}, {2, 3, 2.0, 5.0}});
    Request r = make_request(1, 3, 1.0, 50.0, 1.0, 1.0);
    std::mt19937_64 rng = rng_for(1, 0);
    auto paths = sample_gd(g, r, 2, rng);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].edge_ids == std::vector<EdgeId>{0, 1});
}

TEST_CASE("gd: feasible on random sweeps, complete") {
    std::mt19937_64 rng(113);
    std::size_t produced = 0;
    for (int trial = 0; trial < 150; ++trial) {
        Multigraph g = random_multigraph(rng, 8, 0.45, 3);
        Request r = random_request(rng, 8);
        std::mt19937_64 gd_rng = rng_for(2000 + trial, 2);
        auto paths = sample_gd(g, r, 6, gd_rng);
        CHECK(paths.empty() == !oracle_feasible(g, r));
        for (const Path& p : paths) {
            ++produced;
            std::string why;
            check_path_valid(g, r, p, &why);
            CHECK(why.empty());
        }
    }
    CHECK(produced > 100);
}

TEST_CASE("gd: degenerates to the deterministic shortest path without parallels") {
    std::mt19937_64 rng(127);
    for (int trial = 0; trial < 40; ++trial) {
        Multigraph g = random_multigraph(rng, 7, 0.5, 1);
        Request r = random_request(rng, 7);
        auto expect = exists_feasible_path(g, r);
        std::mt19937_64 gd_rng = rng_for(3000 + trial, 3);
        auto paths = sample_gd(g, r, 1, gd_rng);
        REQUIRE(paths.empty() == !expect.has_value());
        if (expect) {
            CHECK(paths[0].total_latency_ms == doctest::Approx(expect->total_latency_ms));
        }
    }
}

TEST_CASE("inverse utility: sole edge scores 1") {
    Multigraph g = make_graph(2, {{1, 2, 5.0, 10.0}});
    CHECK(inverse_utility(g, 0) == doctest::Approx(1.0));
}

TEST_CASE("inverse utility: hand-evaluated parallel pair") {
    Multigraph g = make_graph(2, {{1, 2, 10.0, 20.0}, {1, 2, 5.0, 40.0}});
    CHECK(inverse_utility(g, 0) == doctest::Approx(2.0));
    CHECK(inverse_utility(g, 1) == doctest::Approx(0.5));
}

TEST_CASE("inverse utility: invariant under latency scaling") {
    Multigraph g1 = make_graph(2, {{1, 2, 10.0, 20.0}, {1, 2, 5.0, 40.0}, {1, 2, 2.0, 15.0}});
    Multigraph g2 = make_graph(2, {{1, 2, 10.0, 60.0}, {1, 2, 5.0, 120.0}, {1, 2, 2.0, 45.0}});
    for (EdgeId e = 0; e < 3; ++e)
        CHECK(inverse_utility(g1, e) == doctest::Approx(inverse_utility(g2, e)));
}

TEST_CASE("inverse utility: zero latency is an error") {
    Multigraph g = make_graph(2, {{1, 2, 1.0, 0.0}});
    CHECK_THROWS_AS(inverse_utility(g, 0), GraphError);
}

TEST_CASE("select: fewer hops beat better inverse utility") {
    Multigraph g = make_graph(4, {{1, 4, 1.0, 50.0},                  // 1 hop, scarce
                                  {1, 2, 1.0, 5.0}, {2, 3, 1.0, 5.0}, // cheap detour
                                  {3, 4, 1.0, 5.0}});
    Request r = make_request(1, 4, 1.0, 100.0);
    auto paths = sample_pd(g, r, 3);
    REQUIRE(paths.size() == 2);
    const Path& best = select_best(paths, g);
    CHECK(best.hop_count == 1);
}

TEST_CASE("select: equal hops resolved by summed inverse utility") {
    // Two 2-hop routes; route A uses scarce low-latency edges from rich
    // parallel sets, route B is the only provider on its pair.
    Multigraph g = make_graph(4, {{1, 2, 4.0, 5.0},  {1, 2, 1.0, 20.0}, {2, 4, 4.0, 5.0},
                                  {2, 4, 1.0, 20.0}, {1, 3, 1.0, 9.0},  {3, 4, 1.0, 9.0}});
    Request r = make_request(1, 4, 1.0, 100.0);
    auto paths = sample_pd(g, r, 2);
    REQUIRE(paths.size() == 2);
    // Route A InvU: ((4/1)*(20/5))/2 = 8 per edge -> 16; route B: 1+1 = 2.
    const Path& best = select_best(paths, g);
    CHECK(best.edge_ids == std::vector<EdgeId>{4, 5});
}

TEST_CASE("select: single candidate and empty input") {
    Multigraph g = make_graph(2, {{1, 2, 1.0, 5.0}});
    Request r = make_request(1, 2, 1.0, 50.0);
    auto paths = sample_pd(g, r, 1);
    REQUIRE(paths.size() == 1);
    CHECK(&select_best(paths, g) == &paths[0]);
    CHECK_THROWS_AS(select_best({}, g), GraphError);
}

TEST_SUITE_END();
