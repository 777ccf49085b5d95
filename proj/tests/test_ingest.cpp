#include "test_helpers.hpp"

#include "cxp/ingest.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

using namespace cxp;

TEST_SUITE_BEGIN("ingest");

TEST_CASE("membership: direct read") {
    std::istringstream in("1,65001\n1,65002\n2,65001\n");
    MembershipTable t = parse_membership(in);
    CHECK(t.rows.size() == 3);
    CHECK(t.members_by_ixp().size() == 2);
    CHECK(t.ixps_by_as().size() == 2);
}

TEST_CASE("membership: duplicates collapse") {
    std::istringstream in("1,65001\n1,65001\n");
    MembershipTable t = parse_membership(in);
    CHECK(t.rows.size() == 1);
}

TEST_CASE("membership: comments, CRLF, and a malformed line") {
    std::ostringstream data;
    data << "# comment\r\n";
    for (int i = 0; i < 99; ++i)
        data << (i % 3 + 1) << ',' << (65000 + i) << "\r\n";
    data << "oops,not-a-number\n";
    std::istringstream in(data.str());
    ParseReport report;
    MembershipTable t = parse_membership(in, &report);
    CHECK(t.rows.size() == 99);
    CHECK(report.parsed_lines == 100);
    CHECK(report.malformed_lines == 1);
    REQUIRE(report.issues.size() == 1);
}

TEST_CASE("membership: >10% malformed is a hard failure") {
    std::istringstream in("1,65001\nbad\nworse\n");
    CHECK_THROWS_AS(parse_membership(in), ParseError);
}

TEST_CASE("parsers are total on arbitrary bytes") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int trial = 0; trial < 50; ++trial) {
        std::string garbage;
        for (int i = 0; i < 200; ++i)
            garbage.push_back(static_cast<char>(byte(rng)));
        std::istringstream m(garbage), a(garbage), p(garbage), l(garbage);
        CHECK_NOTHROW([&] {
            try {
                parse_membership(m);
            } catch (const ParseError&) {
            }
            try {
                parse_as_relationships(a);
            } catch (const ParseError&) {
            }
            try {
                parse_prefix_counts(p);
            } catch (const ParseError&) {
            }
            try {
                parse_locations(l);
            } catch (const ParseError&) {
            }
        }());
    }
}

TEST_CASE("as_rel: provider and peer lines") {
    std::istringstream in("65001|65002|-1\n65001|65003|0\n");
    AsRelGraph g = parse_as_relationships(in);
    REQUIRE(g.links().size() == 2);
    CHECK(g.links()[0].kind == RelKind::ProviderToCustomer);
    CHECK(g.links()[0].a == 65001);
    CHECK(g.links()[0].b == 65002);
    CHECK(g.links()[1].kind == RelKind::PeerToPeer);
    CHECK(g.customers_of(65001) == std::vector<Asn>{65002});
}

TEST_CASE("as_rel: mixed fixture counts match hand count") {
    std::istringstream in("# CAIDA-style fixture\n"
                          "1|2|-1\n"
                          "1|3|-1\n"
                          "2|3|0\n"
                          "4|1|-1\n"
                          "4|5|0\n"
                          "5|6|-1\n"
                          "2|6|0\n"
                          "3|6|-1\n"
                          "7|3|-1\n"
                          "7|8|0\n");
    AsRelGraph g = parse_as_relationships(in);
    std::size_t p2c = 0, p2p = 0;
    for (const AsLink& l : g.links())
        (l.kind == RelKind::ProviderToCustomer ? p2c : p2p)++;
    CHECK(p2c == 6);
    CHECK(p2p == 4);
}

TEST_CASE("as_rel: conflicting relationship flagged") {
    std::ostringstream data;
    data << "1|2|-1\n1|2|0\n";
    for (int i = 0; i < 20; ++i)
        data << (100 + i) << '|' << (200 + i) << "|0\n";
    std::istringstream in(data.str());
    ParseReport report;
    AsRelGraph g = parse_as_relationships(in, &report);
    CHECK(report.malformed_lines == 1);
    CHECK(g.relationship(1, 2) == RelKind::ProviderToCustomer);
}

TEST_CASE("ixp multigraph: AS at two IXPs yields both directions") {
    MembershipTable m;
    m.rows = {{1, 65001}, {2, 65001}};
    PrefixCounts counts{{65001, 100}};
    Multigraph g = build_ixp_multigraph(m, {}, counts);
    CHECK(g.node_count() == 2);
    REQUIRE(g.edge_count() == 2);
    CHECK(g.edge_at(0).provider_asn == 65001);
    bool fwd = false, bwd = false;
    for (const PathletEdge& e : g.edges()) {
        fwd |= (e.src == 1 && e.dst == 2);
        bwd |= (e.src == 2 && e.dst == 1);
    }
    CHECK(fwd);
    CHECK(bwd);
}

TEST_CASE("ixp multigraph: k IXPs produce k(k-1) edges") {
    MembershipTable m;
    m.rows = {{1, 65001}, {2, 65001}, {3, 65001}};
    PrefixCounts counts{{65001, 100}};
    Multigraph g = build_ixp_multigraph(m, {}, counts);
    CHECK(g.edge_count() == 6);
}

TEST_CASE("ixp multigraph: matches brute-force pairwise expansion") {
    MembershipTable m;
    m.rows = {{1, 10}, {1, 11}, {2, 10}, {2, 12}, {3, 11}, {3, 12}, {3, 13}, {4, 10}, {4, 13}};
    PrefixCounts counts{{10, 5}, {11, 5}, {12, 5}, {13, 5}};
    IngestStats stats;
    Multigraph g = build_ixp_multigraph(m, {}, counts, &stats);

    // Oracle: expand every AS over its IXP set by hand.
    std::multiset<std::tuple<NodeId, NodeId, Asn>> expect;
    auto by_as = m.ixps_by_as();
    for (const auto& [asn, ixps] : by_as)
        for (NodeId u : ixps)
            for (NodeId v : ixps)
                if (u != v)
                    expect.insert({u, v, asn});
    std::multiset<std::tuple<NodeId, NodeId, Asn>> got;
    for (const PathletEdge& e : g.edges())
        got.insert({e.src, e.dst, e.provider_asn});
    CHECK(got == expect);

    // Invariant: pre-component edge count = sum of k*(k-1).
    std::size_t sum = 0;
    for (const auto& [asn, ixps] : by_as)
        sum += ixps.size() * (ixps.size() - 1);
    CHECK(stats.pre_component_edges == sum);
}

TEST_CASE("ixp multigraph: zero-prefix IXPs dropped, largest component kept") {
    MembershipTable m;
    // IXPs 1,2 share AS 10; IXPs 3,4 share AS 20 (smaller side has fewer
    // edges once AS 30 joins 1,2 as well); IXP 5's only member has no
    // addresses.
    m.rows = {{1, 10}, {2, 10}, {1, 30}, {2, 30}, {3, 20}, {4, 20}, {5, 99}};
    PrefixCounts counts{{10, 5}, {20, 5}, {30, 5}};
    IngestStats stats;
    Multigraph g = build_ixp_multigraph(m, {}, counts, &stats);
    CHECK(stats.ixps_dropped_no_addresses == 1);
    CHECK(g.node_count() == 2);
    CHECK(g.has_node(1));
    CHECK(g.has_node(2));
    CHECK(g.edge_count() == 4);
}

TEST_CASE("ixp multigraph: empty result is an error") {
    MembershipTable m;
    m.rows = {{1, 10}};
    PrefixCounts counts{{10, 5}};
    CHECK_THROWS_AS(build_ixp_multigraph(m, {}, counts), GraphError);
}

TEST_CASE("synthetic: deterministic under seed") {
    SyntheticParams params;
    params.n_ixps = 7;
    params.n_ases = 40;
    SyntheticDataset a = generate_synthetic(params, 99);
    SyntheticDataset b = generate_synthetic(params, 99);
    CHECK(a.membership.rows == b.membership.rows);
    CHECK(a.prefix_counts == b.prefix_counts);
    SyntheticDataset c = generate_synthetic(params, 100);
    CHECK(a.membership.rows != c.membership.rows);
}

TEST_CASE("synthetic: node count bounded by n_ixps") {
    SyntheticParams params;
    params.n_ixps = 7;
    params.n_ases = 60;
    SyntheticDataset ds = generate_synthetic(params, 5);
    Multigraph g = build_ixp_multigraph(ds.membership, ds.locations, ds.prefix_counts);
    CHECK(g.node_count() <= 7);
    for (const IxpNode& n : g.nodes())
        CHECK(n.location.has_value());
}

TEST_CASE("synthetic: participation tail exponent recoverable") {
    SyntheticParams params;
    params.n_ixps = 400;
    params.n_ases = 10000;
    params.participation_alpha = 1.8;
    SyntheticDataset ds = generate_synthetic(params, 2024);

    auto by_as = ds.membership.ixps_by_as();
    // Hill estimator over the tail k >= 4, with the +0.5 midpoint
    // correction for the discretization.
    double sum_log = 0.0;
    std::size_t m = 0;
    for (const auto& [asn, ixps] : by_as) {
        double k = static_cast<double>(ixps.size());
        if (k >= 4.0) {
            sum_log += std::log((k + 0.5) / 3.5);
            ++m;
        }
    }
    REQUIRE(m > 100);
    double alpha_hat = static_cast<double>(m) / sum_log;
    CHECK(alpha_hat == doctest::Approx(params.participation_alpha).epsilon(0.25));

    // Heavy tail: some AS joins many IXPs, most join very few.
    std::size_t max_k = 0, singles = 0;
    for (const auto& [asn, ixps] : by_as) {
        max_k = std::max(max_k, ixps.size());
        singles += ixps.size() == 1;
    }
    CHECK(max_k >= 20);
    CHECK(singles > by_as.size() / 2);
}

TEST_CASE("synthetic: invalid parameters rejected") {
    SyntheticParams params;
    params.n_ixps = 1;
    CHECK_THROWS_AS(generate_synthetic(params, 1), GraphError);
    params.n_ixps = 5;
    params.participation_alpha = -1.0;
    CHECK_THROWS_AS(generate_synthetic(params, 1), GraphError);
}

TEST_SUITE_END();
