#pragma once

#include "cxp/ingest.hpp"
#include "cxp/multigraph.hpp"
#include "cxp/types.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace cxp {

/// Graph statistics over a connected multigraph.
///
/// Conventions (parallel edges are directed, membership-built graphs are
/// symmetric): edge_count counts directed pathlet edges; multiplicity of an
/// unordered pair is the larger of the two directed parallel counts (the
/// number of distinct providers connecting the pair); node degree sums
/// pair multiplicities; diameter, shortest paths and clustering are
/// hop-based on the undirected collapsed simple graph.
struct GraphSummary {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    int diameter = 0;
    double avg_node_degree = 0.0;
    double avg_edge_multiplicity = 0.0;
    double avg_shortest_path_len = 0.0;
    double avg_clustering_coeff = 0.0;
};

GraphSummary graph_summary(const Multigraph& g);

/// multiplicity -> number of directly connected unordered IXP pairs.
std::map<std::size_t, std::size_t> edge_multiplicity_distribution(const Multigraph& g);

/// Edge-disjoint path count between two IXPs: max-flow with unit capacity
/// per pathlet edge.
std::int64_t path_diversity(const Multigraph& g, NodeId src_ixp, NodeId dst_ixp);

struct CoveragePoint {
    NodeId ixp_id = 0;
    std::uint64_t cumulative_direct_addresses = 0;
    std::uint64_t cumulative_one_hop_addresses = 0;
};

/// Greedy IXP ordering by marginal non-overlapping address coverage;
/// ties broken by smaller ixp id. The one-hop column additionally counts
/// the members' direct customers.
struct CoverageCurve {
    std::vector<CoveragePoint> points;

    std::vector<NodeId> order() const;
};

CoverageCurve greedy_coverage_order(const MembershipTable& membership,
                                    const PrefixCounts& prefix_counts, const AsRelGraph& as_rel);

/// Partial-deployment model: keeps the first ceil(N/sdf) IXPs of the
/// greedy order (N = node count of g) and every edge among them, then
/// re-extracts the largest connected component.
Multigraph scale_down(const Multigraph& g, const CoverageCurve& order, int sdf);

struct Percentiles {
    double p1 = 0.0;
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    double p99 = 0.0;
    double p999 = 0.0;
};

/// Nearest-rank percentiles; input need not be sorted.
Percentiles distribution_percentiles(std::vector<double> values);

} // namespace cxp
