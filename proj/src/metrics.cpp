#include "cxp/metrics.hpp"

#include "cxp/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace cxp {

namespace {

// Undirected simple-graph adjacency (by node index) plus per-pair
// multiplicities keyed (min_idx << 32 | max_idx).
struct SimpleView {
    std::vector<std::vector<std::uint32_t>> adj;
    std::unordered_map<std::uint64_t, std::size_t> pair_multiplicity;
};

SimpleView simple_view(const Multigraph& g) {
    SimpleView view;
    view.adj.assign(g.node_count(), {});
    std::unordered_map<std::uint64_t, std::size_t> fwd_count;
    for (const PathletEdge& e : g.edges()) {
        std::uint32_t u = static_cast<std::uint32_t>(g.node_index(e.src));
        std::uint32_t v = static_cast<std::uint32_t>(g.node_index(e.dst));
        ++fwd_count[(static_cast<std::uint64_t>(u) << 32) | v];
    }
    std::set<std::uint64_t> pairs;
    for (const auto& [key, count] : fwd_count) {
        std::uint32_t u = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t v = static_cast<std::uint32_t>(key & 0xffffffffULL);
        std::uint64_t canon = u < v ? key : ((static_cast<std::uint64_t>(v) << 32) | u);
        auto& m = view.pair_multiplicity[canon];
        m = std::max(m, count);
        if (pairs.insert(canon).second) {
            view.adj[u].push_back(v);
            view.adj[v].push_back(u);
        }
    }
    for (auto& nbrs : view.adj)
        std::sort(nbrs.begin(), nbrs.end());
    return view;
}

// BFS hop distances from `start` over the undirected simple graph;
// unreachable nodes stay -1.
std::vector<int> bfs_hops(const SimpleView& view, std::uint32_t start) {
    std::vector<int> dist(view.adj.size(), -1);
    std::queue<std::uint32_t> q;
    dist[start] = 0;
    q.push(start);
    while (!q.empty()) {
        std::uint32_t u = q.front();
        q.pop();
        for (std::uint32_t v : view.adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

} // namespace

GraphSummary graph_summary(const Multigraph& g) {
    GraphSummary s;
    s.node_count = g.node_count();
    s.edge_count = g.edge_count();
    if (g.node_count() == 0)
        throw GraphError("graph summary of an empty graph");

    SimpleView view = simple_view(g);

    // Connectivity check + shortest-path statistics.
    std::uint64_t path_sum = 0;
    std::uint64_t path_pairs = 0;
    int diameter = 0;
    for (std::uint32_t u = 0; u < g.node_count(); ++u) {
        std::vector<int> dist = bfs_hops(view, u);
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            if (v == u)
                continue;
            if (dist[v] < 0)
                throw GraphError("graph summary requires a connected graph");
            path_sum += static_cast<std::uint64_t>(dist[v]);
            ++path_pairs;
            diameter = std::max(diameter, dist[v]);
        }
    }
    s.diameter = diameter;
    s.avg_shortest_path_len =
        path_pairs ? static_cast<double>(path_sum) / static_cast<double>(path_pairs) : 0.0;

    // Degree and multiplicity from the per-pair parallel counts.
    double mult_sum = 0.0;
    std::vector<double> degree(g.node_count(), 0.0);
    for (const auto& [key, m] : view.pair_multiplicity) {
        std::uint32_t u = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t v = static_cast<std::uint32_t>(key & 0xffffffffULL);
        mult_sum += static_cast<double>(m);
        degree[u] += static_cast<double>(m);
        degree[v] += static_cast<double>(m);
    }
    s.avg_edge_multiplicity =
        view.pair_multiplicity.empty() ? 0.0 : mult_sum / static_cast<double>(view.pair_multiplicity.size());
    double deg_sum = 0.0;
    for (double d : degree)
        deg_sum += d;
    s.avg_node_degree = deg_sum / static_cast<double>(g.node_count());

    // Local clustering on the simple graph; nodes with degree < 2 count 0.
    double clust_sum = 0.0;
    for (std::uint32_t u = 0; u < g.node_count(); ++u) {
        const auto& nbrs = view.adj[u];
        if (nbrs.size() < 2)
            continue;
        std::size_t closed = 0;
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            for (std::size_t j = i + 1; j < nbrs.size(); ++j)
                if (std::binary_search(view.adj[nbrs[i]].begin(), view.adj[nbrs[i]].end(), nbrs[j]))
                    ++closed;
        clust_sum += 2.0 * static_cast<double>(closed) /
                     (static_cast<double>(nbrs.size()) * static_cast<double>(nbrs.size() - 1));
    }
    s.avg_clustering_coeff = clust_sum / static_cast<double>(g.node_count());
    return s;
}

std::map<std::size_t, std::size_t> edge_multiplicity_distribution(const Multigraph& g) {
    SimpleView view = simple_view(g);
    std::map<std::size_t, std::size_t> dist;
    for (const auto& [key, m] : view.pair_multiplicity)
        ++dist[m];
    return dist;
}

std::int64_t path_diversity(const Multigraph& g, NodeId src_ixp, NodeId dst_ixp) {
    if (src_ixp == dst_ixp)
        throw GraphError("path diversity needs distinct endpoints");
    std::uint32_t s = static_cast<std::uint32_t>(g.node_index(src_ixp));
    std::uint32_t t = static_cast<std::uint32_t>(g.node_index(dst_ixp));
    MaxFlow flow(g.node_count());
    for (const PathletEdge& e : g.edges())
        flow.add_arc(static_cast<std::uint32_t>(g.node_index(e.src)),
                     static_cast<std::uint32_t>(g.node_index(e.dst)), 1);
    return flow.solve(s, t);
}

std::vector<NodeId> CoverageCurve::order() const {
    std::vector<NodeId> out;
    out.reserve(points.size());
    for (const CoveragePoint& p : points)
        out.push_back(p.ixp_id);
    return out;
}

CoverageCurve greedy_coverage_order(const MembershipTable& membership,
                                    const PrefixCounts& prefix_counts, const AsRelGraph& as_rel) {
    auto by_ixp = membership.members_by_ixp();

    auto addresses_of = [&](Asn asn) -> std::uint64_t {
        auto it = prefix_counts.find(asn);
        return it == prefix_counts.end() ? 0 : it->second;
    };

    // Direct AS set and one-hop AS set (members plus their customers).
    std::map<NodeId, std::vector<Asn>> direct, one_hop;
    for (const auto& [ixp, members] : by_ixp) {
        std::set<Asn> dset(members.begin(), members.end());
        std::set<Asn> oset = dset;
        for (Asn m : members)
            for (Asn c : as_rel.customers_of(m))
                oset.insert(c);
        direct[ixp].assign(dset.begin(), dset.end());
        one_hop[ixp].assign(oset.begin(), oset.end());
    }

    CoverageCurve curve;
    std::set<NodeId> remaining;
    for (const auto& [ixp, _] : by_ixp)
        remaining.insert(ixp);
    std::unordered_set<Asn> covered_direct, covered_one_hop;
    std::uint64_t cum_direct = 0, cum_one_hop = 0;

    while (!remaining.empty()) {
        NodeId best = 0;
        std::uint64_t best_gain = 0;
        bool first = true;
        for (NodeId ixp : remaining) {
            std::uint64_t gain = 0;
            for (Asn asn : direct[ixp])
                if (!covered_direct.count(asn))
                    gain += addresses_of(asn);
            if (first || gain > best_gain) {
                best = ixp;
                best_gain = gain;
                first = false;
            }
        }
        remaining.erase(best);
        for (Asn asn : direct[best])
            if (covered_direct.insert(asn).second)
                cum_direct += addresses_of(asn);
        for (Asn asn : one_hop[best])
            if (covered_one_hop.insert(asn).second)
                cum_one_hop += addresses_of(asn);
        curve.points.push_back(CoveragePoint{best, cum_direct, cum_one_hop});
    }
    return curve;
}

Multigraph scale_down(const Multigraph& g, const CoverageCurve& order, int sdf) {
    if (sdf < 1)
        throw GraphError("scale-down factor must be >= 1");
    std::size_t target = static_cast<std::size_t>(
        std::ceil(static_cast<double>(g.node_count()) / static_cast<double>(sdf)));

    std::set<NodeId> keep;
    for (const CoveragePoint& p : order.points) {
        if (keep.size() >= target)
            break;
        if (g.has_node(p.ixp_id))
            keep.insert(p.ixp_id);
    }
    if (keep.empty())
        throw GraphError("scale-down produced an empty graph");

    std::vector<IxpNode> nodes;
    for (const IxpNode& n : g.nodes())
        if (keep.count(n.id))
            nodes.push_back(n);
    std::vector<PathletEdge> edges;
    for (const PathletEdge& e : g.edges())
        if (keep.count(e.src) && keep.count(e.dst))
            edges.push_back(e);

    Multigraph induced = Multigraph::build(std::move(nodes), std::move(edges));

    // Largest connected component (undirected), ties to the component of
    // the smallest node id.
    std::vector<int> comp(induced.node_count(), -1);
    int n_comp = 0;
    for (std::uint32_t start = 0; start < induced.node_count(); ++start) {
        if (comp[start] >= 0)
            continue;
        std::vector<std::uint32_t> stack{start};
        comp[start] = n_comp;
        while (!stack.empty()) {
            std::uint32_t u = stack.back();
            stack.pop_back();
            for (std::uint32_t ei : induced.out_edges(u)) {
                std::uint32_t v =
                    static_cast<std::uint32_t>(induced.node_index(induced.edge_at(ei).dst));
                if (comp[v] < 0) {
                    comp[v] = n_comp;
                    stack.push_back(v);
                }
            }
            for (std::uint32_t ei : induced.in_edges(u)) {
                std::uint32_t v =
                    static_cast<std::uint32_t>(induced.node_index(induced.edge_at(ei).src));
                if (comp[v] < 0) {
                    comp[v] = n_comp;
                    stack.push_back(v);
                }
            }
        }
        ++n_comp;
    }
    std::vector<std::size_t> sizes(n_comp, 0);
    for (int c : comp)
        ++sizes[c];
    int largest = 0;
    for (int c = 1; c < n_comp; ++c)
        if (sizes[c] > sizes[largest])
            largest = c;

    std::vector<IxpNode> final_nodes;
    for (std::uint32_t i = 0; i < induced.node_count(); ++i)
        if (comp[i] == largest)
            final_nodes.push_back(induced.node_at(i));
    std::set<NodeId> final_ids;
    for (const IxpNode& n : final_nodes)
        final_ids.insert(n.id);
    std::vector<PathletEdge> final_edges;
    for (const PathletEdge& e : induced.edges())
        if (final_ids.count(e.src) && final_ids.count(e.dst))
            final_edges.push_back(e);
    if (final_nodes.empty())
        throw GraphError("scale-down produced an empty graph");
    return Multigraph::build(std::move(final_nodes), std::move(final_edges));
}

Percentiles distribution_percentiles(std::vector<double> values) {
    if (values.empty())
        throw GraphError("percentiles of an empty distribution");
    std::sort(values.begin(), values.end());
    auto nearest_rank = [&](double p) {
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(p / 100.0 * static_cast<double>(values.size())));
        rank = std::max<std::size_t>(1, std::min(rank, values.size()));
        return values[rank - 1];
    };
    Percentiles out;
    out.p1 = nearest_rank(1.0);
    out.p25 = nearest_rank(25.0);
    out.p50 = nearest_rank(50.0);
    out.p75 = nearest_rank(75.0);
    out.p99 = nearest_rank(99.0);
    out.p999 = nearest_rank(99.9);
    return out;
}

} // namespace cxp
