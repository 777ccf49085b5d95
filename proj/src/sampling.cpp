#include "cxp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>

namespace cxp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-request search context shared by the feasibility test and all
/// samplers: augmented graph, bandwidth/latency-pruned edge mask, its
/// min-latency collapse, and minimal distances towards the super-sink.
struct SearchContext {
    AugmentedGraph aug;
    std::uint32_t src_idx = 0;
    std::uint32_t dst_idx = 0;
    EdgeMask pruned;
    CollapsedView collapsed;
    std::vector<double> dist_to_dst; // d_t on the collapsed graph
};

// Reverse Dijkstra over the collapsed arcs, yielding minimal latency from
// every node to `dst`.
std::vector<double> distances_to(const Multigraph& g, const CollapsedView& view,
                                 std::uint32_t dst) {
    std::vector<std::vector<CollapsedArc>> rev(g.node_count());
    for (std::uint32_t u = 0; u < g.node_count(); ++u)
        for (const CollapsedArc& a : view.out[u])
            rev[a.dst_idx].push_back(CollapsedArc{u, a.edge_idx});

    std::vector<double> dist(g.node_count(), kInf);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[dst] = 0.0;
    heap.emplace(0.0, dst);
    std::vector<char> done(g.node_count(), 0);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u])
            continue;
        done[u] = 1;
        for (const CollapsedArc& a : rev[u]) {
            double nd = d + g.edge_at(a.edge_idx).latency_ms;
            if (nd < dist[a.dst_idx]) {
                dist[a.dst_idx] = nd;
                heap.emplace(nd, a.dst_idx);
            }
        }
    }
    return dist;
}

SearchContext make_context(const Multigraph& g, const Request& r) {
    SearchContext ctx;
    ctx.aug = attach_virtual_endpoints(g, r);
    ctx.src_idx = static_cast<std::uint32_t>(ctx.aug.graph.node_index(ctx.aug.super_src));
    ctx.dst_idx = static_cast<std::uint32_t>(ctx.aug.graph.node_index(ctx.aug.super_dst));
    ctx.pruned = prune_by_request(ctx.aug.graph, r);
    ctx.collapsed = collapse_min_latency(ctx.aug.graph, ctx.pruned);
    ctx.dist_to_dst = distances_to(ctx.aug.graph, ctx.collapsed, ctx.dst_idx);
    return ctx;
}

// Forward Dijkstra over a collapsed view; returns the edge-index chain
// from src to dst, or nullopt when unreachable.
std::optional<std::vector<std::uint32_t>> shortest_chain(const Multigraph& g,
                                                         const CollapsedView& view,
                                                         std::uint32_t src, std::uint32_t dst) {
    std::vector<double> dist(g.node_count(), kInf);
    std::vector<std::int64_t> parent_edge(g.node_count(), -1);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0.0;
    heap.emplace(0.0, src);
    std::vector<char> done(g.node_count(), 0);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u])
            continue;
        done[u] = 1;
        if (u == dst)
            break;
        for (const CollapsedArc& a : view.out[u]) {
            double nd = d + g.edge_at(a.edge_idx).latency_ms;
            if (nd < dist[a.dst_idx]) {
                dist[a.dst_idx] = nd;
                parent_edge[a.dst_idx] = static_cast<std::int64_t>(a.edge_idx);
                heap.emplace(nd, a.dst_idx);
            }
        }
    }
    if (dist[dst] == kInf)
        return std::nullopt;
    std::vector<std::uint32_t> chain;
    std::uint32_t u = dst;
    while (u != src) {
        std::uint32_t ei = static_cast<std::uint32_t>(parent_edge[u]);
        chain.push_back(ei);
        u = static_cast<std::uint32_t>(g.node_index(g.edge_at(ei).src));
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

// Turns an edge-index chain on the augmented graph into a Path on the
// base graph: virtual legs become the access fields.
Path assemble_path(const SearchContext& ctx, std::span<const std::uint32_t> chain) {
    const Multigraph& ag = ctx.aug.graph;
    Path p;
    double total = 0.0;
    for (std::uint32_t ei : chain) {
        const PathletEdge& e = ag.edge_at(ei);
        total += e.latency_ms;
        if (ctx.aug.is_virtual(e.id)) {
            if (e.src == ctx.aug.super_src)
                p.access_src = AccessPoint{e.dst, e.latency_ms};
            else
                p.access_dst = AccessPoint{e.src, e.latency_ms};
        } else {
            p.edge_ids.push_back(e.id);
        }
    }
    p.total_latency_ms = total;
    p.hop_count = static_cast<int>(p.edge_ids.size());
    return p;
}

std::optional<Path> feasible_path_in_context(const SearchContext& ctx, const Request& r) {
    auto chain = shortest_chain(ctx.aug.graph, ctx.collapsed, ctx.src_idx, ctx.dst_idx);
    if (!chain)
        return std::nullopt;
    Path p = assemble_path(ctx, *chain);
    if (p.total_latency_ms > r.max_latency_ms)
        return std::nullopt;
    return p;
}

// Dedup key: access IXPs plus the concrete edge sequence.
std::vector<EdgeId> dedup_key(const Path& p) {
    std::vector<EdgeId> key;
    key.reserve(p.edge_ids.size() + 2);
    key.push_back(p.access_src.ixp);
    key.insert(key.end(), p.edge_ids.begin(), p.edge_ids.end());
    key.push_back(p.access_dst.ixp);
    return key;
}

// One guided random walk attempt; nullopt on a dead end (restarted by the
// caller).
std::optional<std::vector<std::uint32_t>> guided_walk(const SearchContext& ctx, const Request& r,
                                                      std::mt19937_64& rng) {
    const Multigraph& ag = ctx.aug.graph;
    std::uint32_t u = ctx.src_idx;
    double lat = 0.0;
    std::vector<std::uint32_t> chain;
    std::vector<std::uint32_t> nbr_nodes;        // eligible next hops, ordered
    std::vector<std::vector<std::uint32_t>> nbr_edges;
    std::size_t guard = 0;
    while (u != ctx.dst_idx) {
        if (++guard > ag.node_count() + 1)
            return std::nullopt;
        nbr_nodes.clear();
        nbr_edges.clear();
        // Group eligible parallel edges per strictly-closer neighbor.
        std::uint32_t last_v = std::numeric_limits<std::uint32_t>::max();
        std::vector<std::pair<std::uint32_t, std::uint32_t>> cand; // (v, edge)
        for (std::uint32_t ei : ag.out_edges(u)) {
            if (!ctx.pruned[ei])
                continue;
            const PathletEdge& e = ag.edge_at(ei);
            std::uint32_t v = static_cast<std::uint32_t>(ag.node_index(e.dst));
            if (!(ctx.dist_to_dst[v] < ctx.dist_to_dst[u]))
                continue;
            if (lat + e.latency_ms + ctx.dist_to_dst[v] > r.max_latency_ms)
                continue;
            cand.emplace_back(v, ei);
        }
        if (cand.empty())
            return std::nullopt;
        std::sort(cand.begin(), cand.end());
        for (const auto& [v, ei] : cand) {
            if (v != last_v) {
                nbr_nodes.push_back(v);
                nbr_edges.emplace_back();
                last_v = v;
            }
            nbr_edges.back().push_back(ei);
        }
        std::uniform_int_distribution<std::size_t> pick_node(0, nbr_nodes.size() - 1);
        std::size_t vi = pick_node(rng);
        std::uniform_int_distribution<std::size_t> pick_edge(0, nbr_edges[vi].size() - 1);
        std::uint32_t ei = nbr_edges[vi][pick_edge(rng)];
        chain.push_back(ei);
        lat += ag.edge_at(ei).latency_ms;
        u = nbr_nodes[vi];
    }
    return chain;
}

// One guided randomized Dijkstra run; per popped node and neighbor, the
// relaxation edge is drawn uniformly from the look-ahead-eligible
// parallel set.
std::optional<std::vector<std::uint32_t>> guided_dijkstra(const SearchContext& ctx,
                                                          const Request& r,
                                                          std::mt19937_64& rng) {
    const Multigraph& ag = ctx.aug.graph;
    std::vector<double> dist(ag.node_count(), kInf);
    std::vector<std::int64_t> parent_edge(ag.node_count(), -1);
    std::vector<char> done(ag.node_count(), 0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[ctx.src_idx] = 0.0;
    heap.emplace(0.0, ctx.src_idx);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cand;
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u])
            continue;
        done[u] = 1;
        if (u == ctx.dst_idx)
            break;
        cand.clear();
        for (std::uint32_t ei : ag.out_edges(u)) {
            if (!ctx.pruned[ei])
                continue;
            const PathletEdge& e = ag.edge_at(ei);
            std::uint32_t v = static_cast<std::uint32_t>(ag.node_index(e.dst));
            if (done[v])
                continue;
            if (d + e.latency_ms + ctx.dist_to_dst[v] > r.max_latency_ms)
                continue;
            cand.emplace_back(v, ei);
        }
        std::sort(cand.begin(), cand.end());
        std::size_t i = 0;
        while (i < cand.size()) {
            std::size_t j = i;
            while (j < cand.size() && cand[j].first == cand[i].first)
                ++j;
            std::uniform_int_distribution<std::size_t> pick(0, j - i - 1);
            std::uint32_t ei = cand[i + pick(rng)].second;
            std::uint32_t v = cand[i].first;
            double nd = d + ag.edge_at(ei).latency_ms;
            if (nd < dist[v]) {
                dist[v] = nd;
                parent_edge[v] = static_cast<std::int64_t>(ei);
                heap.emplace(nd, v);
            }
            i = j;
        }
    }
    if (dist[ctx.dst_idx] == kInf || dist[ctx.dst_idx] > r.max_latency_ms)
        return std::nullopt;
    std::vector<std::uint32_t> chain;
    std::uint32_t u = ctx.dst_idx;
    while (u != ctx.src_idx) {
        std::uint32_t ei = static_cast<std::uint32_t>(parent_edge[u]);
        chain.push_back(ei);
        u = static_cast<std::uint32_t>(ag.node_index(ag.edge_at(ei).src));
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

} // namespace

const char* to_string(SampleAlgo a) {
    switch (a) {
    case SampleAlgo::PerturbedDijkstra:
        return "pd";
    case SampleAlgo::GuidedDijkstra:
        return "gd";
    case SampleAlgo::GuidedWalk:
        return "gw";
    }
    return "?";
}

std::optional<SampleAlgo> sample_algo_from_string(std::string_view s) {
    if (s == "pd")
        return SampleAlgo::PerturbedDijkstra;
    if (s == "gd")
        return SampleAlgo::GuidedDijkstra;
    if (s == "gw")
        return SampleAlgo::GuidedWalk;
    return std::nullopt;
}

std::optional<Path> exists_feasible_path(const Multigraph& g, const Request& r) {
    SearchContext ctx = make_context(g, r);
    return feasible_path_in_context(ctx, r);
}

std::vector<Path> sample_pd(const Multigraph& g, const Request& r, int k) {
    SearchContext ctx = make_context(g, r);
    EdgeMask mask = ctx.pruned;
    std::vector<Path> paths;
    for (int i = 0; i < k; ++i) {
        CollapsedView view =
            i == 0 ? std::move(ctx.collapsed) : collapse_min_latency(ctx.aug.graph, mask);
        auto chain = shortest_chain(ctx.aug.graph, view, ctx.src_idx, ctx.dst_idx);
        if (!chain)
            break;
        Path p = assemble_path(ctx, *chain);
        if (p.total_latency_ms > r.max_latency_ms)
            break;
        paths.push_back(p);
        // Edge-disjointness perturbation: drop the used pathlets. A path
        // with no real edge cannot be perturbed away, so stop.
        bool removed = false;
        for (std::uint32_t ei : *chain) {
            if (!ctx.aug.is_virtual(ctx.aug.graph.edge_at(ei).id)) {
                mask[ei] = 0;
                removed = true;
            }
        }
        if (!removed)
            break;
    }
    return paths;
}

std::vector<Path> sample_gw(const Multigraph& g, const Request& r, int k, std::mt19937_64& rng) {
    SearchContext ctx = make_context(g, r);
    if (ctx.dist_to_dst[ctx.src_idx] > r.max_latency_ms)
        return {};

    std::vector<Path> paths;
    std::set<std::vector<EdgeId>> seen;
    std::optional<Path> fallback;
    for (int i = 0; i < k; ++i) {
        std::optional<Path> sampled;
        for (int attempt = 0; attempt < 10 && !sampled; ++attempt) {
            auto chain = guided_walk(ctx, r, rng);
            if (chain)
                sampled = assemble_path(ctx, *chain);
        }
        if (!sampled) {
            // Dead ends cannot occur with strictly positive latencies, but
            // floating-point drift near the budget can starve the walk;
            // the feasibility witness always exists here.
            if (!fallback)
                fallback = feasible_path_in_context(ctx, r);
            if (!fallback)
                break;
            sampled = fallback;
        }
        if (seen.insert(dedup_key(*sampled)).second)
            paths.push_back(std::move(*sampled));
    }
    return paths;
}

std::vector<Path> sample_gd(const Multigraph& g, const Request& r, int k, std::mt19937_64& rng) {
    SearchContext ctx = make_context(g, r);
    if (ctx.dist_to_dst[ctx.src_idx] > r.max_latency_ms)
        return {};

    std::vector<Path> paths;
    std::set<std::vector<EdgeId>> seen;
    for (int i = 0; i < k; ++i) {
        auto chain = guided_dijkstra(ctx, r, rng);
        std::optional<Path> sampled;
        if (chain)
            sampled = assemble_path(ctx, *chain);
        else
            sampled = feasible_path_in_context(ctx, r);
        if (!sampled)
            break;
        if (seen.insert(dedup_key(*sampled)).second)
            paths.push_back(std::move(*sampled));
    }
    return paths;
}

std::vector<Path> sample_paths(const Multigraph& g, const Request& r, SampleAlgo algo, int k,
                               std::mt19937_64& rng) {
    switch (algo) {
    case SampleAlgo::PerturbedDijkstra:
        return sample_pd(g, r, k);
    case SampleAlgo::GuidedDijkstra:
        return sample_gd(g, r, k, rng);
    case SampleAlgo::GuidedWalk:
        return sample_gw(g, r, k, rng);
    }
    return {};
}

double inverse_utility(const Multigraph& g, EdgeId edge) {
    const PathletEdge& e = g.edge_by_id(edge);
    if (e.unbounded)
        throw GraphError("inverse utility of a virtual access edge");
    if (e.latency_ms <= 0.0)
        throw GraphError("inverse utility undefined for zero-latency edge " + std::to_string(edge));

    double min_bw = kInf;
    double max_lat = 0.0;
    std::size_t parallel = 0;
    std::size_t src_idx = g.node_index(e.src);
    for (std::uint32_t ei : g.out_edges(src_idx)) {
        const PathletEdge& other = g.edge_at(ei);
        if (other.dst != e.dst || other.unbounded)
            continue;
        ++parallel;
        min_bw = std::min(min_bw, other.bandwidth);
        max_lat = std::max(max_lat, other.latency_ms);
    }
    if (min_bw <= 0.0)
        min_bw = 1.0; // degenerate zero-capacity parallel set
    return (e.bandwidth / min_bw) * (max_lat / e.latency_ms) / static_cast<double>(parallel);
}

const Path& select_best(std::span<const Path> paths, const Multigraph& g) {
    if (paths.empty())
        throw GraphError("select_best over an empty path set");
    auto score_of = [&](const Path& p) {
        double s = 0.0;
        for (EdgeId ei : p.edge_ids)
            s += inverse_utility(g, ei);
        return s;
    };
    const Path* best = &paths[0];
    double best_score = score_of(*best);
    for (const Path& p : paths.subspan(1)) {
        if (p.hop_count > best->hop_count)
            continue;
        if (p.hop_count < best->hop_count) {
            best = &p;
            best_score = score_of(p);
            continue;
        }
        double score = score_of(p);
        if (score < best_score ||
            (score == best_score &&
             (p.total_latency_ms < best->total_latency_ms ||
              (p.total_latency_ms == best->total_latency_ms && p.edge_ids < best->edge_ids)))) {
            best = &p;
            best_score = score;
        }
    }
    return *best;
}

} // namespace cxp
