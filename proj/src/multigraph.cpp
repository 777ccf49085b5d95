#include "cxp/multigraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cxp {

Multigraph Multigraph::build(std::vector<IxpNode> nodes, std::vector<PathletEdge> edges) {
    Multigraph g;
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);

    g.node_index_.reserve(g.nodes_.size());
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
        const IxpNode& n = g.nodes_[i];
        if (!g.node_index_.emplace(n.id, static_cast<std::uint32_t>(i)).second)
            throw GraphError("duplicate node id " + std::to_string(n.id));
        if (n.location) {
            if (n.location->lat_deg < -90.0 || n.location->lat_deg > 90.0 ||
                n.location->lon_deg < -180.0 || n.location->lon_deg > 180.0)
                throw GraphError("node " + std::to_string(n.id) + " has out-of-range coordinates");
        }
    }

    g.out_adj_.assign(g.nodes_.size(), {});
    g.in_adj_.assign(g.nodes_.size(), {});
    g.edge_index_.reserve(g.edges_.size());
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
        PathletEdge& e = g.edges_[i];
        if (!g.edge_index_.emplace(e.id, static_cast<std::uint32_t>(i)).second)
            throw GraphError("duplicate edge id " + std::to_string(e.id));
        auto src_it = g.node_index_.find(e.src);
        auto dst_it = g.node_index_.find(e.dst);
        if (src_it == g.node_index_.end() || dst_it == g.node_index_.end())
            throw GraphError("edge " + std::to_string(e.id) + " references a missing node");
        if (e.src == e.dst)
            throw GraphError("edge " + std::to_string(e.id) + " is a self-loop");
        if (e.bandwidth < 0.0 || e.latency_ms < 0.0)
            throw GraphError("edge " + std::to_string(e.id) + " has negative bandwidth or latency");
        e.residual_bandwidth = e.bandwidth;
        g.out_adj_[src_it->second].push_back(static_cast<std::uint32_t>(i));
        g.in_adj_[dst_it->second].push_back(static_cast<std::uint32_t>(i));
    }
    return g;
}

std::size_t Multigraph::node_index(NodeId id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end())
        throw GraphError("unknown node id " + std::to_string(id));
    return it->second;
}

std::size_t Multigraph::edge_index(EdgeId id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end())
        throw GraphError("unknown edge id " + std::to_string(id));
    return it->second;
}

void Multigraph::reserve_bandwidth(std::size_t edge_idx, double amount) {
    PathletEdge& e = edges_[edge_idx];
    if (e.unbounded)
        return;
    if (amount < 0.0 || e.residual_bandwidth + 1e-12 < amount)
        throw GraphError("reservation exceeds residual on edge " + std::to_string(e.id));
    e.residual_bandwidth = std::max(0.0, e.residual_bandwidth - amount);
}

void Multigraph::release_bandwidth(std::size_t edge_idx, double amount) {
    PathletEdge& e = edges_[edge_idx];
    if (e.unbounded)
        return;
    if (amount < 0.0 || e.residual_bandwidth + amount > e.bandwidth + 1e-12)
        throw GraphError("release exceeds capacity on edge " + std::to_string(e.id));
    e.residual_bandwidth = std::min(e.bandwidth, e.residual_bandwidth + amount);
}

void Multigraph::set_residual(std::size_t edge_idx, double value) {
    PathletEdge& e = edges_[edge_idx];
    if (value < -1e-12 || value > e.bandwidth + 1e-12)
        throw GraphError("residual out of range on edge " + std::to_string(e.id));
    e.residual_bandwidth = std::clamp(value, 0.0, e.bandwidth);
}

void Multigraph::set_latency(std::size_t edge_idx, double latency_ms) {
    if (latency_ms < 0.0)
        throw GraphError("negative latency");
    edges_[edge_idx].latency_ms = latency_ms;
    edges_[edge_idx].residual_bandwidth = edges_[edge_idx].bandwidth;
}

void Multigraph::set_capacity(std::size_t edge_idx, double capacity) {
    if (capacity < 0.0)
        throw GraphError("negative capacity");
    edges_[edge_idx].bandwidth = capacity;
    edges_[edge_idx].residual_bandwidth = capacity;
}

void Multigraph::clear_reservations() {
    for (PathletEdge& e : edges_)
        e.residual_bandwidth = e.bandwidth;
}

double Multigraph::total_capacity() const {
    double sum = 0.0;
    for (const PathletEdge& e : edges_)
        if (!e.unbounded)
            sum += e.bandwidth;
    return sum;
}

double Multigraph::occupied_capacity() const {
    double sum = 0.0;
    for (const PathletEdge& e : edges_)
        if (!e.unbounded)
            sum += e.bandwidth - e.residual_bandwidth;
    return sum;
}

EdgeMask prune_by_request(const Multigraph& g, const Request& r) {
    EdgeMask mask(g.edge_count(), 0);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const PathletEdge& e = g.edge_at(i);
        bool bw_ok = e.unbounded || e.residual_bandwidth >= r.min_bandwidth;
        bool lat_ok = e.latency_ms <= r.max_latency_ms;
        mask[i] = (bw_ok && lat_ok) ? 1 : 0;
    }
    return mask;
}

std::vector<EdgeId> mask_to_edge_ids(const Multigraph& g, const EdgeMask& mask) {
    std::vector<EdgeId> ids;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i])
            ids.push_back(g.edge_at(i).id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

CollapsedView collapse_min_latency(const Multigraph& g, const EdgeMask& mask) {
    CollapsedView view;
    view.out.assign(g.node_count(), {});
    // best[dst] = winning edge index for the pair (u, dst) while scanning u.
    std::vector<std::uint32_t> best(g.node_count(), std::numeric_limits<std::uint32_t>::max());
    std::vector<std::uint32_t> touched;
    for (std::size_t u = 0; u < g.node_count(); ++u) {
        touched.clear();
        for (std::uint32_t ei : g.out_edges(u)) {
            if (!mask[ei])
                continue;
            const PathletEdge& e = g.edge_at(ei);
            std::uint32_t v = static_cast<std::uint32_t>(g.node_index(e.dst));
            std::uint32_t cur = best[v];
            if (cur == std::numeric_limits<std::uint32_t>::max()) {
                best[v] = ei;
                touched.push_back(v);
            } else {
                const PathletEdge& c = g.edge_at(cur);
                if (e.latency_ms < c.latency_ms ||
                    (e.latency_ms == c.latency_ms && e.id < c.id))
                    best[v] = ei;
            }
        }
        for (std::uint32_t v : touched) {
            view.out[u].push_back(CollapsedArc{v, best[v]});
            best[v] = std::numeric_limits<std::uint32_t>::max();
        }
        std::sort(view.out[u].begin(), view.out[u].end(),
                  [](const CollapsedArc& a, const CollapsedArc& b) { return a.dst_idx < b.dst_idx; });
    }
    return view;
}

EdgeMask CollapsedView::representative_mask(const Multigraph& g) const {
    EdgeMask mask(g.edge_count(), 0);
    for (const auto& arcs : out)
        for (const CollapsedArc& a : arcs)
            mask[a.edge_idx] = 1;
    return mask;
}

AugmentedGraph attach_virtual_endpoints(const Multigraph& g, const Request& r) {
    if (r.src_access.empty() || r.dst_access.empty())
        throw GraphError("request " + std::to_string(r.id) + " has an empty access list");

    NodeId max_node = 0;
    for (const IxpNode& n : g.nodes())
        max_node = std::max(max_node, n.id);
    EdgeId max_edge = 0;
    for (const PathletEdge& e : g.edges())
        max_edge = std::max(max_edge, e.id);

    AugmentedGraph aug;
    aug.super_src = max_node + 1;
    aug.super_dst = max_node + 2;
    aug.first_virtual_edge_id = max_edge + 1;

    std::vector<IxpNode> nodes(g.nodes().begin(), g.nodes().end());
    nodes.push_back(IxpNode{aug.super_src, "super-src", std::nullopt});
    nodes.push_back(IxpNode{aug.super_dst, "super-dst", std::nullopt});

    std::vector<PathletEdge> edges(g.edges().begin(), g.edges().end());
    EdgeId next = aug.first_virtual_edge_id;
    for (const AccessPoint& ap : r.src_access) {
        if (!g.has_node(ap.ixp))
            throw GraphError("source access IXP " + std::to_string(ap.ixp) + " not in graph");
        PathletEdge e;
        e.id = next++;
        e.src = aug.super_src;
        e.dst = ap.ixp;
        e.latency_ms = ap.latency_ms;
        e.unbounded = true;
        edges.push_back(e);
    }
    for (const AccessPoint& ap : r.dst_access) {
        if (!g.has_node(ap.ixp))
            throw GraphError("destination access IXP " + std::to_string(ap.ixp) + " not in graph");
        PathletEdge e;
        e.id = next++;
        e.src = ap.ixp;
        e.dst = aug.super_dst;
        e.latency_ms = ap.latency_ms;
        e.unbounded = true;
        edges.push_back(e);
    }

    aug.graph = Multigraph::build(std::move(nodes), std::move(edges));
    // Residuals of the base edges must reflect the snapshot, not full capacity.
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const PathletEdge& src = g.edge_at(i);
        aug.graph.set_residual(aug.graph.edge_index(src.id), src.residual_bandwidth);
    }
    return aug;
}

} // namespace cxp
