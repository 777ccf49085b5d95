#pragma once

#include "cxp/types.hpp"

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

namespace cxp {

/// Directed multigraph of IXP nodes and pathlet edges.
///
/// Immutable after construction except for residual bandwidth, which is
/// only touched through the reservation API (single writer). Node and edge
/// ids are opaque; all hot-path iteration uses dense indices.
class Multigraph {
public:
    Multigraph() = default;

    /// Validates endpoints, forbids self-loops and duplicate ids, and
    /// initializes residual_bandwidth = bandwidth.
    static Multigraph build(std::vector<IxpNode> nodes, std::vector<PathletEdge> edges);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    std::span<const IxpNode> nodes() const { return nodes_; }
    std::span<const PathletEdge> edges() const { return edges_; }

    const IxpNode& node_at(std::size_t idx) const { return nodes_[idx]; }
    const PathletEdge& edge_at(std::size_t idx) const { return edges_[idx]; }

    bool has_node(NodeId id) const { return node_index_.count(id) != 0; }
    bool has_edge(EdgeId id) const { return edge_index_.count(id) != 0; }

    std::size_t node_index(NodeId id) const;
    std::size_t edge_index(EdgeId id) const;

    const PathletEdge& edge_by_id(EdgeId id) const { return edges_[edge_index(id)]; }

    /// Outgoing/incoming edge indices of the node at `node_idx`.
    std::span<const std::uint32_t> out_edges(std::size_t node_idx) const { return out_adj_[node_idx]; }
    std::span<const std::uint32_t> in_edges(std::size_t node_idx) const { return in_adj_[node_idx]; }

    // Reservation API. Amount must fit in the residual; unbounded edges
    // ignore accounting.
    void reserve_bandwidth(std::size_t edge_idx, double amount);
    void release_bandwidth(std::size_t edge_idx, double amount);

    /// Overwrites the residual directly (snapshot transfer); must stay
    /// within [0, bandwidth].
    void set_residual(std::size_t edge_idx, double value);

    // Annotation-phase mutators; both reset the residual to full capacity.
    void set_latency(std::size_t edge_idx, double latency_ms);
    void set_capacity(std::size_t edge_idx, double capacity);

    /// Resets all residuals to full capacity.
    void clear_reservations();

    /// Capacity sums over real (non-virtual) edges only.
    double total_capacity() const;
    double occupied_capacity() const;

private:
    std::vector<IxpNode> nodes_;
    std::vector<PathletEdge> edges_;
    std::unordered_map<NodeId, std::uint32_t> node_index_;
    std::unordered_map<EdgeId, std::uint32_t> edge_index_;
    std::vector<std::vector<std::uint32_t>> out_adj_;
    std::vector<std::vector<std::uint32_t>> in_adj_;
};

/// Edge-inclusion mask keyed by dense edge index.
using EdgeMask = std::vector<char>;

/// Pruning step of the feasibility pipeline: keeps edges whose residual
/// bandwidth covers the request and whose own latency does not already
/// exceed the latency bound.
EdgeMask prune_by_request(const Multigraph& g, const Request& r);

std::vector<EdgeId> mask_to_edge_ids(const Multigraph& g, const EdgeMask& mask);

struct CollapsedArc {
    std::uint32_t dst_idx;
    std::uint32_t edge_idx; // representative (minimal-latency) original edge
};

/// Simple-graph projection: per ordered node pair, only the
/// minimal-latency edge of the masked parallel set survives (ties broken
/// by smallest edge id). Arcs keep the original edge index so paths map
/// back to concrete pathlets.
struct CollapsedView {
    std::vector<std::vector<CollapsedArc>> out;

    EdgeMask representative_mask(const Multigraph& g) const;
};

CollapsedView collapse_min_latency(const Multigraph& g, const EdgeMask& mask);

/// Request-augmented graph: a copy of the base graph plus one virtual
/// super-source/super-sink connected to the request's access IXPs by
/// unbounded-bandwidth edges carrying the access latencies.
struct AugmentedGraph {
    Multigraph graph;
    NodeId super_src = 0;
    NodeId super_dst = 0;
    // Edge ids below this value are real pathlets of the base graph.
    EdgeId first_virtual_edge_id = 0;

    bool is_virtual(EdgeId id) const { return id >= first_virtual_edge_id; }
};

AugmentedGraph attach_virtual_endpoints(const Multigraph& g, const Request& r);

} // namespace cxp
