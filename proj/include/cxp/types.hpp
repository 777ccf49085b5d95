#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cxp {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Asn = std::uint32_t;
using RequestId = std::uint64_t;

struct GeoCoord {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

/// An IXP fabric, vertex of the pathlet multigraph.
struct IxpNode {
    NodeId id = 0;
    std::string name;
    std::optional<GeoCoord> location;
};

/// A directed ISP-provided pathlet between two IXPs.
///
/// Parallel edges between the same IXP pair are the norm; edges are
/// identified by `id`, never by (src,dst,asn), since one ISP may offer
/// several pathlets between the same pair of anchors.
struct PathletEdge {
    EdgeId id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    Asn provider_asn = 0;
    double bandwidth = 1.0;
    double latency_ms = 0.0;
    double residual_bandwidth = 1.0;
    // Virtual endpoint-access edges carry no capacity and are excluded
    // from utilization accounting.
    bool unbounded = false;
};

/// One way an endpoint reaches the pathlet substrate: the IXP it can
/// enter at and the one-way access latency to it.
struct AccessPoint {
    NodeId ixp = 0;
    double latency_ms = 0.0;
};

/// An end-to-end connection demand.
struct Request {
    RequestId id = 0;
    std::vector<AccessPoint> src_access;
    std::vector<AccessPoint> dst_access;
    double min_bandwidth = 1.0;
    double max_latency_ms = 0.0;
};

/// A stitched end-to-end path: inter-IXP pathlet edges plus the access
/// legs at both ends. `edge_ids` never contains virtual access edges.
struct Path {
    std::vector<EdgeId> edge_ids;
    double total_latency_ms = 0.0;
    int hop_count = 0;
    AccessPoint access_src{};
    AccessPoint access_dst{};
};

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cxp
