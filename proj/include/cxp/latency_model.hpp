#pragma once

#include "cxp/multigraph.hpp"
#include "cxp/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace cxp {

/// Linear RTT-vs-distance model: rtt(d) = a*d + b + X, X ~ N(0, sigma^2).
/// One-way pathlet latency is half the rtt, clamped below at floor_ms.
struct LatencyModelParams {
    double a_ms_per_km = 0.016;
    double b_ms = 26.0;
    double sigma_ms = 14.0;
    double floor_ms = 1.0;
};

/// Great-circle distance on a sphere of radius 6371 km.
double haversine_km(GeoCoord p1, GeoCoord p2);

/// Raw model sample rtt(d) = a*d + b + X, unclamped.
double sample_rtt_ms(const LatencyModelParams& params, double distance_km, std::mt19937_64& rng);

/// One-way pathlet latency: 0.5 * rtt(d), clamped below at floor_ms.
double sample_pathlet_latency(const LatencyModelParams& params, double distance_km,
                              std::mt19937_64& rng);

/// Assigns every real pathlet edge an independent latency sample keyed on
/// (seed, edge id); reruns with the same seed produce identical
/// annotations. Throws GraphError if an edge endpoint has no location.
void annotate_latencies(Multigraph& g, const LatencyModelParams& params, std::uint64_t seed);

/// Sets capacity = residual = c on every real edge (unitary model uses c = 1).
void set_uniform_capacity(Multigraph& g, double c);

struct EndpointEntry {
    Asn asn = 0;
    GeoCoord location{};
    std::uint64_t address_count = 0;
    std::vector<NodeId> member_ixps;
};

/// ASes that can terminate requests: coordinates, announced address
/// weight, and the IXPs where they are present.
struct EndpointCatalog {
    std::vector<EndpointEntry> entries;
};

/// Parses `asn,lat_deg,lon_deg,address_count,ixp_id[;ixp_id...]` lines.
EndpointCatalog parse_endpoint_catalog(std::istream& in);

void write_endpoint_catalog(std::ostream& out, const EndpointCatalog& catalog);

/// Drops member IXPs absent from `g`; removes entries left with no member
/// IXP or zero addresses.
EndpointCatalog filter_catalog(const EndpointCatalog& catalog, const Multigraph& g);

/// Draws `n` requests: endpoint ASes weighted by announced address count,
/// max latency uniform in [lo, hi), unitary bandwidth, access lists from
/// the AS's member IXPs with access latencies sampled from the model over
/// the endpoint-to-IXP distance. IXP coordinates come from `g`; nodes
/// without a location fall back to distance 0.
std::vector<Request> generate_requests(const EndpointCatalog& catalog, const Multigraph& g,
                                       std::size_t n, double latency_lo_ms, double latency_hi_ms,
                                       const LatencyModelParams& params, std::uint64_t seed);

} // namespace cxp
