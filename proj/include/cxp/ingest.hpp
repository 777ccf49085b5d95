#pragma once

#include "cxp/multigraph.hpp"
#include "cxp/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cxp {

/// Per-file parse outcome: parsers are total, malformed lines become
/// warnings until their share exceeds 10%, which is a hard failure.
struct ParseReport {
    std::size_t parsed_lines = 0;
    std::size_t malformed_lines = 0;
    std::vector<std::string> issues;
};

/// (ixp_id, asn) membership rows, duplicates collapsed.
struct MembershipTable {
    std::vector<std::pair<NodeId, Asn>> rows;

    std::map<NodeId, std::vector<Asn>> members_by_ixp() const;
    std::map<Asn, std::vector<NodeId>> ixps_by_as() const;
};

enum class RelKind : std::uint8_t {
    ProviderToCustomer, // a is provider of b
    PeerToPeer,         // stored with a < b
};

struct AsLink {
    Asn a = 0;
    Asn b = 0;
    RelKind kind = RelKind::PeerToPeer;
};

/// AS relationship graph: p2c directed, p2p undirected, at most one
/// relationship per AS pair.
class AsRelGraph {
public:
    /// Returns false (and changes nothing) if the pair already has a
    /// relationship.
    bool add_link(Asn a, Asn b, RelKind kind);
    bool has_relationship(Asn a, Asn b) const;
    std::optional<RelKind> relationship(Asn a, Asn b) const;

    std::span<const AsLink> links() const { return links_; }
    /// Link indices incident to `as_number` (empty if unknown).
    std::span<const std::uint32_t> incident(Asn as_number) const;
    /// Direct customers of `provider`.
    std::vector<Asn> customers_of(Asn provider) const;
    std::vector<Asn> all_ases() const;

private:
    std::vector<AsLink> links_;
    std::unordered_map<Asn, std::vector<std::uint32_t>> incident_;
    std::unordered_map<std::uint64_t, RelKind> by_pair_;
};

using PrefixCounts = std::unordered_map<Asn, std::uint64_t>;

struct IxpLocation {
    std::string name;
    std::optional<GeoCoord> coord;
};
using LocationTable = std::unordered_map<NodeId, IxpLocation>;

// CSV/text parsers. All accept '#' comments and LF or CRLF endings and
// throw ParseError when more than 10% of data lines are malformed.
MembershipTable parse_membership(std::istream& in, ParseReport* report = nullptr);
AsRelGraph parse_as_relationships(std::istream& in, ParseReport* report = nullptr);
PrefixCounts parse_prefix_counts(std::istream& in, ParseReport* report = nullptr);
LocationTable parse_locations(std::istream& in, ParseReport* report = nullptr);

struct IngestStats {
    std::size_t ixps_in_input = 0;
    std::size_t ixps_dropped_no_addresses = 0;
    /// Edge/node counts of the expanded graph before largest-component
    /// extraction (edge count = sum over ASes of k*(k-1)).
    std::size_t pre_component_nodes = 0;
    std::size_t pre_component_edges = 0;
};

/// Expands membership into the inter-IXP pathlet multigraph: one directed
/// edge per (AS, ordered IXP pair) over the IXPs the AS is present at.
/// IXPs whose members announce no addresses are dropped, as are isolated
/// IXPs; only the largest connected component is retained. Edges start
/// with unit capacity and zero latency (annotation happens later).
Multigraph build_ixp_multigraph(const MembershipTable& membership, const LocationTable& locations,
                                const PrefixCounts& prefix_counts, IngestStats* stats = nullptr);

struct SyntheticParams {
    std::size_t n_ixps = 16;
    std::size_t n_ases = 200;
    /// Pareto tail exponent of the per-AS IXP participation count.
    double participation_alpha = 1.8;
    /// Zipf skew of IXP popularity (which IXPs an AS joins).
    double ixp_popularity_skew = 1.0;
    /// Share of ASes announcing no addresses.
    double zero_prefix_fraction = 0.03;
};

struct SyntheticDataset {
    MembershipTable membership;
    LocationTable locations;
    PrefixCounts prefix_counts;
};

/// Euro-IX-like synthetic dataset: heavy-tailed AS participation so a
/// small share of ASes joins many IXPs. Deterministic under (params, seed).
SyntheticDataset generate_synthetic(const SyntheticParams& params, std::uint64_t seed);

struct EndpointCatalog;

/// Endpoint catalog derived from a dataset: one entry per AS with at
/// least one located member IXP, coordinates at the centroid of its
/// member IXPs.
EndpointCatalog derive_endpoint_catalog(const MembershipTable& membership,
                                        const LocationTable& locations,
                                        const PrefixCounts& prefix_counts);

} // namespace cxp
