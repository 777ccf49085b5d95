#include "cxp/ingest.hpp"

#include "cxp/latency_model.hpp"
#include "cxp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>

namespace cxp {

namespace {

std::uint64_t pair_key(Asn a, Asn b) {
    if (a > b)
        std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Line-by-line driver shared by all parsers: strips CR, skips comments and
// blank lines, counts malformed lines and enforces the 10% hard-failure
// threshold.
template <typename LineFn>
void for_each_data_line(std::istream& in, ParseReport* report, const char* what, LineFn&& fn) {
    ParseReport local;
    ParseReport& rep = report ? *report : local;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        ++rep.parsed_lines;
        std::string error;
        if (!fn(line, error)) {
            ++rep.malformed_lines;
            rep.issues.push_back(std::string(what) + " line " + std::to_string(lineno) + ": " +
                                 (error.empty() ? "malformed" : error));
        }
    }
    if (rep.parsed_lines > 0 &&
        static_cast<double>(rep.malformed_lines) > 0.10 * static_cast<double>(rep.parsed_lines))
        throw ParseError(std::string(what) + ": " + std::to_string(rep.malformed_lines) + " of " +
                         std::to_string(rep.parsed_lines) + " lines malformed");
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    if (s.empty())
        return false;
    std::size_t pos = 0;
    try {
        unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size())
            return false;
        out = v;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty())
        return false;
    std::size_t pos = 0;
    try {
        double v = std::stod(s, &pos);
        if (pos != s.size())
            return false;
        out = v;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(s);
    while (std::getline(ss, field, sep))
        out.push_back(field);
    return out;
}

} // namespace

std::map<NodeId, std::vector<Asn>> MembershipTable::members_by_ixp() const {
    std::map<NodeId, std::vector<Asn>> by_ixp;
    for (const auto& [ixp, asn] : rows)
        by_ixp[ixp].push_back(asn);
    for (auto& [ixp, members] : by_ixp)
        std::sort(members.begin(), members.end());
    return by_ixp;
}

std::map<Asn, std::vector<NodeId>> MembershipTable::ixps_by_as() const {
    std::map<Asn, std::vector<NodeId>> by_as;
    for (const auto& [ixp, asn] : rows)
        by_as[asn].push_back(ixp);
    for (auto& [asn, ixps] : by_as)
        std::sort(ixps.begin(), ixps.end());
    return by_as;
}

bool AsRelGraph::add_link(Asn a, Asn b, RelKind kind) {
    if (a == b)
        return false;
    std::uint64_t key = pair_key(a, b);
    if (by_pair_.count(key))
        return false;
    AsLink link;
    if (kind == RelKind::PeerToPeer && a > b)
        std::swap(a, b);
    link.a = a;
    link.b = b;
    link.kind = kind;
    by_pair_.emplace(key, kind);
    std::uint32_t idx = static_cast<std::uint32_t>(links_.size());
    links_.push_back(link);
    incident_[a].push_back(idx);
    incident_[b].push_back(idx);
    return true;
}

bool AsRelGraph::has_relationship(Asn a, Asn b) const {
    return by_pair_.count(pair_key(a, b)) != 0;
}

std::optional<RelKind> AsRelGraph::relationship(Asn a, Asn b) const {
    auto it = by_pair_.find(pair_key(a, b));
    if (it == by_pair_.end())
        return std::nullopt;
    return it->second;
}

std::span<const std::uint32_t> AsRelGraph::incident(Asn as_number) const {
    auto it = incident_.find(as_number);
    if (it == incident_.end())
        return {};
    return it->second;
}

std::vector<Asn> AsRelGraph::customers_of(Asn provider) const {
    std::vector<Asn> out;
    for (std::uint32_t idx : incident(provider)) {
        const AsLink& l = links_[idx];
        if (l.kind == RelKind::ProviderToCustomer && l.a == provider)
            out.push_back(l.b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Asn> AsRelGraph::all_ases() const {
    std::vector<Asn> out;
    out.reserve(incident_.size());
    for (const auto& [asn, _] : incident_)
        out.push_back(asn);
    std::sort(out.begin(), out.end());
    return out;
}

MembershipTable parse_membership(std::istream& in, ParseReport* report) {
    MembershipTable table;
    std::set<std::pair<NodeId, Asn>> seen;
    for_each_data_line(in, report, "membership", [&](const std::string& line, std::string& err) {
        auto fields = split(line, ',');
        std::uint64_t ixp = 0, asn = 0;
        if (fields.size() != 2 || !parse_u64(fields[0], ixp) || !parse_u64(fields[1], asn)) {
            err = "expected `ixp_id,asn`";
            return false;
        }
        auto row = std::make_pair(static_cast<NodeId>(ixp), static_cast<Asn>(asn));
        if (seen.insert(row).second)
            table.rows.push_back(row);
        return true;
    });
    return table;
}

AsRelGraph parse_as_relationships(std::istream& in, ParseReport* report) {
    AsRelGraph graph;
    for_each_data_line(in, report, "as_rel", [&](const std::string& line, std::string& err) {
        auto fields = split(line, '|');
        std::uint64_t a = 0, b = 0;
        if (fields.size() < 3 || !parse_u64(fields[0], a) || !parse_u64(fields[1], b)) {
            err = "expected `as1|as2|rel`";
            return false;
        }
        if (a == b) {
            err = "self relationship";
            return false;
        }
        RelKind kind;
        if (fields[2] == "-1")
            kind = RelKind::ProviderToCustomer;
        else if (fields[2] == "0")
            kind = RelKind::PeerToPeer;
        else {
            err = "rel must be -1 or 0";
            return false;
        }
        // Exact duplicates collapse silently; a conflicting second
        // relationship for the same pair is malformed.
        auto existing = graph.relationship(static_cast<Asn>(a), static_cast<Asn>(b));
        if (existing) {
            if (*existing != kind) {
                err = "conflicting relationship for pair";
                return false;
            }
            if (kind == RelKind::ProviderToCustomer) {
                // Same kind but possibly reversed roles.
                for (std::uint32_t idx : graph.incident(static_cast<Asn>(a))) {
                    const AsLink& l = graph.links()[idx];
                    if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) {
                        if (l.a != static_cast<Asn>(a)) {
                            err = "conflicting provider direction for pair";
                            return false;
                        }
                        break;
                    }
                }
            }
            return true;
        }
        graph.add_link(static_cast<Asn>(a), static_cast<Asn>(b), kind);
        return true;
    });
    return graph;
}

PrefixCounts parse_prefix_counts(std::istream& in, ParseReport* report) {
    PrefixCounts counts;
    for_each_data_line(in, report, "prefix_counts", [&](const std::string& line, std::string& err) {
        auto fields = split(line, ',');
        std::uint64_t asn = 0, count = 0;
        if (fields.size() != 2 || !parse_u64(fields[0], asn) || !parse_u64(fields[1], count)) {
            err = "expected `asn,ipv4_address_count`";
            return false;
        }
        counts[static_cast<Asn>(asn)] += count;
        return true;
    });
    return counts;
}

LocationTable parse_locations(std::istream& in, ParseReport* report) {
    LocationTable table;
    for_each_data_line(in, report, "locations", [&](const std::string& line, std::string& err) {
        auto fields = split(line, ',');
        std::uint64_t ixp = 0;
        double lat = 0.0, lon = 0.0;
        if (fields.size() != 4 || !parse_u64(fields[0], ixp) || !parse_double(fields[2], lat) ||
            !parse_double(fields[3], lon)) {
            err = "expected `ixp_id,name,lat_deg,lon_deg`";
            return false;
        }
        if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
            err = "coordinates out of range";
            return false;
        }
        table[static_cast<NodeId>(ixp)] = IxpLocation{fields[1], GeoCoord{lat, lon}};
        return true;
    });
    return table;
}

Multigraph build_ixp_multigraph(const MembershipTable& membership, const LocationTable& locations,
                                const PrefixCounts& prefix_counts, IngestStats* stats) {
    auto by_ixp = membership.members_by_ixp();
    IngestStats local;
    IngestStats& st = stats ? *stats : local;
    st.ixps_in_input = by_ixp.size();

    // Keep IXPs with at least one member announcing addresses.
    std::set<NodeId> kept;
    for (const auto& [ixp, members] : by_ixp) {
        bool any_addresses = false;
        for (Asn asn : members) {
            auto it = prefix_counts.find(asn);
            if (it != prefix_counts.end() && it->second > 0) {
                any_addresses = true;
                break;
            }
        }
        if (any_addresses)
            kept.insert(ixp);
        else
            ++st.ixps_dropped_no_addresses;
    }

    // One directed edge per (AS, ordered pair of its kept IXPs).
    std::vector<PathletEdge> edges;
    std::set<NodeId> connected;
    EdgeId next_edge = 0;
    for (const auto& [asn, ixps] : membership.ixps_by_as()) {
        std::vector<NodeId> present;
        for (NodeId ixp : ixps)
            if (kept.count(ixp))
                present.push_back(ixp);
        if (present.size() < 2)
            continue;
        for (NodeId u : present) {
            for (NodeId v : present) {
                if (u == v)
                    continue;
                PathletEdge e;
                e.id = next_edge++;
                e.src = u;
                e.dst = v;
                e.provider_asn = asn;
                e.bandwidth = 1.0;
                e.latency_ms = 0.0;
                edges.push_back(e);
                connected.insert(u);
                connected.insert(v);
            }
        }
    }
    st.pre_component_nodes = connected.size();
    st.pre_component_edges = edges.size();
    if (connected.empty())
        throw GraphError("membership produced an empty multigraph");

    // Largest connected component (undirected sense); ties broken by the
    // component containing the smallest node id.
    std::map<NodeId, std::uint32_t> comp;
    std::uint32_t n_comp = 0;
    {
        std::map<NodeId, std::vector<NodeId>> adj;
        for (const PathletEdge& e : edges) {
            adj[e.src].push_back(e.dst);
            adj[e.dst].push_back(e.src);
        }
        for (NodeId start : connected) {
            if (comp.count(start))
                continue;
            std::vector<NodeId> stack{start};
            comp[start] = n_comp;
            while (!stack.empty()) {
                NodeId u = stack.back();
                stack.pop_back();
                for (NodeId v : adj[u]) {
                    if (!comp.count(v)) {
                        comp[v] = n_comp;
                        stack.push_back(v);
                    }
                }
            }
            ++n_comp;
        }
    }
    std::vector<std::size_t> comp_size(n_comp, 0);
    for (const auto& [node, c] : comp)
        ++comp_size[c];
    std::uint32_t largest = 0;
    for (std::uint32_t c = 1; c < n_comp; ++c)
        if (comp_size[c] > comp_size[largest])
            largest = c;

    std::vector<IxpNode> nodes;
    for (const auto& [node, c] : comp) {
        if (c != largest)
            continue;
        IxpNode n;
        n.id = node;
        auto it = locations.find(node);
        if (it != locations.end()) {
            n.name = it->second.name;
            n.location = it->second.coord;
        } else {
            n.name = "ixp-" + std::to_string(node);
        }
        nodes.push_back(std::move(n));
    }
    std::vector<PathletEdge> kept_edges;
    EdgeId renumber = 0;
    for (PathletEdge& e : edges) {
        if (comp.at(e.src) != largest || comp.at(e.dst) != largest)
            continue;
        e.id = renumber++;
        kept_edges.push_back(e);
    }
    if (kept_edges.empty())
        throw GraphError("largest component has no edges");
    return Multigraph::build(std::move(nodes), std::move(kept_edges));
}

EndpointCatalog derive_endpoint_catalog(const MembershipTable& membership,
                                        const LocationTable& locations,
                                        const PrefixCounts& prefix_counts) {
    EndpointCatalog catalog;
    for (const auto& [asn, ixps] : membership.ixps_by_as()) {
        EndpointEntry entry;
        entry.asn = asn;
        double lat = 0.0, lon = 0.0;
        std::size_t located = 0;
        for (NodeId ixp : ixps) {
            auto it = locations.find(ixp);
            if (it != locations.end() && it->second.coord) {
                lat += it->second.coord->lat_deg;
                lon += it->second.coord->lon_deg;
                ++located;
            }
        }
        if (located == 0)
            continue;
        entry.location = GeoCoord{lat / static_cast<double>(located),
                                  lon / static_cast<double>(located)};
        entry.member_ixps = ixps;
        auto pc = prefix_counts.find(asn);
        entry.address_count = pc == prefix_counts.end() ? 0 : pc->second;
        catalog.entries.push_back(std::move(entry));
    }
    return catalog;
}

SyntheticDataset generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
    if (params.n_ixps < 2)
        throw GraphError("synthetic dataset needs at least 2 IXPs");
    if (params.n_ases < 1)
        throw GraphError("synthetic dataset needs at least 1 AS");
    if (params.participation_alpha <= 0.0 || params.ixp_popularity_skew < 0.0 ||
        params.zero_prefix_fraction < 0.0 || params.zero_prefix_fraction > 1.0)
        throw GraphError("invalid synthetic distribution parameters");

    SyntheticDataset ds;

    std::mt19937_64 loc_rng = rng_for(seed, 0xA001);
    std::uniform_real_distribution<double> lat_dist(-55.0, 65.0);
    std::uniform_real_distribution<double> lon_dist(-170.0, 170.0);
    for (std::size_t i = 0; i < params.n_ixps; ++i) {
        NodeId id = static_cast<NodeId>(i + 1);
        double lat = lat_dist(loc_rng);
        double lon = lon_dist(loc_rng);
        ds.locations[id] = IxpLocation{"ixp" + std::to_string(id), GeoCoord{lat, lon}};
    }

    // Zipf-like popularity: low ids are the big, attractive IXPs.
    std::vector<double> popularity(params.n_ixps);
    for (std::size_t i = 0; i < params.n_ixps; ++i)
        popularity[i] = 1.0 / std::pow(static_cast<double>(i + 1), params.ixp_popularity_skew);

    std::set<std::pair<NodeId, Asn>> seen;
    for (std::size_t a = 0; a < params.n_ases; ++a) {
        Asn asn = static_cast<Asn>(64512 + a);
        std::mt19937_64 rng = rng_for(seed, 0xB000'0000ULL + a);

        // Participation count: discretized Pareto tail, truncated at n_ixps.
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double u = unif(rng);
        double x = std::pow(1.0 - u, -1.0 / params.participation_alpha);
        std::size_t k = static_cast<std::size_t>(
            std::min(static_cast<double>(params.n_ixps), std::floor(x)));
        k = std::max<std::size_t>(1, k);

        std::vector<double> weights = popularity;
        std::vector<NodeId> chosen;
        for (std::size_t pick = 0; pick < k; ++pick) {
            std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
            std::size_t idx = dist(rng);
            weights[idx] = 0.0;
            chosen.push_back(static_cast<NodeId>(idx + 1));
        }
        for (NodeId ixp : chosen) {
            auto row = std::make_pair(ixp, asn);
            if (seen.insert(row).second)
                ds.membership.rows.push_back(row);
        }

        double zero_draw = unif(rng);
        if (zero_draw < params.zero_prefix_fraction) {
            ds.prefix_counts[asn] = 0;
        } else {
            // Heavy-tailed address space, roughly /24 .. /8 scale.
            double body = std::pow(1.0 - unif(rng), -1.0 / 1.1);
            ds.prefix_counts[asn] =
                static_cast<std::uint64_t>(std::min(16'777'216.0, 256.0 * body));
        }
    }
    std::sort(ds.membership.rows.begin(), ds.membership.rows.end());
    return ds;
}

} // namespace cxp
