#include "cxp/latency_model.hpp"

#include "cxp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace cxp {

namespace {

constexpr double kEarthRadiusKm = 6371.0;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

} // namespace

double haversine_km(GeoCoord p1, GeoCoord p2) {
    double lat1 = deg2rad(p1.lat_deg);
    double lat2 = deg2rad(p2.lat_deg);
    double dlat = lat2 - lat1;
    double dlon = deg2rad(p2.lon_deg - p1.lon_deg);
    double s = std::sin(dlat / 2.0);
    double t = std::sin(dlon / 2.0);
    double h = s * s + std::cos(lat1) * std::cos(lat2) * t * t;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double sample_rtt_ms(const LatencyModelParams& params, double distance_km, std::mt19937_64& rng) {
    double noise = 0.0;
    if (params.sigma_ms > 0.0) {
        std::normal_distribution<double> dist(0.0, params.sigma_ms);
        noise = dist(rng);
    }
    return params.a_ms_per_km * distance_km + params.b_ms + noise;
}

double sample_pathlet_latency(const LatencyModelParams& params, double distance_km,
                              std::mt19937_64& rng) {
    return std::max(params.floor_ms, 0.5 * sample_rtt_ms(params, distance_km, rng));
}

void annotate_latencies(Multigraph& g, const LatencyModelParams& params, std::uint64_t seed) {
    std::vector<GeoCoord> coords(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const IxpNode& n = g.node_at(i);
        if (!n.location)
            throw GraphError("node " + std::to_string(n.id) + " has no location");
        coords[i] = *n.location;
    }
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const PathletEdge& e = g.edge_at(i);
        if (e.unbounded)
            continue;
        double d = haversine_km(coords[g.node_index(e.src)], coords[g.node_index(e.dst)]);
        std::mt19937_64 rng = rng_for(seed, e.id);
        g.set_latency(i, sample_pathlet_latency(params, d, rng));
    }
}

void set_uniform_capacity(Multigraph& g, double c) {
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        if (!g.edge_at(i).unbounded)
            g.set_capacity(i, c);
}

EndpointCatalog parse_endpoint_catalog(std::istream& in) {
    EndpointCatalog catalog;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string asn_s, lat_s, lon_s, count_s, ixps_s;
        if (!std::getline(ls, asn_s, ',') || !std::getline(ls, lat_s, ',') ||
            !std::getline(ls, lon_s, ',') || !std::getline(ls, count_s, ',') ||
            !std::getline(ls, ixps_s))
            throw ParseError("endpoint catalog line " + std::to_string(lineno) + ": expected 5 fields");
        EndpointEntry entry;
        try {
            entry.asn = static_cast<Asn>(std::stoul(asn_s));
            entry.location.lat_deg = std::stod(lat_s);
            entry.location.lon_deg = std::stod(lon_s);
            entry.address_count = std::stoull(count_s);
        } catch (const std::exception&) {
            throw ParseError("endpoint catalog line " + std::to_string(lineno) + ": bad number");
        }
        std::istringstream ms(ixps_s);
        std::string ixp_s;
        while (std::getline(ms, ixp_s, ';')) {
            if (ixp_s.empty())
                continue;
            try {
                entry.member_ixps.push_back(static_cast<NodeId>(std::stoul(ixp_s)));
            } catch (const std::exception&) {
                throw ParseError("endpoint catalog line " + std::to_string(lineno) + ": bad IXP id");
            }
        }
        if (entry.member_ixps.empty())
            throw ParseError("endpoint catalog line " + std::to_string(lineno) + ": no member IXPs");
        catalog.entries.push_back(std::move(entry));
    }
    return catalog;
}

void write_endpoint_catalog(std::ostream& out, const EndpointCatalog& catalog) {
    for (const EndpointEntry& e : catalog.entries) {
        out << e.asn << ',' << e.location.lat_deg << ',' << e.location.lon_deg << ','
            << e.address_count << ',';
        for (std::size_t i = 0; i < e.member_ixps.size(); ++i) {
            if (i)
                out << ';';
            out << e.member_ixps[i];
        }
        out << '\n';
    }
}

EndpointCatalog filter_catalog(const EndpointCatalog& catalog, const Multigraph& g) {
    EndpointCatalog out;
    for (const EndpointEntry& e : catalog.entries) {
        EndpointEntry kept = e;
        kept.member_ixps.clear();
        for (NodeId ixp : e.member_ixps)
            if (g.has_node(ixp))
                kept.member_ixps.push_back(ixp);
        if (!kept.member_ixps.empty() && kept.address_count > 0)
            out.entries.push_back(std::move(kept));
    }
    return out;
}

std::vector<Request> generate_requests(const EndpointCatalog& catalog, const Multigraph& g,
                                       std::size_t n, double latency_lo_ms, double latency_hi_ms,
                                       const LatencyModelParams& params, std::uint64_t seed) {
    if (catalog.entries.empty())
        throw GraphError("empty endpoint catalog");
    if (!(latency_lo_ms < latency_hi_ms))
        throw GraphError("invalid latency range");

    std::vector<double> weights;
    weights.reserve(catalog.entries.size());
    double total = 0.0;
    for (const EndpointEntry& e : catalog.entries) {
        weights.push_back(static_cast<double>(e.address_count));
        total += static_cast<double>(e.address_count);
    }
    if (total <= 0.0)
        throw GraphError("endpoint catalog has all-zero address counts");

    auto ixp_distance_km = [&](GeoCoord from, NodeId ixp) {
        if (!g.has_node(ixp))
            return 0.0;
        const IxpNode& node = g.node_at(g.node_index(ixp));
        return node.location ? haversine_km(from, *node.location) : 0.0;
    };

    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::vector<Request> requests;
    requests.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::mt19937_64 rng = rng_for(seed, i);
        const EndpointEntry& src = catalog.entries[pick(rng)];
        const EndpointEntry& dst = catalog.entries[pick(rng)];

        Request r;
        r.id = static_cast<RequestId>(i);
        r.min_bandwidth = 1.0;
        std::uniform_real_distribution<double> lat(latency_lo_ms, latency_hi_ms);
        r.max_latency_ms = lat(rng);
        for (NodeId ixp : src.member_ixps)
            r.src_access.push_back(AccessPoint{
                ixp, sample_pathlet_latency(params, ixp_distance_km(src.location, ixp), rng)});
        for (NodeId ixp : dst.member_ixps)
            r.dst_access.push_back(AccessPoint{
                ixp, sample_pathlet_latency(params, ixp_distance_km(dst.location, ixp), rng)});
        requests.push_back(std::move(r));
    }
    return requests;
}

} // namespace cxp
