#pragma once

#include "cxp/ingest.hpp"
#include "cxp/multigraph.hpp"
#include "cxp/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Brute-force oracles and fixture builders. Everything here is
// deliberately independent of the library's search code: plain recursive
// enumeration over edge lists.

namespace cxp::testing {

struct EdgeSpec {
    NodeId src;
    NodeId dst;
    double bandwidth = 1.0;
    double latency = 1.0;
    Asn asn = 65000;
};

inline Multigraph make_graph(std::size_t n_nodes, const std::vector<EdgeSpec>& specs) {
    std::vector<IxpNode> nodes;
    for (std::size_t i = 0; i < n_nodes; ++i)
        nodes.push_back(IxpNode{static_cast<NodeId>(i + 1), "n" + std::to_string(i + 1),
                                GeoCoord{0.0, static_cast<double>(i)}});
    std::vector<PathletEdge> edges;
    EdgeId id = 0;
    for (const EdgeSpec& s : specs) {
        PathletEdge e;
        e.id = id++;
        e.src = s.src;
        e.dst = s.dst;
        e.provider_asn = s.asn;
        e.bandwidth = s.bandwidth;
        e.latency_ms = s.latency;
        edges.push_back(e);
    }
    return Multigraph::build(std::move(nodes), std::move(edges));
}

inline Request make_request(NodeId src_ixp, NodeId dst_ixp, double bandwidth, double max_latency,
                            double src_access_lat = 0.0, double dst_access_lat = 0.0) {
    Request r;
    r.id = 7;
    r.src_access = {AccessPoint{src_ixp, src_access_lat}};
    r.dst_access = {AccessPoint{dst_ixp, dst_access_lat}};
    r.min_bandwidth = bandwidth;
    r.max_latency_ms = max_latency;
    return r;
}

struct OraclePath {
    std::vector<EdgeId> edges;
    double total_latency = 0.0;
    AccessPoint access_src{};
    AccessPoint access_dst{};
};

/// Every node-simple path satisfying the request's bandwidth (residual)
/// and latency constraints, across all access-point combinations.
/// Zero-edge paths through a shared access IXP are included.
inline std::vector<OraclePath> oracle_feasible_paths(const Multigraph& g, const Request& r) {
    std::vector<OraclePath> found;

    struct Frame {
        const Multigraph& g;
        const Request& r;
        std::vector<OraclePath>& found;
        AccessPoint src_ap;
        std::vector<char> visited;
        std::vector<EdgeId> chain;

        void dfs(NodeId at, double lat) {
            for (const AccessPoint& dap : r.dst_access) {
                if (dap.ixp == at && lat + dap.latency_ms <= r.max_latency_ms)
                    found.push_back(OraclePath{chain, lat + dap.latency_ms, src_ap, dap});
            }
            visited[g.node_index(at)] = 1;
            for (const PathletEdge& e : g.edges()) {
                if (e.src != at)
                    continue;
                if (!e.unbounded && e.residual_bandwidth < r.min_bandwidth)
                    continue;
                if (visited[g.node_index(e.dst)])
                    continue;
                if (lat + e.latency_ms > r.max_latency_ms)
                    continue;
                chain.push_back(e.id);
                dfs(e.dst, lat + e.latency_ms);
                chain.pop_back();
            }
            visited[g.node_index(at)] = 0;
        }
    };

    for (const AccessPoint& sap : r.src_access) {
        if (!g.has_node(sap.ixp) || sap.latency_ms > r.max_latency_ms)
            continue;
        Frame f{g, r, found, sap, std::vector<char>(g.node_count(), 0), {}};
        f.dfs(sap.ixp, sap.latency_ms);
    }
    return found;
}

inline bool oracle_feasible(const Multigraph& g, const Request& r) {
    return !oracle_feasible_paths(g, r).empty();
}

/// All node-simple directed edge paths src -> dst (no request constraints).
inline std::vector<std::vector<EdgeId>> oracle_all_paths(const Multigraph& g, NodeId src,
                                                         NodeId dst) {
    std::vector<std::vector<EdgeId>> found;
    std::vector<char> visited(g.node_count(), 0);
    std::vector<EdgeId> chain;

    auto dfs = [&](auto&& self, NodeId at) -> void {
        if (at == dst) {
            found.push_back(chain);
            return;
        }
        visited[g.node_index(at)] = 1;
        for (const PathletEdge& e : g.edges()) {
            if (e.src != at || visited[g.node_index(e.dst)])
                continue;
            chain.push_back(e.id);
            self(self, e.dst);
            chain.pop_back();
        }
        visited[g.node_index(at)] = 0;
    };
    dfs(dfs, src);
    return found;
}

/// Maximum number of pairwise edge-disjoint paths from an explicit path
/// list, by exhaustive include/exclude search.
inline int oracle_max_disjoint_packing(const std::vector<std::vector<EdgeId>>& paths) {
    int best = 0;
    std::set<EdgeId> used;

    auto dfs = [&](auto&& self, std::size_t i, int count) -> void {
        best = std::max(best, count);
        if (i >= paths.size() || count + static_cast<int>(paths.size() - i) <= best)
            return;
        bool clash = false;
        for (EdgeId e : paths[i])
            if (used.count(e)) {
                clash = true;
                break;
            }
        if (!clash) {
            for (EdgeId e : paths[i])
                used.insert(e);
            self(self, i + 1, count + 1);
            for (EdgeId e : paths[i])
                used.erase(e);
        }
        self(self, i + 1, count);
    };
    dfs(dfs, 0, 0);
    return best;
}

/// Full validity audit of a sampled path against its request: walk
/// structure, node-simplicity, latency accounting, bandwidth, and access
/// points drawn from the request's lists.
inline void check_path_valid(const Multigraph& g, const Request& r, const Path& p,
                             std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why)
            *why = msg;
        else
            throw std::runtime_error("invalid path: " + msg);
    };

    auto in_list = [](const std::vector<AccessPoint>& list, const AccessPoint& ap) {
        for (const AccessPoint& x : list)
            if (x.ixp == ap.ixp && x.latency_ms == ap.latency_ms)
                return true;
        return false;
    };
    if (!in_list(r.src_access, p.access_src))
        return fail("access_src not in request list");
    if (!in_list(r.dst_access, p.access_dst))
        return fail("access_dst not in request list");

    double lat = p.access_src.latency_ms + p.access_dst.latency_ms;
    NodeId at = p.access_src.ixp;
    std::set<NodeId> seen{at};
    for (EdgeId id : p.edge_ids) {
        const PathletEdge& e = g.edge_by_id(id);
        if (e.src != at)
            return fail("edge chain broken");
        if (!seen.insert(e.dst).second)
            return fail("repeated node");
        if (!e.unbounded && e.residual_bandwidth < r.min_bandwidth)
            return fail("bandwidth violated");
        lat += e.latency_ms;
        at = e.dst;
    }
    if (at != p.access_dst.ixp)
        return fail("path does not reach the destination access IXP");
    if (std::abs(lat - p.total_latency_ms) > 1e-6)
        return fail("latency accounting mismatch");
    if (p.total_latency_ms > r.max_latency_ms)
        return fail("latency bound violated");
    if (p.hop_count != static_cast<int>(p.edge_ids.size()))
        return fail("hop count mismatch");
}

/// Exhaustive assignment oracle: best number of simultaneously embeddable
/// requests over explicit per-request path lists, pruned only by capacity
/// feasibility. Capacities are the edges' full bandwidth.
inline int oracle_best_assignment(const Multigraph& g, const std::vector<Request>& requests,
                                  const std::vector<std::vector<OraclePath>>& paths) {
    std::map<EdgeId, double> residual;
    for (const PathletEdge& e : g.edges())
        residual[e.id] = e.bandwidth;
    int best = 0;

    auto dfs = [&](auto&& self, std::size_t i, int count) -> void {
        if (i == requests.size()) {
            best = std::max(best, count);
            return;
        }
        for (const OraclePath& p : paths[i]) {
            bool ok = true;
            for (EdgeId e : p.edges)
                if (residual[e] < requests[i].min_bandwidth) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            for (EdgeId e : p.edges)
                residual[e] -= requests[i].min_bandwidth;
            self(self, i + 1, count + 1);
            for (EdgeId e : p.edges)
                residual[e] += requests[i].min_bandwidth;
        }
        self(self, i + 1, count);
    };
    dfs(dfs, 0, 0);
    return best;
}

inline Request unit_request(RequestId id, NodeId s, NodeId t, double bound,
                            double access_lat = 1.0) {
    Request r;
    r.id = id;
    r.src_access = {AccessPoint{s, access_lat}};
    r.dst_access = {AccessPoint{t, access_lat}};
    r.min_bandwidth = 1.0;
    r.max_latency_ms = bound;
    return r;
}

inline std::vector<Request> random_unit_requests(std::mt19937_64& rng, std::size_t n,
                                                 std::size_t nodes, double lo, double hi) {
    std::uniform_int_distribution<NodeId> node(1, static_cast<NodeId>(nodes));
    std::uniform_real_distribution<double> bound(lo, hi);
    std::vector<Request> out;
    for (std::size_t i = 0; i < n; ++i) {
        NodeId s = node(rng), t = node(rng);
        while (t == s)
            t = node(rng);
        out.push_back(unit_request(i, s, t, bound(rng)));
    }
    return out;
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_std = 0.0;
};

/// Ordinary least squares y = slope*x + intercept with the residual
/// standard deviation (n-2 denominator).
inline OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / static_cast<double>(n);
    double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += r * r;
    }
    fit.residual_std = std::sqrt(ss / static_cast<double>(n - 2));
    return fit;
}

/// Random multigraph for property sweeps: up to `max_parallel` edges per
/// ordered pair, random capacities and latencies.
inline Multigraph random_multigraph(std::mt19937_64& rng, std::size_t n_nodes, double pair_prob,
                                    int max_parallel, double max_bandwidth = 3.0,
                                    double max_latency = 50.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> parallel(1, max_parallel);
    std::vector<EdgeSpec> specs;
    for (NodeId u = 1; u <= n_nodes; ++u) {
        for (NodeId v = 1; v <= n_nodes; ++v) {
            if (u == v || unit(rng) > pair_prob)
                continue;
            int count = parallel(rng);
            for (int i = 0; i < count; ++i) {
                EdgeSpec s{u, v, 0.0, 0.0, static_cast<Asn>(65000 + i)};
                s.bandwidth = std::floor(unit(rng) * max_bandwidth) + 1.0;
                s.latency = 1.0 + unit(rng) * (max_latency - 1.0);
                specs.push_back(s);
            }
        }
    }
    return make_graph(n_nodes, specs);
}

} // namespace cxp::testing
