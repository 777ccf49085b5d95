#pragma once

#include "cxp/multigraph.hpp"
#include "cxp/types.hpp"

#include <optional>
#include <random>
#include <span>
#include <vector>

namespace cxp {

enum class SampleAlgo {
    PerturbedDijkstra,
    GuidedDijkstra,
    GuidedWalk,
};

const char* to_string(SampleAlgo a);
std::optional<SampleAlgo> sample_algo_from_string(std::string_view s);

/// How a request gets its path candidates: algorithm, paths per request,
/// and the seed all randomized draws are keyed on.
struct SampleConfig {
    SampleAlgo algo = SampleAlgo::PerturbedDijkstra;
    int k = 20;
    std::uint64_t seed = 0;
};

/// Constructive feasibility test: prune by bandwidth and latency, collapse
/// parallel edges to the minimal-latency representative, run a
/// latency-shortest path between the virtual endpoints. Returns the path
/// iff a feasible path exists in g.
std::optional<Path> exists_feasible_path(const Multigraph& g, const Request& r);

/// k latency-shortest paths under an edge-disjointness perturbation:
/// found paths have their edges removed before the next Dijkstra pass.
/// Returns an empty set iff no feasible path exists; the first path is
/// latency-optimal.
std::vector<Path> sample_pd(const Multigraph& g, const Request& r, int k);

/// Random walk guided by minimal remaining distances d_t towards the
/// destination: only neighbors strictly closer to the destination and
/// edges that keep the latency budget reachable are eligible, so every
/// completed walk is a feasible, loop-free path.
std::vector<Path> sample_gw(const Multigraph& g, const Request& r, int k, std::mt19937_64& rng);

/// Dijkstra whose per-neighbor relaxation first filters parallel edges by
/// the look-ahead test (dist + edge latency + d_t(v) <= l_R) and then
/// picks one uniformly at random.
std::vector<Path> sample_gd(const Multigraph& g, const Request& r, int k, std::mt19937_64& rng);

std::vector<Path> sample_paths(const Multigraph& g, const Request& r, SampleAlgo algo, int k,
                               std::mt19937_64& rng);

/// Edge-wise scarcity score within the parallel set E_G(u,v):
///   InvU(e) = (bw(e)/min bw) * (max lat/lat(e)) / |E_G(u,v)|
/// computed on static capacities. High-bandwidth, low-latency edges in
/// rich parallel sets score high and are avoided by selection.
double inverse_utility(const Multigraph& g, EdgeId edge);

/// Selection strategy: strictly fewest hops, then minimal summed inverse
/// utility, then smaller total latency, then lexicographic edge ids.
const Path& select_best(std::span<const Path> paths, const Multigraph& g);

} // namespace cxp
