#pragma once

#include "cxp/engine.hpp"
#include "cxp/multigraph.hpp"
#include "cxp/sampling.hpp"
#include "cxp/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

namespace cxp {

struct SolverBudget {
    /// Branch-and-bound node limit; exceeding it yields the incumbent with
    /// optimal = false.
    std::uint64_t max_nodes = 20'000'000;
    /// Cap on exhaustive path enumeration per request (flow formulation).
    std::uint64_t max_paths_per_request = 2'000'000;
    /// Among equal-objective optima prefer the fewest edge slots; meant
    /// for small reconfiguration instances (weakens pruning).
    bool prefer_minimal_footprint = false;
};

/// Result of an offline solve. `assignment[i]` is the chosen path of
/// requests[i] or empty when rejected.
struct SolverSolution {
    bool feasible = true;
    bool optimal = true;
    int objective = 0;
    std::vector<std::optional<Path>> assignment;
    std::uint64_t nodes_explored = 0;
};

using ForcedSet = std::unordered_set<RequestId>;

/// Exact flow formulation: maximize accepted requests over all simple
/// paths, full edge capacities, forced requests pinned to accepted.
/// Optimality is guaranteed at desk scale (exhaustive path enumeration
/// followed by exact assignment search); larger instances may trip the
/// budget and report optimal = false.
SolverSolution solve_optflow(const Multigraph& g, std::span<const Request> requests,
                             const ForcedSet& forced = {}, const SolverBudget& budget = {});

/// Path formulation: at most one candidate path per request, capacities
/// respected, forced requests accepted; exact branch-and-bound.
/// `edge_capacity` is indexed by dense edge index of g.
SolverSolution solve_heurpaths(std::span<const Request> requests,
                               const std::vector<std::vector<Path>>& candidates,
                               const Multigraph& g, std::span<const double> edge_capacity,
                               const ForcedSet& forced = {}, const SolverBudget& budget = {});

/// Reconfiguration fallback for a just-rejected request: sample paths on
/// the zero-load graph, collect accepted requests conflicting with any of
/// them, and re-embed conflict set plus the rejected request with all
/// forced. On success the engine swaps reservations atomically and admits
/// the request; on failure nothing changes.
bool reconfigure_and_embed(EmbeddingEngine& engine, const Request& rejected,
                           const SolverBudget& budget = {});

/// Online loop with reconfiguration as rejection fallback.
RunMetrics run_hybrid(Multigraph graph, std::span<const Request> requests,
                      const EngineConfig& config, const SolverBudget& budget = {});

} // namespace cxp
