#include "cxp/solver.hpp"

#include "cxp/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace cxp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------
// Exact assignment core: pick at most one candidate per request under
// per-edge capacities, maximizing the number of accepted requests.
// Depth-first branch and bound; requests ordered forced-first then by
// candidate count, accept branches before the reject branch, pruned by an
// admissible "individually still embeddable" lookahead bound.
// ---------------------------------------------------------------------

struct CompactCandidate {
    std::vector<std::uint32_t> edges; // dense edge indices, deduplicated
    double demand = 0.0;
    std::uint32_t original_index = 0; // position in the request's path list
};

struct AssignmentProblem {
    std::vector<std::vector<CompactCandidate>> candidates; // per request
    std::vector<char> forced;
    std::vector<double> capacity;
    // Among equal-objective optima, prefer the assignment using the
    // fewest edge slots (reconfiguration churn control). Costs pruning
    // power, so only small instances enable it.
    bool minimize_footprint = false;
};

struct AssignmentResult {
    bool feasible = true;
    bool optimal = true;
    int objective = 0;
    // chosen[i]: candidate slot for request i, -1 = rejected.
    std::vector<std::int32_t> chosen;
    std::uint64_t nodes = 0;
};

class AssignmentSolver {
public:
    AssignmentSolver(const AssignmentProblem& problem, std::uint64_t max_nodes)
        : p_(problem), max_nodes_(max_nodes), residual_(problem.capacity),
          tied_count_(problem.capacity.size(), 0),
          tied_min_demand_(problem.capacity.size(), 0.0) {
        order_.resize(p_.candidates.size());
        std::iota(order_.begin(), order_.end(), 0u);
        std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (p_.forced[a] != p_.forced[b])
                return p_.forced[a] > p_.forced[b];
            return p_.candidates[a].size() < p_.candidates[b].size();
        });
        current_.assign(p_.candidates.size(), -1);
    }

    AssignmentResult solve() {
        AssignmentResult res;
        best_objective_ = -1;
        truncated_ = false;
        nodes_ = 0;
        seed_greedy_incumbent();
        dfs(0, 0);
        res.nodes = nodes_;
        res.optimal = !truncated_;
        if (best_objective_ < 0) {
            // No assignment satisfied every forced request.
            res.feasible = false;
            res.objective = 0;
            res.chosen.assign(p_.candidates.size(), -1);
            return res;
        }
        res.feasible = true;
        res.objective = best_objective_;
        res.chosen = best_;
        return res;
    }

private:
    bool fits(const CompactCandidate& c) const {
        for (std::uint32_t e : c.edges)
            if (residual_[e] + 1e-9 < c.demand)
                return false;
        return true;
    }

    void apply(const CompactCandidate& c, double sign) {
        for (std::uint32_t e : c.edges)
            residual_[e] -= sign * c.demand;
    }

    // First-fit pass to seed the incumbent so pruning bites early; only
    // kept when it satisfies every forced request.
    void seed_greedy_incumbent() {
        std::vector<std::int32_t> chosen(p_.candidates.size(), -1);
        int accepted = 0;
        int footprint = 0;
        for (std::uint32_t req : order_) {
            bool taken = false;
            for (std::size_t ci = 0; ci < p_.candidates[req].size(); ++ci) {
                const CompactCandidate& c = p_.candidates[req][ci];
                if (fits(c)) {
                    apply(c, 1.0);
                    chosen[req] = static_cast<std::int32_t>(ci);
                    ++accepted;
                    footprint += static_cast<int>(c.edges.size());
                    taken = true;
                    break;
                }
            }
            if (!taken && p_.forced[req]) {
                accepted = -1;
                break;
            }
        }
        for (std::size_t req = 0; req < chosen.size(); ++req)
            if (chosen[req] >= 0)
                apply(p_.candidates[req][static_cast<std::size_t>(chosen[req])], -1.0);
        if (accepted > best_objective_) {
            best_objective_ = accepted;
            best_footprint_ = footprint;
            best_ = chosen;
        }
    }

    int current_footprint() const {
        int total = 0;
        for (std::size_t req = 0; req < current_.size(); ++req)
            if (current_[req] >= 0)
                total += static_cast<int>(
                    p_.candidates[req][static_cast<std::size_t>(current_[req])].edges.size());
        return total;
    }

    // Admissible bound: accepted so far plus every remaining request that
    // still has an individually-fitting candidate, tightened by the worst
    // bottleneck edge (requests whose every fitting candidate crosses a
    // saturated edge cannot all be accepted). Returns -1 when a forced
    // remainder cannot fit at all (dead branch).
    int upper_bound(std::size_t depth, int accepted) {
        int fitting = 0;
        touched_.clear();
        for (std::size_t i = depth; i < order_.size(); ++i) {
            std::uint32_t req = order_[i];
            // Mandatory edges: intersection of the edge sets of all
            // fitting candidates.
            bool any = false;
            mandatory_.clear();
            double demand = 0.0;
            for (const CompactCandidate& c : p_.candidates[req]) {
                if (!fits(c))
                    continue;
                demand = c.demand;
                if (!any) {
                    mandatory_.assign(c.edges.begin(), c.edges.end());
                    any = true;
                } else if (!mandatory_.empty()) {
                    scratch_.clear();
                    std::set_intersection(mandatory_.begin(), mandatory_.end(), c.edges.begin(),
                                          c.edges.end(), std::back_inserter(scratch_));
                    mandatory_.swap(scratch_);
                }
                if (mandatory_.empty())
                    break;
            }
            if (!any) {
                if (p_.forced[req])
                    return -1;
                continue;
            }
            ++fitting;
            for (std::uint32_t e : mandatory_) {
                if (tied_count_[e] == 0) {
                    touched_.push_back(e);
                    tied_min_demand_[e] = demand;
                } else {
                    tied_min_demand_[e] = std::min(tied_min_demand_[e], demand);
                }
                ++tied_count_[e];
            }
        }
        int cut = 0;
        for (std::uint32_t e : touched_) {
            int cap = tied_min_demand_[e] > 0.0
                          ? static_cast<int>(std::floor(residual_[e] / tied_min_demand_[e] + 1e-9))
                          : tied_count_[e];
            cut = std::max(cut, tied_count_[e] - std::min(tied_count_[e], cap));
            tied_count_[e] = 0;
        }
        return accepted + fitting - cut;
    }

    void dfs(std::size_t depth, int accepted) {
        if (truncated_)
            return;
        if (++nodes_ > max_nodes_) {
            truncated_ = true;
            return;
        }
        if (depth == order_.size()) {
            int footprint = p_.minimize_footprint ? current_footprint() : 0;
            if (accepted > best_objective_ ||
                (p_.minimize_footprint && accepted == best_objective_ &&
                 footprint < best_footprint_)) {
                best_objective_ = accepted;
                best_footprint_ = footprint;
                best_ = current_;
            }
            return;
        }
        int ub = upper_bound(depth, accepted);
        if (ub < 0 || ub < best_objective_ || (!p_.minimize_footprint && ub == best_objective_))
            return;

        std::uint32_t req = order_[depth];
        for (std::size_t ci = 0; ci < p_.candidates[req].size(); ++ci) {
            const CompactCandidate& c = p_.candidates[req][ci];
            if (!fits(c))
                continue;
            apply(c, 1.0);
            current_[req] = static_cast<std::int32_t>(ci);
            dfs(depth + 1, accepted + 1);
            current_[req] = -1;
            apply(c, -1.0);
            if (truncated_)
                return;
        }
        if (!p_.forced[req])
            dfs(depth + 1, accepted);
    }

    const AssignmentProblem& p_;
    std::uint64_t max_nodes_;
    std::vector<double> residual_;
    std::vector<std::uint32_t> order_;
    std::vector<std::int32_t> current_;
    std::vector<std::int32_t> best_;
    int best_objective_ = -1;
    int best_footprint_ = 0;
    bool truncated_ = false;
    std::uint64_t nodes_ = 0;
    // upper_bound scratch
    std::vector<int> tied_count_;
    std::vector<double> tied_min_demand_;
    std::vector<std::uint32_t> touched_;
    std::vector<std::uint32_t> mandatory_;
    std::vector<std::uint32_t> scratch_;
};

CompactCandidate compact_from_path(const Multigraph& g, const Path& p, double demand,
                                   std::uint32_t original_index) {
    CompactCandidate c;
    c.demand = demand;
    c.original_index = original_index;
    c.edges.reserve(p.edge_ids.size());
    for (EdgeId id : p.edge_ids)
        c.edges.push_back(static_cast<std::uint32_t>(g.edge_index(id)));
    std::sort(c.edges.begin(), c.edges.end());
    c.edges.erase(std::unique(c.edges.begin(), c.edges.end()), c.edges.end());
    return c;
}

SolverSolution run_assignment(const Multigraph& g, std::span<const Request> requests,
                              const std::vector<std::vector<Path>>& candidates,
                              std::span<const double> edge_capacity, const ForcedSet& forced,
                              const SolverBudget& budget, bool enumeration_complete) {
    AssignmentProblem problem;
    problem.minimize_footprint = budget.prefer_minimal_footprint;
    problem.capacity.assign(edge_capacity.begin(), edge_capacity.end());
    problem.forced.resize(requests.size());
    problem.candidates.resize(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        problem.forced[i] = forced.count(requests[i].id) ? 1 : 0;
        problem.candidates[i].reserve(candidates[i].size());
        for (std::uint32_t ci = 0; ci < candidates[i].size(); ++ci)
            problem.candidates[i].push_back(
                compact_from_path(g, candidates[i][ci], requests[i].min_bandwidth, ci));
    }

    AssignmentSolver solver(problem, budget.max_nodes);
    AssignmentResult res = solver.solve();

    SolverSolution out;
    out.feasible = res.feasible;
    out.optimal = res.optimal && enumeration_complete;
    out.objective = res.objective;
    out.nodes_explored = res.nodes;
    out.assignment.resize(requests.size());
    if (res.feasible)
        for (std::size_t i = 0; i < requests.size(); ++i)
            if (res.chosen[i] >= 0)
                out.assignment[i] = candidates[i][static_cast<std::size_t>(res.chosen[i])];
    return out;
}

// ---------------------------------------------------------------------
// Exhaustive feasible-path enumeration for the flow formulation: DFS over
// the augmented graph with visited-node sets, pruned by the minimal
// remaining latency towards the super-sink.
// ---------------------------------------------------------------------

struct Enumerator {
    const Multigraph& ag;
    const AugmentedGraph& aug;
    const Request& r;
    const EdgeMask& allowed;
    const std::vector<double>& dist_to_dst;
    std::uint32_t dst_idx;
    std::uint64_t cap;
    bool complete = true;
    std::vector<Path>* out;
    std::vector<std::uint32_t> chain;
    std::vector<char> visited;

    void dfs(std::uint32_t u, double lat) {
        if (out->size() >= cap) {
            complete = false;
            return;
        }
        if (u == dst_idx) {
            Path p;
            double total = 0.0;
            for (std::uint32_t ei : chain) {
                const PathletEdge& e = ag.edge_at(ei);
                total += e.latency_ms;
                if (aug.is_virtual(e.id)) {
                    if (e.src == aug.super_src)
                        p.access_src = AccessPoint{e.dst, e.latency_ms};
                    else
                        p.access_dst = AccessPoint{e.src, e.latency_ms};
                } else {
                    p.edge_ids.push_back(e.id);
                }
            }
            p.total_latency_ms = total;
            p.hop_count = static_cast<int>(p.edge_ids.size());
            out->push_back(std::move(p));
            return;
        }
        visited[u] = 1;
        for (std::uint32_t ei : ag.out_edges(u)) {
            if (!allowed[ei])
                continue;
            const PathletEdge& e = ag.edge_at(ei);
            std::uint32_t v = static_cast<std::uint32_t>(ag.node_index(e.dst));
            if (visited[v])
                continue;
            double nl = lat + e.latency_ms;
            if (dist_to_dst[v] == kInf || nl + dist_to_dst[v] > r.max_latency_ms)
                continue;
            chain.push_back(ei);
            dfs(v, nl);
            chain.pop_back();
            if (out->size() >= cap) {
                complete = false;
                visited[u] = 0;
                return;
            }
        }
        visited[u] = 0;
    }
};

std::vector<Path> enumerate_feasible_paths(const Multigraph& g, const Request& r,
                                           std::uint64_t cap, bool* complete) {
    AugmentedGraph aug = attach_virtual_endpoints(g, r);
    EdgeMask pruned = prune_by_request(aug.graph, r);
    CollapsedView collapsed = collapse_min_latency(aug.graph, pruned);

    // Reverse Dijkstra for the admissible latency lower bound.
    std::vector<std::vector<CollapsedArc>> rev(aug.graph.node_count());
    for (std::uint32_t u = 0; u < aug.graph.node_count(); ++u)
        for (const CollapsedArc& a : collapsed.out[u])
            rev[a.dst_idx].push_back(CollapsedArc{u, a.edge_idx});
    std::uint32_t dst_idx = static_cast<std::uint32_t>(aug.graph.node_index(aug.super_dst));
    std::vector<double> dist(aug.graph.node_count(), kInf);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[dst_idx] = 0.0;
    heap.emplace(0.0, dst_idx);
    std::vector<char> done(aug.graph.node_count(), 0);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u])
            continue;
        done[u] = 1;
        for (const CollapsedArc& a : rev[u]) {
            double nd = d + aug.graph.edge_at(a.edge_idx).latency_ms;
            if (nd < dist[a.dst_idx]) {
                dist[a.dst_idx] = nd;
                heap.emplace(nd, a.dst_idx);
            }
        }
    }

    std::vector<Path> paths;
    Enumerator en{aug.graph, aug,   r,    pruned, dist, dst_idx, cap, true, &paths, {},
                  std::vector<char>(aug.graph.node_count(), 0)};
    std::uint32_t src_idx = static_cast<std::uint32_t>(aug.graph.node_index(aug.super_src));
    if (dist[src_idx] <= r.max_latency_ms)
        en.dfs(src_idx, 0.0);
    if (complete)
        *complete = en.complete;
    return paths;
}

} // namespace

SolverSolution solve_optflow(const Multigraph& g, std::span<const Request> requests,
                             const ForcedSet& forced, const SolverBudget& budget) {
    // Flow formulation solves against full capacities, not residuals.
    Multigraph zero_load = g;
    zero_load.clear_reservations();

    bool enumeration_complete = true;
    std::vector<std::vector<Path>> candidates(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        bool complete = true;
        candidates[i] =
            enumerate_feasible_paths(zero_load, requests[i], budget.max_paths_per_request, &complete);
        enumeration_complete = enumeration_complete && complete;
    }

    std::vector<double> capacity(zero_load.edge_count());
    for (std::size_t i = 0; i < zero_load.edge_count(); ++i)
        capacity[i] = zero_load.edge_at(i).bandwidth;

    return run_assignment(zero_load, requests, candidates, capacity, forced, budget,
                          enumeration_complete);
}

SolverSolution solve_heurpaths(std::span<const Request> requests,
                               const std::vector<std::vector<Path>>& candidates,
                               const Multigraph& g, std::span<const double> edge_capacity,
                               const ForcedSet& forced, const SolverBudget& budget) {
    if (candidates.size() != requests.size())
        throw SolverError("candidate sets misaligned with requests");
    for (std::size_t i = 0; i < requests.size(); ++i)
        if (forced.count(requests[i].id) && candidates[i].empty())
            throw SolverError("forced request " + std::to_string(requests[i].id) +
                              " has no candidate path");
    return run_assignment(g, requests, candidates, edge_capacity, forced, budget, true);
}

bool reconfigure_and_embed(EmbeddingEngine& engine, const Request& rejected,
                           const SolverBudget& budget) {
    const EngineConfig& cfg = engine.config();

    Multigraph zero_load = engine.graph();
    zero_load.clear_reservations();

    // Stream salts keep reconfiguration draws independent of the online
    // sampling stream.
    auto sample_empty = [&](const Request& r, std::uint64_t salt) {
        std::mt19937_64 rng = rng_for(cfg.seed ^ salt, r.id);
        return sample_paths(zero_load, r, cfg.algo, cfg.k, rng);
    };

    std::vector<Path> rejected_candidates = sample_empty(rejected, 0x5EC0);
    if (rejected_candidates.empty())
        return false; // infeasible even on the empty graph

    // Conflict set: accepted requests whose current path shares an edge
    // with any sampled path of the rejected request.
    std::unordered_set<EdgeId> wanted;
    for (const Path& p : rejected_candidates)
        for (EdgeId id : p.edge_ids)
            wanted.insert(id);
    const auto& reservations = engine.reservations();
    std::vector<std::size_t> conflict_indices;
    for (std::size_t i = 0; i < reservations.size(); ++i) {
        for (EdgeId id : reservations[i].path.edge_ids) {
            if (wanted.count(id)) {
                conflict_indices.push_back(i);
                break;
            }
        }
    }

    // Residual capacities once non-conflicting usage is subtracted.
    const Multigraph& g = engine.graph();
    std::vector<double> capacity(g.edge_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        capacity[i] = g.edge_at(i).bandwidth;
    std::vector<char> conflicting(reservations.size(), 0);
    for (std::size_t i : conflict_indices)
        conflicting[i] = 1;
    for (std::size_t i = 0; i < reservations.size(); ++i) {
        if (conflicting[i])
            continue;
        for (EdgeId id : reservations[i].path.edge_ids)
            capacity[g.edge_index(id)] -= reservations[i].reserved_bandwidth;
    }

    std::vector<Request> instance;
    std::vector<std::vector<Path>> candidates;
    ForcedSet forced;
    for (std::size_t i : conflict_indices) {
        const Request& r = reservations[i].request;
        instance.push_back(r);
        // The current path leads the candidate list so the solver keeps
        // existing placements whenever they still fit; fresh zero-load
        // samples follow.
        std::vector<Path> cand{reservations[i].path};
        for (Path& p : sample_empty(r, 0x5EC1))
            if (p.edge_ids != cand.front().edge_ids ||
                p.access_src.ixp != cand.front().access_src.ixp ||
                p.access_dst.ixp != cand.front().access_dst.ixp)
                cand.push_back(std::move(p));
        candidates.push_back(std::move(cand));
        forced.insert(r.id);
    }
    instance.push_back(rejected);
    candidates.push_back(std::move(rejected_candidates));
    forced.insert(rejected.id);

    SolverSolution sol;
    try {
        SolverBudget reconfig_budget = budget;
        reconfig_budget.prefer_minimal_footprint = true;
        sol = solve_heurpaths(instance, candidates, g, capacity, forced, reconfig_budget);
    } catch (const SolverError&) {
        return false; // a conflicting request lost all its candidates
    }
    if (!sol.feasible)
        return false;

    std::vector<Reservation> replacements;
    replacements.reserve(instance.size());
    for (std::size_t i = 0; i < instance.size(); ++i) {
        if (!sol.assignment[i])
            return false; // forced semantics guarantee this never happens
        replacements.push_back(
            Reservation{instance[i], *sol.assignment[i], instance[i].min_bandwidth});
    }
    engine.swap_reservations(conflict_indices, std::move(replacements));
    return true;
}

RunMetrics run_hybrid(Multigraph graph, std::span<const Request> requests,
                      const EngineConfig& config, const SolverBudget& budget) {
    EmbeddingEngine engine(std::move(graph), config);
    RunMetrics m;
    m.request_times_us.reserve(requests.size());
    for (const Request& r : requests) {
        auto start = std::chrono::steady_clock::now();
        bool ok = engine.try_embed(r);
        if (!ok)
            ok = reconfigure_and_embed(engine, r, budget);
        auto stop = std::chrono::steady_clock::now();
        m.request_times_us.push_back(
            std::chrono::duration<double, std::micro>(stop - start).count());
        if (ok)
            ++m.accepted;
        else
            ++m.rejected;
    }
    m.utilization = engine.current_utilization();
    m.finalize();
    return m;
}

} // namespace cxp
