#include "cxp/engine.hpp"

#include "cxp/rng.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <cmath>
#include <numeric>

namespace cxp {

void RunMetrics::finalize() {
    std::uint64_t total = accepted + rejected;
    if (total == 0) {
        acceptance_ratio = 1.0;
        zero_denominator = true;
    } else {
        acceptance_ratio = static_cast<double>(accepted) / static_cast<double>(total);
        zero_denominator = false;
    }
    if (!request_times_us.empty()) {
        mean_time_us = std::accumulate(request_times_us.begin(), request_times_us.end(), 0.0) /
                       static_cast<double>(request_times_us.size());
        std::vector<double> sorted = request_times_us;
        std::sort(sorted.begin(), sorted.end());
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(0.99 * static_cast<double>(sorted.size())));
        rank = std::max<std::size_t>(1, std::min(rank, sorted.size()));
        p99_time_us = sorted[rank - 1];
    }
}

double utilization(const Multigraph& g) {
    double total = g.total_capacity();
    if (total <= 0.0)
        throw GraphError("utilization undefined: zero total capacity");
    return g.occupied_capacity() / total;
}

EmbeddingEngine::EmbeddingEngine(Multigraph graph, EngineConfig config)
    : graph_(std::move(graph)), config_(config) {}

bool EmbeddingEngine::commit(const Request& r, const Path& p) {
    std::vector<std::size_t> indices;
    indices.reserve(p.edge_ids.size());
    for (EdgeId id : p.edge_ids) {
        std::size_t idx = graph_.edge_index(id);
        if (!graph_.edge_at(idx).unbounded &&
            graph_.edge_at(idx).residual_bandwidth + 1e-12 < r.min_bandwidth)
            return false;
        indices.push_back(idx);
    }
    for (std::size_t idx : indices)
        graph_.reserve_bandwidth(idx, r.min_bandwidth);
    reservations_.push_back(Reservation{r, p, r.min_bandwidth});
    return true;
}

bool EmbeddingEngine::try_embed(const Request& r) {
    std::vector<Path> paths;
    try {
        std::mt19937_64 rng = rng_for(config_.seed, r.id);
        paths = sample_paths(graph_, r, config_.algo, config_.k, rng);
    } catch (const std::exception& e) {
        // Sampler failure counts as a rejection; engine state is unchanged.
        std::cerr << "request " << r.id << " rejected, sampler failed: " << e.what() << "\n";
        return false;
    }
    if (paths.empty())
        return false;
    const Path& best = select_best(paths, graph_);
    return commit(r, best);
}

double EmbeddingEngine::current_utilization() const {
    double total = graph_.total_capacity();
    return total > 0.0 ? graph_.occupied_capacity() / total : 0.0;
}

void EmbeddingEngine::swap_reservations(std::span<const std::size_t> remove_indices,
                                        std::vector<Reservation> replacements) {
    // Stage 1: release the removed reservations.
    for (std::size_t idx : remove_indices) {
        const Reservation& res = reservations_[idx];
        for (EdgeId id : res.path.edge_ids)
            graph_.release_bandwidth(graph_.edge_index(id), res.reserved_bandwidth);
    }
    // Stage 2: reserve the replacements; any failure here indicates a
    // solver bug, so restore and rethrow.
    std::vector<std::pair<std::size_t, double>> done;
    try {
        for (const Reservation& res : replacements) {
            for (EdgeId id : res.path.edge_ids) {
                std::size_t idx = graph_.edge_index(id);
                graph_.reserve_bandwidth(idx, res.reserved_bandwidth);
                done.emplace_back(idx, res.reserved_bandwidth);
            }
        }
    } catch (...) {
        for (auto& [idx, amount] : done)
            graph_.release_bandwidth(idx, amount);
        for (std::size_t idx : remove_indices) {
            const Reservation& res = reservations_[idx];
            for (EdgeId id : res.path.edge_ids)
                graph_.reserve_bandwidth(graph_.edge_index(id), res.reserved_bandwidth);
        }
        throw;
    }
    // Stage 3: rewrite the reservation table.
    std::vector<char> removed(reservations_.size(), 0);
    for (std::size_t idx : remove_indices)
        removed[idx] = 1;
    std::vector<Reservation> kept;
    kept.reserve(reservations_.size() - remove_indices.size() + replacements.size());
    for (std::size_t i = 0; i < reservations_.size(); ++i)
        if (!removed[i])
            kept.push_back(std::move(reservations_[i]));
    for (Reservation& res : replacements)
        kept.push_back(std::move(res));
    reservations_ = std::move(kept);
}

RunMetrics run_online(Multigraph graph, std::span<const Request> requests,
                      const EngineConfig& config) {
    EmbeddingEngine engine(std::move(graph), config);
    RunMetrics m;
    m.request_times_us.reserve(requests.size());
    for (const Request& r : requests) {
        auto start = std::chrono::steady_clock::now();
        bool ok = engine.try_embed(r);
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
