#pragma once

#include "cxp/multigraph.hpp"
#include "cxp/sampling.hpp"
#include "cxp/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cxp {

/// Committed embedding of one request; reservation and rollback touch all
/// edges of the path or none.
struct Reservation {
    Request request;
    Path path;
    double reserved_bandwidth = 0.0;
};

struct RunMetrics {
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    double acceptance_ratio = 1.0;
    /// True when the stream was empty and the ratio is reported by
    /// convention.
    bool zero_denominator = false;
    double utilization = 0.0;
    double mean_time_us = 0.0;
    double p99_time_us = 0.0;
    std::vector<double> request_times_us;

    /// Fills acceptance_ratio and the time summaries from the raw fields.
    void finalize();
};

/// Occupied share of real pathlet capacity. Throws on zero total capacity.
double utilization(const Multigraph& g);

using EngineConfig = SampleConfig;

/// Online admission core: sample feasible paths on the current residual
/// graph, select one, reserve atomically. Single writer per engine.
class EmbeddingEngine {
public:
    EmbeddingEngine(Multigraph graph, EngineConfig config);

    const Multigraph& graph() const { return graph_; }
    const EngineConfig& config() const { return config_; }
    const std::vector<Reservation>& reservations() const { return reservations_; }

    /// Admits or rejects one request; rejection leaves the graph
    /// bit-identical.
    bool try_embed(const Request& r);

    double current_utilization() const;

    /// Atomic reconfiguration support: releases the listed reservations
    /// and installs the replacements (which may carry new requests).
    /// Indices refer to positions in reservations().
    void swap_reservations(std::span<const std::size_t> remove_indices,
                           std::vector<Reservation> replacements);

private:
    bool commit(const Request& r, const Path& p);

    Multigraph graph_;
    EngineConfig config_;
    std::vector<Reservation> reservations_;
};

/// Sequential admission over the stream; embedded requests persist for the
/// whole run ("infinite" durations).
RunMetrics run_online(Multigraph graph, std::span<const Request> requests,
                      const EngineConfig& config);

} // namespace cxp
