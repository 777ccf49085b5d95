#pragma once

#include "cxp/engine.hpp"
#include "cxp/latency_model.hpp"
#include "cxp/metrics.hpp"
#include "cxp/multigraph.hpp"
#include "cxp/solver.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cxp {

enum class RunMode { Online, Hybrid, Offline };

const char* to_string(RunMode m);
std::optional<RunMode> run_mode_from_string(std::string_view s);

struct LatencyRange {
    double lo_ms = 200.0;
    double hi_ms = 250.0;
};

/// One sweep: the cross-product of every list dimension times n_runs.
/// Algo "optflow" is valid only for offline mode.
struct ExperimentConfig {
    std::vector<RunMode> modes{RunMode::Online};
    std::vector<std::string> algos{"pd"};
    std::vector<int> sdfs{1};
    std::vector<int> ks{20};
    std::vector<LatencyRange> latency_ranges{LatencyRange{}};
    std::uint64_t n_requests = 1000;
    int n_runs = 10;
    std::uint64_t seed = 1;
    int workers = 1;
    LatencyModelParams latency_model{};
    SolverBudget solver_budget{};
};

/// Primed inputs: an annotated full-scale graph, the endpoint catalog, and
/// the greedy coverage order driving scale-down.
struct ExperimentInputs {
    Multigraph base_graph;
    EndpointCatalog catalog;
    CoverageCurve order;
};

/// Full synthetic pipeline: dataset generation, multigraph expansion,
/// latency annotation, unitary capacities, endpoint catalog, greedy order.
ExperimentInputs make_synthetic_inputs(const SyntheticParams& params, std::uint64_t seed,
                                       const LatencyModelParams& latency_model = {});

struct ResultRow {
    std::size_t run_id = 0;
    std::string mode;
    std::string algo;
    int sdf = 1;
    int k = 20;
    double lat_lo = 0.0;
    double lat_hi = 0.0;
    std::uint64_t n_requests = 0;
    std::uint64_t accepted = 0;
    double acceptance_ratio = 0.0;
    double utilization = 0.0;
    double mean_time_us = 0.0;
    double p99_time_us = 0.0;
    std::uint64_t seed = 0;
};

struct AggregateRow {
    std::string mode;
    std::string algo;
    int sdf = 1;
    int k = 20;
    double lat_lo = 0.0;
    double lat_hi = 0.0;
    std::uint64_t n_requests = 0;
    int n_runs = 0;
    double ar_mean = 0.0, ar_std = 0.0;
    double util_mean = 0.0, util_std = 0.0;
    double time_mean_us = 0.0, time_std_us = 0.0;
};

struct ExperimentReport {
    std::vector<ResultRow> rows;
    std::vector<AggregateRow> aggregates;
};

/// Executes the full sweep on a bounded worker pool; rows come back in
/// deterministic job order regardless of scheduling.
ExperimentReport run_experiment(const ExperimentInputs& inputs, const ExperimentConfig& config);

/// Writes results.csv (per-run rows), aggregates.csv (mean/std rows) and
/// summary.txt (human-readable tables) under out_dir.
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

} // namespace cxp
