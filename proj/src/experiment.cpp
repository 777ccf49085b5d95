#include "cxp/experiment.hpp"

#include "cxp/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace cxp {

namespace {

struct Job {
    std::size_t run_id;
    RunMode mode;
    std::string algo;
    int sdf;
    int k;
    LatencyRange range;
    std::size_t sdf_slot;
    std::size_t range_slot;
    int run;
};

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2)
        return 0.0;
    double acc = 0.0;
    for (double x : xs)
        acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

ResultRow execute_job(const Job& job, const Multigraph& graph, const EndpointCatalog& catalog,
                      const ExperimentConfig& config) {
    ResultRow row;
    row.run_id = job.run_id;
    row.mode = to_string(job.mode);
    row.algo = job.algo;
    row.sdf = job.sdf;
    row.k = job.k;
    row.lat_lo = job.range.lo_ms;
    row.lat_hi = job.range.hi_ms;
    row.n_requests = config.n_requests;

    // Requests depend on (seed, sdf, range, run) only, so algorithms and
    // k values see identical streams and stay comparable.
    std::uint64_t request_seed =
        mix64(config.seed ^ mix64(0x100 + job.sdf_slot) ^ mix64(0x200 + job.range_slot) ^
              mix64(0x300 + static_cast<std::uint64_t>(job.run)));
    row.seed = request_seed;
    std::vector<Request> requests =
        generate_requests(catalog, graph, config.n_requests, job.range.lo_ms, job.range.hi_ms,
                          config.latency_model, request_seed);

    std::uint64_t engine_seed = mix64(request_seed ^ 0xE11);

    RunMetrics metrics;
    if (job.mode == RunMode::Offline) {
        auto start = std::chrono::steady_clock::now();
        Multigraph zero_load = graph;
        zero_load.clear_reservations();
        SolverSolution sol;
        if (job.algo == "optflow") {
            sol = solve_optflow(zero_load, requests, {}, config.solver_budget);
        } else {
            SampleAlgo algo = *sample_algo_from_string(job.algo);
            std::vector<std::vector<Path>> candidates(requests.size());
            for (std::size_t i = 0; i < requests.size(); ++i) {
                std::mt19937_64 rng = rng_for(engine_seed, requests[i].id);
                candidates[i] = sample_paths(zero_load, requests[i], algo, job.k, rng);
            }
            std::vector<double> capacity(zero_load.edge_count());
            for (std::size_t i = 0; i < zero_load.edge_count(); ++i)
                capacity[i] = zero_load.edge_at(i).bandwidth;
            sol = solve_heurpaths(requests, candidates, zero_load, capacity, {},
                                  config.solver_budget);
        }
        auto stop = std::chrono::steady_clock::now();
        metrics.accepted = static_cast<std::uint64_t>(sol.objective);
        metrics.rejected = requests.size() - metrics.accepted;
        double occupied = 0.0;
        for (std::size_t i = 0; i < requests.size(); ++i)
            if (sol.assignment[i])
                occupied += requests[i].min_bandwidth *
                            static_cast<double>(sol.assignment[i]->edge_ids.size());
        double total = zero_load.total_capacity();
        metrics.utilization = total > 0.0 ? occupied / total : 0.0;
        double per_request_us =
            std::chrono::duration<double, std::micro>(stop - start).count() /
            std::max<double>(1.0, static_cast<double>(requests.size()));
        metrics.request_times_us.assign(requests.size(), per_request_us);
        metrics.finalize();
    } else {
        EngineConfig ec;
        ec.algo = *sample_algo_from_string(job.algo);
        ec.k = job.k;
        ec.seed = engine_seed;
        metrics = job.mode == RunMode::Online
                      ? run_online(graph, requests, ec)
                      : run_hybrid(graph, requests, ec, config.solver_budget);
    }

    row.accepted = metrics.accepted;
    row.acceptance_ratio = metrics.acceptance_ratio;
    row.utilization = metrics.utilization;
    row.mean_time_us = metrics.mean_time_us;
    row.p99_time_us = metrics.p99_time_us;
    return row;
}

} // namespace

ExperimentInputs make_synthetic_inputs(const SyntheticParams& params, std::uint64_t seed,
                                       const LatencyModelParams& latency_model) {
    SyntheticDataset ds = generate_synthetic(params, seed);
    ExperimentInputs inputs;
    inputs.base_graph = build_ixp_multigraph(ds.membership, ds.locations, ds.prefix_counts);
    set_uniform_capacity(inputs.base_graph, 1.0);
    annotate_latencies(inputs.base_graph, latency_model, mix64(seed ^ 0x1A7));
    inputs.catalog = derive_endpoint_catalog(ds.membership, ds.locations, ds.prefix_counts);
    inputs.order = greedy_coverage_order(ds.membership, ds.prefix_counts, AsRelGraph{});
    return inputs;
}

const char* to_string(RunMode m) {
    switch (m) {
    case RunMode::Online:
        return "online";
    case RunMode::Hybrid:
        return "hybrid";
    case RunMode::Offline:
        return "offline";
    }
    return "?";
}

std::optional<RunMode> run_mode_from_string(std::string_view s) {
    if (s == "online")
        return RunMode::Online;
    if (s == "hybrid")
        return RunMode::Hybrid;
    if (s == "offline")
        return RunMode::Offline;
    return std::nullopt;
}

ExperimentReport run_experiment(const ExperimentInputs& inputs, const ExperimentConfig& config) {
    if (config.modes.empty() || config.algos.empty() || config.sdfs.empty() ||
        config.ks.empty() || config.latency_ranges.empty())
        throw GraphError("experiment config has an empty dimension");
    if (config.n_runs < 1)
        throw GraphError("n_runs must be >= 1");
    for (const std::string& algo : config.algos) {
        bool is_sampler = sample_algo_from_string(algo).has_value();
        if (!is_sampler && algo != "optflow")
            throw GraphError("unknown algorithm `" + algo + "`");
        if (algo == "optflow")
            for (RunMode m : config.modes)
                if (m != RunMode::Offline)
                    throw GraphError("algorithm `optflow` is only valid in offline mode");
    }

    // Scaled graphs and filtered catalogs, one per SDF.
    std::vector<Multigraph> graphs;
    std::vector<EndpointCatalog> catalogs;
    graphs.reserve(config.sdfs.size());
    for (int sdf : config.sdfs) {
        Multigraph scaled = sdf == 1 ? inputs.base_graph : scale_down(inputs.base_graph, inputs.order, sdf);
        catalogs.push_back(filter_catalog(inputs.catalog, scaled));
        if (catalogs.back().entries.empty())
            throw GraphError("no endpoint AS remains at SDF " + std::to_string(sdf));
        graphs.push_back(std::move(scaled));
    }

    std::vector<Job> jobs;
    std::size_t run_id = 0;
    for (RunMode mode : config.modes)
        for (const std::string& algo : config.algos)
            for (std::size_t si = 0; si < config.sdfs.size(); ++si)
                for (int k : config.ks)
                    for (std::size_t ri = 0; ri < config.latency_ranges.size(); ++ri)
                        for (int run = 0; run < config.n_runs; ++run)
                            jobs.push_back(Job{run_id++, mode, algo, config.sdfs[si], k,
                                               config.latency_ranges[ri], si, ri, run});

    std::vector<ResultRow> rows(jobs.size());
    int workers = std::max(1, config.workers);
    if (workers == 1) {
        for (const Job& job : jobs)
            rows[job.run_id] = execute_job(job, graphs[job.sdf_slot], catalogs[job.sdf_slot], config);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= jobs.size())
                    return;
                rows[jobs[i].run_id] =
                    execute_job(jobs[i], graphs[jobs[i].sdf_slot], catalogs[jobs[i].sdf_slot], config);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }

    // Aggregates in job-definition order.
    ExperimentReport report;
    report.rows = std::move(rows);
    std::size_t idx = 0;
    for (RunMode mode : config.modes) {
        for (const std::string& algo : config.algos) {
            for (std::size_t si = 0; si < config.sdfs.size(); ++si) {
                for (int k : config.ks) {
                    for (std::size_t ri = 0; ri < config.latency_ranges.size(); ++ri) {
                        std::vector<double> ar, util, time;
                        for (int run = 0; run < config.n_runs; ++run, ++idx) {
                            ar.push_back(report.rows[idx].acceptance_ratio);
                            util.push_back(report.rows[idx].utilization);
                            time.push_back(report.rows[idx].mean_time_us);
                        }
                        AggregateRow agg;
                        agg.mode = to_string(mode);
                        agg.algo = algo;
                        agg.sdf = config.sdfs[si];
                        agg.k = k;
                        agg.lat_lo = config.latency_ranges[ri].lo_ms;
                        agg.lat_hi = config.latency_ranges[ri].hi_ms;
                        agg.n_requests = config.n_requests;
                        agg.n_runs = config.n_runs;
                        auto mean = [](const std::vector<double>& xs) {
                            double s = 0.0;
                            for (double x : xs)
                                s += x;
                            return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
                        };
                        agg.ar_mean = mean(ar);
                        agg.ar_std = sample_std(ar, agg.ar_mean);
                        agg.util_mean = mean(util);
                        agg.util_std = sample_std(util, agg.util_mean);
                        agg.time_mean_us = mean(time);
                        agg.time_std_us = sample_std(time, agg.time_mean_us);
                        report.aggregates.push_back(std::move(agg));
                    }
                }
            }
        }
    }
    return report;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::ofstream results(out_dir / "results.csv");
    if (!results)
        throw ParseError("cannot write " + (out_dir / "results.csv").string());
    results << "run_id,mode,algo,sdf,k,lat_lo,lat_hi,n_requests,accepted,acceptance_ratio,"
               "utilization,mean_time_us,p99_time_us,seed\n";
    results << std::fixed;
    for (const ResultRow& r : report.rows) {
        results << r.run_id << ',' << r.mode << ',' << r.algo << ',' << r.sdf << ',' << r.k << ','
                << std::setprecision(3) << r.lat_lo << ',' << r.lat_hi << ',' << r.n_requests
                << ',' << r.accepted << ',' << std::setprecision(6) << r.acceptance_ratio << ','
                << r.utilization << ',' << std::setprecision(3) << r.mean_time_us << ','
                << r.p99_time_us << ',' << r.seed << '\n';
    }

    std::ofstream aggs(out_dir / "aggregates.csv");
    if (!aggs)
        throw ParseError("cannot write " + (out_dir / "aggregates.csv").string());
    aggs << "mode,algo,sdf,k,lat_lo,lat_hi,n_requests,n_runs,ar_mean,ar_std,util_mean,util_std,"
            "time_mean_us,time_std_us\n";
    aggs << std::fixed;
    for (const AggregateRow& a : report.aggregates) {
        aggs << a.mode << ',' << a.algo << ',' << a.sdf << ',' << a.k << ','
             << std::setprecision(3) << a.lat_lo << ',' << a.lat_hi << ',' << a.n_requests << ','
             << a.n_runs << ',' << std::setprecision(6) << a.ar_mean << ',' << a.ar_std << ','
             << a.util_mean << ',' << a.util_std << ',' << std::setprecision(3) << a.time_mean_us
             << ',' << a.time_std_us << '\n';
    }

    // Plottable views mirroring the usual evaluation axes.
    std::ofstream summary(out_dir / "summary.txt");
    if (!summary)
        throw ParseError("cannot write " + (out_dir / "summary.txt").string());
    summary << std::fixed << std::setprecision(4);
    summary << "Aggregate results (mean over runs, +/- one standard deviation)\n";
    summary << "==============================================================\n\n";
    summary << std::left << std::setw(9) << "mode" << std::setw(9) << "algo" << std::setw(5)
            << "sdf" << std::setw(5) << "k" << std::setw(13) << "latency[ms]" << std::setw(22)
            << "acceptance_ratio" << std::setw(22) << "utilization" << "time/request[us]\n";
    for (const AggregateRow& a : report.aggregates) {
        std::ostringstream range;
        range << '(' << std::fixed << std::setprecision(0) << a.lat_lo << ',' << a.lat_hi << ')';
        std::ostringstream ar, util, tm;
        ar << std::fixed << std::setprecision(4) << a.ar_mean << " +/- " << a.ar_std;
        util << std::fixed << std::setprecision(4) << a.util_mean << " +/- " << a.util_std;
        tm << std::fixed << std::setprecision(1) << a.time_mean_us << " +/- " << a.time_std_us;
        summary << std::left << std::setw(9) << a.mode << std::setw(9) << a.algo << std::setw(5)
                << a.sdf << std::setw(5) << a.k << std::setw(13) << range.str() << std::setw(22)
                << ar.str() << std::setw(22) << util.str() << tm.str() << '\n';
    }
}

} // namespace cxp
