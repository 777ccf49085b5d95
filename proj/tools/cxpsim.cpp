// cxpsim: inter-IXP pathlet routing toolkit.
//
// Subcommands: ingest, analyze, policy-div, simulate, solve-offline.

#include "cxp/engine.hpp"
#include "cxp/experiment.hpp"
#include "cxp/ingest.hpp"
#include "cxp/io.hpp"
#include "cxp/latency_model.hpp"
#include "cxp/metrics.hpp"
#include "cxp/policy.hpp"
#include "cxp/rng.hpp"
#include "cxp/sampling.hpp"
#include "cxp/solver.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace cxp;

namespace {

struct DatasetOpts {
    std::string membership;
    std::string locations;
    std::string prefix_counts;
    std::string as_rel;
    std::size_t synth_ixps = 0;
    std::size_t synth_ases = 0;
    double synth_alpha = 1.8;

    bool synthetic() const { return synth_ixps > 0; }
};

void add_dataset_options(CLI::App* cmd, DatasetOpts& opts) {
    cmd->add_option("--membership", opts.membership, "membership.csv: `ixp_id,asn` rows");
    cmd->add_option("--locations", opts.locations,
                    "ixp_locations.csv: `ixp_id,name,lat_deg,lon_deg` rows");
    cmd->add_option("--prefix-counts", opts.prefix_counts,
                    "prefix_counts.csv: `asn,ipv4_address_count` rows");
    cmd->add_option("--as-rel", opts.as_rel, "as_rel.txt: `as1|as2|rel` rows (rel -1 or 0)");
    cmd->add_option("--synth-ixps", opts.synth_ixps,
                    "synthesize a dataset with this many IXPs instead of reading files");
    cmd->add_option("--synth-ases", opts.synth_ases, "AS count for the synthetic dataset");
    cmd->add_option("--synth-alpha", opts.synth_alpha,
                    "tail exponent of synthetic AS participation");
}

struct Dataset {
    MembershipTable membership;
    LocationTable locations;
    PrefixCounts prefix_counts;
    AsRelGraph as_rel;
};

template <typename Parser>
auto parse_file(const std::string& path, const char* what, Parser&& parser) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(std::string("cannot open ") + what + " file: " + path);
    ParseReport report;
    auto value = parser(in, &report);
    for (const std::string& issue : report.issues)
        std::cerr << "warning: " << issue << "\n";
    return value;
}

Dataset load_dataset(const DatasetOpts& opts, std::uint64_t seed) {
    Dataset ds;
    if (opts.synthetic()) {
        SyntheticParams params;
        params.n_ixps = opts.synth_ixps;
        params.n_ases = opts.synth_ases > 0 ? opts.synth_ases : opts.synth_ixps * 12;
        params.participation_alpha = opts.synth_alpha;
        SyntheticDataset synth = generate_synthetic(params, seed);
        ds.membership = std::move(synth.membership);
        ds.locations = std::move(synth.locations);
        ds.prefix_counts = std::move(synth.prefix_counts);
    } else {
        if (opts.membership.empty() || opts.prefix_counts.empty())
            throw ParseError("either --membership and --prefix-counts or --synth-ixps required");
        ds.membership = parse_file(opts.membership, "membership", [](auto& in, auto* rep) {
            return parse_membership(in, rep);
        });
        ds.prefix_counts = parse_file(opts.prefix_counts, "prefix_counts", [](auto& in, auto* rep) {
            return parse_prefix_counts(in, rep);
        });
        if (!opts.locations.empty())
            ds.locations = parse_file(opts.locations, "locations", [](auto& in, auto* rep) {
                return parse_locations(in, rep);
            });
    }
    if (!opts.as_rel.empty())
        ds.as_rel = parse_file(opts.as_rel, "as_rel", [](auto& in, auto* rep) {
            return parse_as_relationships(in, rep);
        });
    return ds;
}

ExperimentInputs prime_inputs(const Dataset& ds, std::uint64_t seed, bool annotate) {
    ExperimentInputs inputs;
    inputs.base_graph = build_ixp_multigraph(ds.membership, ds.locations, ds.prefix_counts);
    set_uniform_capacity(inputs.base_graph, 1.0);
    if (annotate)
        annotate_latencies(inputs.base_graph, LatencyModelParams{}, mix64(seed ^ 0x1A7));
    inputs.catalog = derive_endpoint_catalog(ds.membership, ds.locations, ds.prefix_counts);
    inputs.order = greedy_coverage_order(ds.membership, ds.prefix_counts, ds.as_rel);
    return inputs;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

// Flat `key=value` config for simulate; command-line flags take
// precedence (a key is applied only when its flag was not given).
void apply_simulate_config(const std::string& path, const CLI::App* cmd, DatasetOpts& data,
                           ExperimentConfig& config, std::vector<std::string>& modes,
                           std::vector<std::string>& algos, std::vector<std::string>& ranges) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config file: " + path);

    auto flag_given = [&](const std::string& flag) {
        return cmd->get_option(flag)->count() > 0;
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        try {
            if (key == "mode") {
                if (!flag_given("--mode"))
                    modes = split_list(value);
            } else if (key == "algo") {
                if (!flag_given("--algo"))
                    algos = split_list(value);
            } else if (key == "lat-range") {
                if (!flag_given("--lat-range"))
                    ranges = split_list(value);
            } else if (key == "sdf") {
                if (!flag_given("--sdf")) {
                    config.sdfs.clear();
                    for (const std::string& v : split_list(value))
                        config.sdfs.push_back(std::stoi(v));
                }
            } else if (key == "k") {
                if (!flag_given("--k")) {
                    config.ks.clear();
                    for (const std::string& v : split_list(value))
                        config.ks.push_back(std::stoi(v));
                }
            } else if (key == "requests") {
                if (!flag_given("--requests"))
                    config.n_requests = std::stoull(value);
            } else if (key == "runs") {
                if (!flag_given("--runs"))
                    config.n_runs = std::stoi(value);
            } else if (key == "seed") {
                if (!flag_given("--seed"))
                    config.seed = std::stoull(value);
            } else if (key == "workers") {
                if (!flag_given("--workers"))
                    config.workers = std::stoi(value);
            } else if (key == "membership") {
                if (!flag_given("--membership"))
                    data.membership = value;
            } else if (key == "locations") {
                if (!flag_given("--locations"))
                    data.locations = value;
            } else if (key == "prefix-counts") {
                if (!flag_given("--prefix-counts"))
                    data.prefix_counts = value;
            } else if (key == "as-rel") {
                if (!flag_given("--as-rel"))
                    data.as_rel = value;
            } else if (key == "synth-ixps") {
                if (!flag_given("--synth-ixps"))
                    data.synth_ixps = std::stoull(value);
            } else if (key == "synth-ases") {
                if (!flag_given("--synth-ases"))
                    data.synth_ases = std::stoull(value);
            } else if (key == "synth-alpha") {
                if (!flag_given("--synth-alpha"))
                    data.synth_alpha = std::stod(value);
            } else {
                throw ParseError("config line " + std::to_string(lineno) + ": unknown key `" +
                                 key + "`");
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("config line " + std::to_string(lineno) + ": bad value for `" + key +
                             "`");
        }
    }
}

std::vector<LatencyRange> parse_ranges(const std::vector<std::string>& specs) {
    std::vector<LatencyRange> out;
    for (const std::string& s : specs) {
        std::istringstream ss(s);
        std::string lo, hi;
        if (!std::getline(ss, lo, ':') || !std::getline(ss, hi))
            throw ParseError("latency range must be `lo:hi`, got " + s);
        out.push_back(LatencyRange{std::stod(lo), std::stod(hi)});
    }
    return out;
}

int cmd_ingest(const DatasetOpts& data, std::uint64_t seed, const std::string& out_dir,
               bool skip_annotation) {
    Dataset ds = load_dataset(data, seed);
    ExperimentInputs inputs = prime_inputs(ds, seed, !skip_annotation);

    fs::create_directories(out_dir);
    save_graph_dir(inputs.base_graph, out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "endpoint_catalog.csv");
        out << "# asn,lat_deg,lon_deg,address_count,ixp_id[;ixp_id...]\n";
        write_endpoint_catalog(out, inputs.catalog);
    }
    if (data.synthetic()) {
        std::ofstream m(fs::path(out_dir) / "membership.csv");
        for (const auto& [ixp, asn] : ds.membership.rows)
            m << ixp << ',' << asn << '\n';
        std::ofstream l(fs::path(out_dir) / "ixp_locations.csv");
        l << std::setprecision(17);
        for (const auto& [id, loc] : std::map<NodeId, IxpLocation>(ds.locations.begin(),
                                                                   ds.locations.end()))
            l << id << ',' << loc.name << ',' << loc.coord->lat_deg << ',' << loc.coord->lon_deg
              << '\n';
        std::ofstream p(fs::path(out_dir) / "prefix_counts.csv");
        for (const auto& [asn, count] : std::map<Asn, std::uint64_t>(ds.prefix_counts.begin(),
                                                                     ds.prefix_counts.end()))
            p << asn << ',' << count << '\n';
    }
    std::cout << "graph: " << inputs.base_graph.node_count() << " nodes, "
              << inputs.base_graph.edge_count() << " edges; catalog: "
              << inputs.catalog.entries.size() << " ASes -> " << out_dir << "\n";
    return 0;
}

int cmd_analyze(const DatasetOpts& data, std::uint64_t seed, const std::string& out_dir,
                const std::vector<int>& sdfs, std::size_t diversity_pairs) {
    Dataset ds = load_dataset(data, seed);
    ExperimentInputs inputs = prime_inputs(ds, seed, false);

    fs::create_directories(out_dir);
    std::ofstream summary(fs::path(out_dir) / "summary.csv");
    summary << "sdf,node_count,edge_count,diameter,avg_node_degree,avg_edge_multiplicity,"
               "avg_shortest_path_len,avg_clustering_coeff\n";
    summary << std::fixed << std::setprecision(6);
    for (int sdf : sdfs) {
        Multigraph scaled = scale_down(inputs.base_graph, inputs.order, sdf);
        GraphSummary s = graph_summary(scaled);
        summary << sdf << ',' << s.node_count << ',' << s.edge_count << ',' << s.diameter << ','
                << s.avg_node_degree << ',' << s.avg_edge_multiplicity << ','
                << s.avg_shortest_path_len << ',' << s.avg_clustering_coeff << '\n';
    }

    auto mult = edge_multiplicity_distribution(inputs.base_graph);
    {
        std::ofstream out(fs::path(out_dir) / "multiplicity.csv");
        out << "value,count\n";
        for (const auto& [value, count] : mult)
            out << value << ',' << count << '\n';
    }
    if (!mult.empty()) {
        std::vector<double> values;
        for (const auto& [value, count] : mult)
            for (std::size_t i = 0; i < count; ++i)
                values.push_back(static_cast<double>(value));
        Percentiles p = distribution_percentiles(values);
        std::ofstream out(fs::path(out_dir) / "multiplicity_percentiles.csv");
        out << "p1,p25,p50,p75,p99,p99.9\n"
            << p.p1 << ',' << p.p25 << ',' << p.p50 << ',' << p.p75 << ',' << p.p99 << ','
            << p.p999 << '\n';
    }
    {
        std::ofstream out(fs::path(out_dir) / "coverage.csv");
        out << "ixp_id,cumulative_direct_addresses,cumulative_one_hop_addresses\n";
        for (const CoveragePoint& p : inputs.order.points)
            out << p.ixp_id << ',' << p.cumulative_direct_addresses << ','
                << p.cumulative_one_hop_addresses << '\n';
    }
    if (diversity_pairs > 0) {
        std::mt19937_64 rng = rng_for(seed, 0xD1);
        std::uniform_int_distribution<std::size_t> node(0, inputs.base_graph.node_count() - 1);
        std::map<std::int64_t, std::size_t> dist;
        for (std::size_t i = 0; i < diversity_pairs; ++i) {
            std::size_t a = node(rng), b = node(rng);
            while (b == a)
                b = node(rng);
            ++dist[path_diversity(inputs.base_graph, inputs.base_graph.node_at(a).id,
                                  inputs.base_graph.node_at(b).id)];
        }
        std::ofstream out(fs::path(out_dir) / "diversity.csv");
        out << "value,count\n";
        for (const auto& [value, count] : dist)
            out << value << ',' << count << '\n';
    }
    std::cout << "analysis written to " << out_dir << "\n";
    return 0;
}

int cmd_policy_div(const DatasetOpts& data, std::uint64_t seed, const std::string& out_file,
                   const std::vector<double>& fractions, std::size_t n_pairs) {
    if (data.as_rel.empty())
        throw ParseError("--as-rel is required for policy-div");
    Dataset ds = load_dataset(data, seed);

    std::ofstream out(out_file);
    if (!out)
        throw ParseError("cannot write " + out_file);
    out << "scenario,p2p_fraction,mean,median,p99\n";
    out << std::fixed << std::setprecision(4);
    const PolicyScenario scenarios[] = {PolicyScenario::PointyPeak, PolicyScenario::WidePeak,
                                        PolicyScenario::WithSteps, PolicyScenario::Unrestricted};
    for (double fraction : fractions) {
        AsRelGraph rel = augment_p2p(ds.as_rel, ds.membership, fraction, seed);
        auto pairs = sample_weighted_pairs(rel, ds.prefix_counts, n_pairs, mix64(seed ^ 0xFA));
        for (PolicyScenario scenario : scenarios) {
            PolicyGraph pg(rel, scenario);
            std::vector<double> values;
            values.reserve(pairs.size());
            for (const auto& [a, b] : pairs)
                values.push_back(static_cast<double>(pg.diversity(a, b)));
            double mean = 0.0;
            for (double v : values)
                mean += v;
            mean /= static_cast<double>(values.size());
            Percentiles p = distribution_percentiles(values);
            out << to_string(scenario) << ',' << fraction << ',' << mean << ',' << p.p50 << ','
                << p.p99 << '\n';
        }
    }
    std::cout << "policy diversity written to " << out_file << "\n";
    return 0;
}

int cmd_simulate(const DatasetOpts& data, ExperimentConfig config,
                 const std::vector<std::string>& modes, const std::vector<std::string>& algos,
                 const std::vector<std::string>& ranges, const std::string& out_dir) {
    config.modes.clear();
    for (const std::string& m : modes) {
        auto mode = run_mode_from_string(m);
        if (!mode)
            throw ParseError("unknown mode `" + m + "`");
        config.modes.push_back(*mode);
    }
    config.algos = algos;
    config.latency_ranges = parse_ranges(ranges);

    Dataset ds = load_dataset(data, config.seed);
    ExperimentInputs inputs = prime_inputs(ds, config.seed, true);
    ExperimentReport report = run_experiment(inputs, config);
    emit_report(report, out_dir);
    std::cout << report.rows.size() << " runs, " << report.aggregates.size()
              << " aggregates -> " << out_dir << "\n";
    return 0;
}

int cmd_solve_offline(const std::string& graph_dir, const std::string& requests_file,
                      const std::string& formulation, const std::string& algo, int k,
                      std::uint64_t seed, const std::vector<RequestId>& forced_ids,
                      const std::string& out_file) {
    Multigraph g = load_graph_dir(graph_dir);
    std::ifstream rin(requests_file);
    if (!rin)
        throw ParseError("cannot open requests file: " + requests_file);
    std::vector<Request> requests = read_requests(rin);
    ForcedSet forced(forced_ids.begin(), forced_ids.end());

    SolverSolution sol;
    if (formulation == "optflow") {
        sol = solve_optflow(g, requests, forced);
    } else if (formulation == "heurpaths") {
        auto sampler = sample_algo_from_string(algo);
        if (!sampler)
            throw ParseError("unknown sampling algorithm `" + algo + "`");
        Multigraph zero_load = g;
        zero_load.clear_reservations();
        std::vector<std::vector<Path>> candidates(requests.size());
        for (std::size_t i = 0; i < requests.size(); ++i) {
            std::mt19937_64 rng = rng_for(seed, requests[i].id);
            candidates[i] = sample_paths(zero_load, requests[i], *sampler, k, rng);
        }
        std::vector<double> capacity(g.edge_count());
        for (std::size_t i = 0; i < g.edge_count(); ++i)
            capacity[i] = g.edge_at(i).bandwidth;
        sol = solve_heurpaths(requests, candidates, g, capacity, forced);
    } else {
        throw ParseError("formulation must be `optflow` or `heurpaths`");
    }

    if (!sol.feasible) {
        std::cerr << "infeasible: the forced request set cannot be embedded\n";
        return 2;
    }
    std::vector<SolutionRow> rows;
    rows.reserve(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        SolutionRow row;
        row.request_id = requests[i].id;
        row.accepted = sol.assignment[i].has_value();
        if (sol.assignment[i])
            row.edge_ids = sol.assignment[i]->edge_ids;
        rows.push_back(std::move(row));
    }
    std::ofstream out(out_file);
    if (!out)
        throw ParseError("cannot write " + out_file);
    write_solution(out, rows);
    std::cout << "objective " << sol.objective << " of " << requests.size()
              << (sol.optimal ? " (optimal)" : " (budget-truncated)") << " -> " << out_file
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inter-IXP pathlet routing: topology analysis, policy diversity, "
                 "QoS path embedding"};
    app.require_subcommand(1);

    // ingest
    DatasetOpts ingest_data;
    std::uint64_t ingest_seed = 1;
    std::string ingest_out = "out";
    bool skip_annotation = false;
    CLI::App* ingest = app.add_subcommand("ingest", "build a pathlet multigraph from datasets");
    add_dataset_options(ingest, ingest_data);
    ingest->add_option("--seed", ingest_seed, "seed for synthesis and latency annotation");
    ingest->add_option("--out", ingest_out, "output directory")->required();
    ingest->add_flag("--skip-annotation", skip_annotation, "leave edge latencies at zero");

    // analyze
    DatasetOpts analyze_data;
    std::uint64_t analyze_seed = 1;
    std::string analyze_out = "analysis";
    std::vector<int> analyze_sdfs{1};
    std::size_t diversity_pairs = 0;
    CLI::App* analyze = app.add_subcommand("analyze", "graph statistics and distributions");
    add_dataset_options(analyze, analyze_data);
    analyze->add_option("--seed", analyze_seed);
    analyze->add_option("--sdf", analyze_sdfs, "scale-down factors")->delimiter(',');
    analyze->add_option("--diversity-pairs", diversity_pairs,
                        "sample this many node pairs for the path diversity distribution");
    analyze->add_option("--out", analyze_out, "output directory")->required();

    // policy-div
    DatasetOpts policy_data;
    std::uint64_t policy_seed = 1;
    std::string policy_out = "policy_diversity.csv";
    std::vector<double> fractions{0.0, 0.25, 0.5};
    std::size_t n_pairs = 1000;
    CLI::App* policy = app.add_subcommand("policy-div", "policy-compliant AS path diversity");
    add_dataset_options(policy, policy_data);
    policy->add_option("--seed", policy_seed);
    policy->add_option("--fractions", fractions, "p2p augmentation fractions")->delimiter(',');
    policy->add_option("--pairs", n_pairs, "sampled AS endpoint pairs");
    policy->add_option("--out", policy_out, "output CSV");

    // simulate
    DatasetOpts sim_data;
    ExperimentConfig sim_config;
    std::vector<std::string> sim_modes{"online"};
    std::vector<std::string> sim_algos{"pd"};
    std::vector<std::string> sim_ranges{"200:250"};
    std::string sim_out = "results";
    std::string sim_config_file;
    CLI::App* simulate = app.add_subcommand("simulate", "embedding simulation sweep");
    add_dataset_options(simulate, sim_data);
    simulate->add_option("--config", sim_config_file,
                         "flat key=value config file; flags override its values");
    simulate->add_option("--mode", sim_modes, "online|hybrid|offline")->delimiter(',');
    simulate->add_option("--algo", sim_algos, "pd|gd|gw (offline also: optflow)")->delimiter(',');
    simulate->add_option("--sdf", sim_config.sdfs, "scale-down factors")->delimiter(',');
    simulate->add_option("--k", sim_config.ks, "paths per request")->delimiter(',');
    simulate->add_option("--lat-range", sim_ranges, "latency ranges `lo:hi`")->delimiter(',');
    simulate->add_option("--requests", sim_config.n_requests, "requests per run");
    simulate->add_option("--runs", sim_config.n_runs, "runs per parameter combination");
    simulate->add_option("--seed", sim_config.seed);
    simulate->add_option("--workers", sim_config.workers, "worker pool size");
    simulate->add_option("--out", sim_out, "output directory")->required();

    // solve-offline
    std::string off_graph, off_requests, off_out = "solution.csv";
    std::string formulation = "heurpaths";
    std::string off_algo = "gw";
    int off_k = 20;
    std::uint64_t off_seed = 1;
    std::vector<RequestId> off_forced;
    CLI::App* offline = app.add_subcommand("solve-offline", "offline instance solve");
    offline->add_option("--graph", off_graph, "directory with nodes.csv and edges.csv")
        ->required();
    offline->add_option("--requests", off_requests, "requests.csv")->required();
    offline->add_option("--formulation", formulation, "optflow|heurpaths");
    offline->add_option("--algo", off_algo, "sampler for heurpaths candidates");
    offline->add_option("--k", off_k, "candidate paths per request");
    offline->add_option("--seed", off_seed);
    offline->add_option("--forced", off_forced, "request ids that must be accepted")
        ->delimiter(',');
    offline->add_option("--out", off_out, "solution CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed())
            return cmd_ingest(ingest_data, ingest_seed, ingest_out, skip_annotation);
        if (analyze->parsed())
            return cmd_analyze(analyze_data, analyze_seed, analyze_out, analyze_sdfs,
                               diversity_pairs);
        if (policy->parsed())
            return cmd_policy_div(policy_data, policy_seed, policy_out, fractions, n_pairs);
        if (simulate->parsed()) {
            if (!sim_config_file.empty())
                apply_simulate_config(sim_config_file, simulate, sim_data, sim_config, sim_modes,
                                      sim_algos, sim_ranges);
            return cmd_simulate(sim_data, sim_config, sim_modes, sim_algos, sim_ranges, sim_out);
        }
        if (offline->parsed())
            return cmd_solve_offline(off_graph, off_requests, formulation, off_algo, off_k,
                                     off_seed, off_forced, off_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
