#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dyscan/dyscan.hpp"

namespace {

using namespace dyscan;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("DYSCAN_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 1;
}

IngestResult load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return ingest_edge_list(in);
}

Measure parse_measure(const std::string& s) {
    if (s == "jaccard") return Measure::Jaccard;
    if (s == "cosine") return Measure::Cosine;
    if (s == "dice") return Measure::Dice;
    throw ConfigError("unknown measure: " + s);
}

Algorithm parse_algorithm(const std::string& s) {
    if (s == "vdstar") return Algorithm::VdStar;
    if (s == "vdstar_not") return Algorithm::VdStarNoT;
    if (s == "vdstar_mut") return Algorithm::VdStarMuT;
    if (s == "gsindex") return Algorithm::GsIndex;
    if (s == "botbin") return Algorithm::Botbin;
    throw ConfigError("unknown algorithm: " + s);
}

InsertStrategy parse_strategy(const std::string& s) {
    if (s == "rr") return InsertStrategy::RR;
    if (s == "dr") return InsertStrategy::DR;
    if (s == "dd") return InsertStrategy::DD;
    throw ConfigError("unknown strategy: " + s);
}

struct CommonOpts {
    std::string graph_path;
    std::string algorithm = "vdstar";
    std::string measure = "jaccard";
    std::string strategy = "dr";
    double rho_star = 0.02;
    double delta = 0.01;
    std::size_t mu_cap = 15;
    double eta = 0.1;
    std::uint64_t updates = 0;
    std::uint64_t query_period = 20;
    std::uint64_t seed = default_seed();
    std::string stream_path;
    std::string out_prefix;
    bool audit = false;
    bool quality = false;
    bool stable_timing = false;
    std::uint64_t max_samples = 0;
    bool force_sampling = false;
    std::uint64_t botbin_k = 0;
};

void add_engine_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--graph", o.graph_path, "edge-list graph file")->required();
    cmd->add_option("--algorithm", o.algorithm,
                    "vdstar | vdstar_not | vdstar_mut | gsindex | botbin");
    cmd->add_option("--measure", o.measure, "jaccard | cosine | dice");
    cmd->add_option("--rho-star", o.rho_star, "overall approximation budget");
    cmd->add_option("--delta", o.delta, "level-table granularity");
    cmd->add_option("--mu-cap", o.mu_cap, "small rank-table cap");
    cmd->add_option("--eta", o.eta, "deletion-to-insertion ratio");
    cmd->add_option("--strategy", o.strategy, "insertion strategy: rr | dr | dd");
    cmd->add_option("--updates", o.updates, "update count (0 = twice the initial edge count)");
    cmd->add_option("--query-period", o.query_period, "updates between queries");
    cmd->add_option("--seed", o.seed, "random seed (env DYSCAN_SEED)");
    cmd->add_option("--stream", o.stream_path, "replay updates from a stream file");
    cmd->add_option("--out", o.out_prefix, "output prefix for CSV artifacts");
    cmd->add_flag("--audit", o.audit, "cross-check every update and query against the oracle");
    cmd->add_flag("--quality", o.quality, "per-query ARI/MLR against the exact oracle");
    cmd->add_flag("--stable-timing", o.stable_timing, "zero timing columns (reproducible bytes)");
    cmd->add_option("--max-samples", o.max_samples, "cap per-estimate samples (voids guarantee)")
        ->group("");
    cmd->add_flag("--force-sampling", o.force_sampling, "disable the exact shortcut")->group("");
    cmd->add_option("--botbin-k", o.botbin_k, "override the bottom-k signature size")->group("");
}

RunConfig to_run_config(const CommonOpts& o) {
    RunConfig cfg;
    cfg.engine.algorithm = parse_algorithm(o.algorithm);
    cfg.engine.measure = parse_measure(o.measure);
    cfg.engine.rho_star = o.rho_star;
    cfg.engine.delta = o.delta;
    cfg.engine.mu_cap = o.mu_cap;
    cfg.engine.seed = o.seed;
    cfg.engine.calc.max_samples = o.max_samples;
    cfg.engine.calc.force_sampling = o.force_sampling;
    cfg.engine.botbin_k = o.botbin_k;
    cfg.workload.strategy = parse_strategy(o.strategy);
    cfg.workload.eta = o.eta;
    cfg.workload.updates = o.updates;
    cfg.workload.query_period = o.query_period;
    cfg.out_prefix = o.out_prefix;
    cfg.audit = o.audit;
    cfg.quality = o.quality;
    cfg.stable_timing = o.stable_timing;
    cfg.engine.validate();
    return cfg;
}

int run_command(const CommonOpts& opts) {
    RunConfig cfg = to_run_config(opts);
    IngestResult ingested = load_graph(opts.graph_path);

    RunResult result;
    if (!opts.stream_path.empty()) {
        std::ifstream in(opts.stream_path);
        if (!in) throw std::runtime_error("cannot open stream file: " + opts.stream_path);
        auto ops = read_stream(in);
        result = run_workload(ingested.edges, cfg, &ops);
    } else {
        result = run_workload(ingested.edges, cfg);
    }

    std::cout << "updates=" << result.updates << " queries=" << result.queries
              << " cal_sim=" << result.perf.total_cal_sim
              << " samples=" << result.perf.total_samples
              << " rebuilds=" << result.perf.rebuilds << '\n';
    if (cfg.quality) {
        std::cout << "mean_ari=" << format_double(result.quality.mean_ari())
                  << " mean_mlr=" << format_double(result.quality.mean_mlr()) << '\n';
    }
    if (!result.violations.empty()) {
        std::cerr << result.violations.size() << " audit violation(s):\n";
        std::size_t shown = 0;
        for (const auto& v : result.violations) {
            std::cerr << "  " << v << '\n';
            if (++shown == 20) {
                std::cerr << "  ...\n";
                break;
            }
        }
        return 1;
    }
    return 0;
}

int ingest_command(const std::string& input, const std::string& output,
                   const std::string& labels_out) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open graph file: " + input);
    IngestResult ingested = ingest_edge_list(in);
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write: " + output);
    out << "# " << ingested.labels.size() << " vertices, " << ingested.edges.size() << " edges\n";
    for (auto [u, v] : ingested.edges) out << u << ' ' << v << '\n';
    if (!labels_out.empty()) {
        std::ofstream lout(labels_out);
        for (std::size_t i = 0; i < ingested.labels.size(); ++i) {
            lout << i << ' ' << ingested.labels[i] << '\n';
        }
    }
    std::cout << "vertices=" << ingested.labels.size() << " edges=" << ingested.edges.size()
              << " dropped_self_loops=" << ingested.dropped_self_loops
              << " dropped_duplicates=" << ingested.dropped_duplicates << '\n';
    return 0;
}

int gen_stream_command(const CommonOpts& opts) {
    IngestResult ingested = load_graph(opts.graph_path);
    WorkloadConfig wl;
    wl.strategy = parse_strategy(opts.strategy);
    wl.eta = opts.eta;
    wl.updates = opts.updates;
    auto ops = generate_stream(ingested.edges, ingested.labels.size(), wl, opts.seed);
    std::ofstream out(opts.out_prefix.empty() ? "stream.txt" : opts.out_prefix);
    write_stream(out, ops);
    std::cout << "wrote " << ops.size() << " updates\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic structural clustering benchmark harness"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "replay updates and queries, emit CSV reports");
    add_engine_flags(run_cmd, run_opts);

    CommonOpts audit_opts;
    CLI::App* audit_cmd =
        app.add_subcommand("audit", "oracle differential run on a small input (exit 1 on any violation)");
    add_engine_flags(audit_cmd, audit_opts);

    std::string ingest_in, ingest_out = "graph.edges", ingest_labels;
    CLI::App* ingest_cmd = app.add_subcommand("ingest", "validate and remap an edge-list file");
    ingest_cmd->add_option("--input", ingest_in, "raw edge-list file")->required();
    ingest_cmd->add_option("--output", ingest_out, "remapped edge-list output");
    ingest_cmd->add_option("--labels", ingest_labels, "side table of original labels");

    CommonOpts gen_opts;
    CLI::App* gen_cmd = app.add_subcommand("gen-stream", "materialize an update-stream file");
    gen_cmd->add_option("--graph", gen_opts.graph_path, "edge-list graph file")->required();
    gen_cmd->add_option("--strategy", gen_opts.strategy, "rr | dr | dd");
    gen_cmd->add_option("--eta", gen_opts.eta, "deletion-to-insertion ratio");
    gen_cmd->add_option("--updates", gen_opts.updates, "update count (0 = twice the edge count)");
    gen_cmd->add_option("--seed", gen_opts.seed, "random seed");
    gen_cmd->add_option("--out", gen_opts.out_prefix, "stream output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return run_command(run_opts);
        if (audit_cmd->parsed()) {
            audit_opts.audit = true;
            audit_opts.quality = true;
            return run_command(audit_opts);
        }
        if (ingest_cmd->parsed()) return ingest_command(ingest_in, ingest_out, ingest_labels);
        if (gen_cmd->parsed()) return gen_stream_command(gen_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
