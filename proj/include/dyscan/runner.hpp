#ifndef DYSCAN_RUNNER_HPP
#define DYSCAN_RUNNER_HPP

#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "dyscan/audits.hpp"
#include "dyscan/engine.hpp"
#include "dyscan/metrics.hpp"
#include "dyscan/workload.hpp"

namespace dyscan {

struct RunConfig {
    EngineConfig engine;
    WorkloadConfig workload;
    std::string out_prefix;  // writes <prefix>.metrics.csv and <prefix>.perf.csv
    bool audit = false;      // per-update structure audits + oracle cross-checks
    bool quality = false;    // per-query ARI/MLR against the exact oracle
    bool stable_timing = false; // zero timing fields for reproducible CSV bytes
};

struct RunResult {
    QualityReport quality;
    PerfReport perf;
    std::vector<std::string> violations;
    std::uint64_t updates = 0;
    std::uint64_t queries = 0;
};

namespace detail {

inline std::uint64_t now_micros() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
}

} // namespace detail

/// Replays (or generates) an update stream against a freshly built engine,
/// interleaving clustering queries every `query_period` updates, and
/// collects quality/performance reports.
inline RunResult run_workload(const std::vector<std::pair<VertexId, VertexId>>& initial_edges,
                              const RunConfig& cfg,
                              const std::vector<UpdateOp>* stream = nullptr) {
    RunConfig local = cfg;
    if (local.audit) local.engine.affordability_audit = true;

    Engine engine(local.engine);
    engine.load(initial_edges);

    RunResult result;
    std::uint64_t target = local.workload.updates > 0 ? local.workload.updates
                                                      : 2 * engine.graph().edge_count();
    if (stream) target = stream->size();

    Rng stream_rng(local.engine.seed ^ 0x9e3779b97f4a7c15ULL);
    Rng query_rng(local.engine.seed ^ 0xc2b2ae3d27d4eb4fULL);

    std::vector<std::uint64_t> latencies;
    latencies.reserve(target);
    std::size_t peak_memory = engine.memory_bytes();

    for (std::uint64_t i = 0; i < target; ++i) {
        UpdateOp op = stream ? (*stream)[i] : next_update(engine.graph(), local.workload, stream_rng);
        std::uint64_t t0 = detail::now_micros();
        engine.apply_update(op.kind, op.u, op.v);
        latencies.push_back(detail::now_micros() - t0);
        ++result.updates;

        if (local.audit) {
            auto issues = audits::check_structures(engine);
            for (auto& s : issues) result.violations.push_back(std::move(s));
        }
        if ((i + 1) % 256 == 0) {
            peak_memory = std::max(peak_memory, engine.memory_bytes());
        }

        if (local.workload.query_period > 0 && (i + 1) % local.workload.query_period == 0) {
            QueryParams params = next_query(engine.graph(), local.workload, query_rng);
            std::uint64_t q0 = detail::now_micros();
            ClusteringResult clustering = engine.query(params.eps, params.mu);
            std::uint64_t q_micros = detail::now_micros() - q0;
            ++result.queries;

            QueryRow row{};
            row.update_index = i + 1;
            row.eps = params.eps;
            row.mu = params.mu;
            row.n_cr = clustering.n_cr;
            row.m_cr = clustering.m_cr;
            row.query_micros = local.stable_timing ? 0 : q_micros;
            row.has_quality = false;

            if (local.quality || local.audit) {
                auto exact_sims = exact_edge_sims(engine.graph(), local.engine.measure);
                if (local.quality) {
                    ClusteringResult exact =
                        oracle_cluster_from_sims(engine.graph(), exact_sims, params.eps, params.mu);
                    auto approx_part = canonical_partition(clustering, engine.graph().vertex_count());
                    auto exact_part = canonical_partition(exact, engine.graph().vertex_count());
                    row.ari = adjusted_rand_index(approx_part, exact_part);

                    const auto& edges = engine.graph().edges();
                    std::vector<bool> approx_labels(edges.size()), exact_labels(edges.size());
                    for (std::size_t e = 0; e < edges.size(); ++e) {
                        auto stored = engine.stored_sim(edges[e].first, edges[e].second);
                        approx_labels[e] = stored && *stored >= params.eps;
                        exact_labels[e] = exact_sims[e] >= params.eps;
                    }
                    row.mlr = mislabel_rate(approx_labels, exact_labels);
                    row.has_quality = true;
                }
                if (local.audit) {
                    audits::check_label_soundness(engine, params.eps, result.violations);
                    audits::check_sandwich(engine, clustering, params.eps, params.mu,
                                           result.violations);
                }
            }
            result.quality.rows.push_back(row);
        }
    }

    for (const auto& v : engine.audit_violations()) result.violations.push_back(v);

    peak_memory = std::max(peak_memory, engine.memory_bytes());
    const PerfCounters& perf = engine.perf();
    result.perf.updates = perf.updates;
    result.perf.total_cal_sim = perf.cal_sim_calls;
    result.perf.total_samples = perf.samples;
    result.perf.mean_invalidated =
        perf.updates ? static_cast<double>(perf.invalidated) / static_cast<double>(perf.updates) : 0.0;
    result.perf.max_invalidated = perf.invalidated_max;
    result.perf.mean_touched_entries =
        perf.updates ? static_cast<double>(perf.touched_entries) / static_cast<double>(perf.updates)
                     : 0.0;
    result.perf.rebuilds = perf.rebuilds;
    result.perf.peak_memory_bytes = peak_memory;
    result.perf.capped_estimates = perf.capped_estimates;
    if (!local.stable_timing && !latencies.empty()) {
        double sum = 0.0;
        for (auto l : latencies) sum += static_cast<double>(l);
        result.perf.mean_update_micros = sum / static_cast<double>(latencies.size());
        result.perf.p50_micros = percentile(latencies, 0.50);
        result.perf.p95_micros = percentile(latencies, 0.95);
        result.perf.p99_micros = percentile(latencies, 0.99);
    }

    if (!local.out_prefix.empty()) {
        std::ofstream metrics(local.out_prefix + ".metrics.csv");
        write_metrics_csv(metrics, result.quality, result.updates);
        std::ofstream perf_out(local.out_prefix + ".perf.csv");
        write_perf_csv(perf_out, result.perf);
    }
    return result;
}

} // namespace dyscan

#endif
