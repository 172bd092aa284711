#ifndef DYSCAN_METRICS_HPP
#define DYSCAN_METRICS_HPP

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dyscan/clustering.hpp"
#include "dyscan/graph.hpp"

namespace dyscan {

/// Fraction of edges whose similar/dissimilar label differs between the two
/// labelings; both vectors must cover the same edge order.
inline double mislabel_rate(const std::vector<bool>& approx, const std::vector<bool>& exact) {
    if (approx.size() != exact.size()) {
        throw std::invalid_argument("label vectors must cover the same edge set");
    }
    if (approx.empty()) return 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        if (approx[i] != exact[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(approx.size());
}

/// Canonical one-block-per-vertex assignment for ARI: a clustered vertex is
/// assigned to its lowest-core-id cluster (clusters are already ordered that
/// way), every other vertex becomes a singleton block.
inline std::vector<std::int64_t> canonical_partition(const ClusteringResult& result,
                                                     std::size_t vertex_count) {
    std::vector<std::int64_t> block(vertex_count, -1);
    for (std::size_t c = 0; c < result.clusters.size(); ++c) {
        for (VertexId v : result.clusters[c]) {
            if (v < vertex_count && block[v] < 0) block[v] = static_cast<std::int64_t>(c);
        }
    }
    std::int64_t next_singleton = static_cast<std::int64_t>(result.clusters.size());
    for (std::size_t v = 0; v < vertex_count; ++v) {
        if (block[v] < 0) block[v] = next_singleton++;
    }
    return block;
}

/// Adjusted Rand index over two block assignments covering the same universe.
inline double adjusted_rand_index(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("partitions must cover the same universe");
    }
    std::size_t n = a.size();
    if (n < 2) return 1.0;
    std::unordered_map<std::int64_t, std::uint64_t> count_a, count_b;
    std::unordered_map<std::uint64_t, std::uint64_t> cell;
    std::unordered_map<std::int64_t, std::uint32_t> ids_a, ids_b;
    auto intern = [](std::unordered_map<std::int64_t, std::uint32_t>& ids, std::int64_t x) {
        auto [it, fresh] = ids.emplace(x, static_cast<std::uint32_t>(ids.size()));
        return it->second;
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t ia = intern(ids_a, a[i]);
        std::uint32_t ib = intern(ids_b, b[i]);
        ++count_a[ia];
        ++count_b[ib];
        ++cell[(static_cast<std::uint64_t>(ia) << 32) | ib];
    }
    auto choose2 = [](std::uint64_t x) { return static_cast<double>(x) * (static_cast<double>(x) - 1.0) / 2.0; };
    double sum_cells = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [k, v] : cell) sum_cells += choose2(v);
    for (const auto& [k, v] : count_a) sum_a += choose2(v);
    for (const auto& [k, v] : count_b) sum_b += choose2(v);
    double total = choose2(n);
    double expected = sum_a * sum_b / total;
    double maximum = (sum_a + sum_b) / 2.0;
    if (maximum == expected) return 1.0;
    return (sum_cells - expected) / (maximum - expected);
}

struct QueryRow {
    std::uint64_t update_index;
    double eps;
    std::size_t mu;
    double ari;
    double mlr;
    std::size_t n_cr;
    std::size_t m_cr;
    std::uint64_t query_micros;
    bool has_quality; // ari/mlr populated (oracle comparison ran)
};

struct QualityReport {
    std::vector<QueryRow> rows;

    double mean_ari() const {
        double sum = 0.0;
        std::size_t k = 0;
        for (const auto& r : rows) {
            if (r.has_quality) {
                sum += r.ari;
                ++k;
            }
        }
        return k == 0 ? 1.0 : sum / static_cast<double>(k);
    }

    double mean_mlr() const {
        double sum = 0.0;
        std::size_t k = 0;
        for (const auto& r : rows) {
            if (r.has_quality) {
                sum += r.mlr;
                ++k;
            }
        }
        return k == 0 ? 0.0 : sum / static_cast<double>(k);
    }
};

struct PerfReport {
    std::uint64_t updates = 0;
    double mean_update_micros = 0.0;
    std::uint64_t p50_micros = 0;
    std::uint64_t p95_micros = 0;
    std::uint64_t p99_micros = 0;
    std::uint64_t total_cal_sim = 0;
    std::uint64_t total_samples = 0;
    double mean_invalidated = 0.0;
    std::uint64_t max_invalidated = 0;
    double mean_touched_entries = 0.0;
    std::uint64_t rebuilds = 0;
    std::size_t peak_memory_bytes = 0;
    std::uint64_t capped_estimates = 0;
};

inline std::uint64_t percentile(std::vector<std::uint64_t> values, double p) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    std::size_t idx = static_cast<std::size_t>(p * static_cast<double>(values.size() - 1));
    return values[idx];
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

/// Per-query metrics CSV: one row per query plus a trailing summary row with
/// mean values (eps/mu left blank).
inline void write_metrics_csv(std::ostream& out, const QualityReport& report,
                              std::uint64_t total_updates) {
    out << "update_index,eps,mu,ari,mlr,n_cr,m_cr,query_micros\n";
    double micros_sum = 0.0, ncr_sum = 0.0, mcr_sum = 0.0;
    for (const auto& r : report.rows) {
        out << r.update_index << ',' << format_double(r.eps) << ',' << r.mu << ',';
        if (r.has_quality) {
            out << format_double(r.ari) << ',' << format_double(r.mlr);
        } else {
            out << ',';
        }
        out << ',' << r.n_cr << ',' << r.m_cr << ',' << r.query_micros << '\n';
        micros_sum += static_cast<double>(r.query_micros);
        ncr_sum += static_cast<double>(r.n_cr);
        mcr_sum += static_cast<double>(r.m_cr);
    }
    std::size_t q = report.rows.size();
    out << total_updates << ",,,";
    if (q > 0) {
        out << format_double(report.mean_ari()) << ',' << format_double(report.mean_mlr()) << ','
            << format_double(ncr_sum / static_cast<double>(q)) << ','
            << format_double(mcr_sum / static_cast<double>(q)) << ','
            << static_cast<std::uint64_t>(micros_sum / static_cast<double>(q)) << '\n';
    } else {
        out << ",,,,0\n";
    }
}

inline void write_perf_csv(std::ostream& out, const PerfReport& perf) {
    out << "updates,mean_update_micros,p50_micros,p95_micros,p99_micros,total_cal_sim,"
           "total_samples,mean_invalidated,max_invalidated,mean_touched_entries,rebuilds,"
           "peak_memory_bytes,capped_estimates\n";
    out << perf.updates << ',' << format_double(perf.mean_update_micros) << ',' << perf.p50_micros
        << ',' << perf.p95_micros << ',' << perf.p99_micros << ',' << perf.total_cal_sim << ','
        << perf.total_samples << ',' << format_double(perf.mean_invalidated) << ','
        << perf.max_invalidated << ',' << format_double(perf.mean_touched_entries) << ','
        << perf.rebuilds << ',' << perf.peak_memory_bytes << ',' << perf.capped_estimates << '\n';
}

} // namespace dyscan

#endif
