#ifndef DYSCAN_AUDITS_HPP
#define DYSCAN_AUDITS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dyscan/baselines.hpp"
#include "dyscan/corefind.hpp"
#include "dyscan/engine.hpp"

namespace dyscan {

/// Brute-force structure audits used by differential tests and --audit runs.
/// Each function appends human-readable issue strings; an empty result means
/// the structure matches its from-scratch reconstruction.
namespace audits {

inline void check_sorted_lists(const Engine& engine, std::vector<std::string>& issues) {
    const auto& g = engine.graph();
    const auto& lists = engine.lists();
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        if (lists.list_size(u) != g.degree(u)) {
            issues.push_back("list size mismatch at vertex " + std::to_string(u));
            continue;
        }
        double prev = 2.0;
        VertexId prev_id = 0;
        bool first = true;
        lists.walk_desc(u, [&](VertexId w, double s) {
            if (!g.neighbors(u).contains(w)) {
                issues.push_back("list of " + std::to_string(u) + " holds non-neighbor " +
                                 std::to_string(w));
            }
            if (s > prev || (s == prev && !first && w <= prev_id)) {
                issues.push_back("list of " + std::to_string(u) + " out of order at " +
                                 std::to_string(w));
            }
            auto mirrored = lists.sim(w, u);
            if (!mirrored || *mirrored != s) {
                issues.push_back("asymmetric stored sim on (" + std::to_string(u) + "," +
                                 std::to_string(w) + ")");
            }
            auto stored = engine.stored_sim(u, w);
            if (!stored || *stored != s) {
                issues.push_back("list sim disagrees with stored sim on (" + std::to_string(u) +
                                 "," + std::to_string(w) + ")");
            }
            prev = s;
            prev_id = w;
            first = false;
            return true;
        });
    }
}

inline void check_bucket_conservation(const Engine& engine, std::vector<std::string>& issues) {
    const auto* index = engine.affordability_index();
    if (!index) return;
    const auto& g = engine.graph();
    const auto& afford = index->affordability();
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        if (afford.total_entries(u) != g.degree(u)) {
            issues.push_back("bucket entry count != degree at vertex " + std::to_string(u));
        }
        for (const auto& bucket : afford.buckets(u)) {
            if (bucket.entries.empty()) {
                issues.push_back("empty bucket materialized at vertex " + std::to_string(u));
            }
            if (bucket.counter_snapshot > afford.counter(u)) {
                issues.push_back("bucket snapshot ahead of counter at vertex " + std::to_string(u));
            }
        }
    }
}

inline void check_exact_counters(Engine& engine, std::vector<std::string>& issues) {
    auto* index = engine.exact_index();
    if (!index) return;
    const auto& g = engine.graph();
    for (auto [u, v] : g.edges()) {
        auto stored = index->intersection_count(u, v);
        auto actual = static_cast<std::int64_t>(intersection_size(g, u, v));
        if (stored != actual) {
            issues.push_back("intersection counter off on (" + std::to_string(u) + "," +
                             std::to_string(v) + "): stored " + std::to_string(stored) +
                             " actual " + std::to_string(actual));
        }
    }
}

inline void check_bottomk_signatures(Engine& engine, std::vector<std::string>& issues) {
    auto* index = engine.bottomk_index();
    if (!index) return;
    const auto& g = engine.graph();
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        // brute-force bottom-k of N[u] under pi
        std::vector<std::pair<std::uint64_t, VertexId>> members;
        members.emplace_back(index->pi(u), u);
        for (VertexId w : g.neighbors(u).items()) members.emplace_back(index->pi(w), w);
        std::sort(members.begin(), members.end());
        members.resize(std::min(members.size(), index->k()));
        auto sig = index->signature(u);
        bool ok = sig.size() == members.size();
        for (std::size_t i = 0; ok && i < sig.size(); ++i) {
            ok = sig[i].id == members[i].second && sig[i].rank == members[i].first;
        }
        if (!ok) issues.push_back("signature mismatch at vertex " + std::to_string(u));
    }
}

inline void check_delta_table(const Engine& engine, std::vector<std::string>& issues) {
    const auto* table = dynamic_cast<const DeltaTable*>(&engine.core_finder());
    if (!table) return;
    const auto& g = engine.graph();
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        bool should_track = g.degree(u) >= 1;
        if (table->tracks(u) != should_track) {
            issues.push_back("level-table tracking wrong at vertex " + std::to_string(u));
            continue;
        }
        if (!should_track) continue;
        auto counts = table->level_counts(u);
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (table->stored_key(u, i) != counts[i]) {
                issues.push_back("level-table key stale at vertex " + std::to_string(u) +
                                 " level " + std::to_string(i));
            }
        }
    }
}

inline void check_mu_table(const Engine& engine, std::vector<std::string>& issues) {
    const auto* table = dynamic_cast<const MuTable*>(&engine.core_finder());
    if (!table) return;
    const auto& g = engine.graph();
    const auto& lists = engine.lists();
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        std::size_t limit = table->cap() == 0 ? g.degree(u) : std::min(g.degree(u), table->cap());
        for (std::size_t i = 1; i <= limit; ++i) {
            auto stored = table->stored_key(u, i);
            auto actual = lists.kth_largest_sim(u, i);
            if (!stored || !actual || *stored != *actual) {
                issues.push_back("rank-table key stale at vertex " + std::to_string(u) + " row " +
                                 std::to_string(i));
            }
        }
        if (table->stored_key(u, limit + 1)) {
            issues.push_back("rank-table has extra row for vertex " + std::to_string(u));
        }
    }
}

/// Per-edge label soundness at the overall budget: exact sim above
/// eps + rho_star must read similar from the stored estimate, below
/// eps - rho_star must read dissimilar.
inline void check_label_soundness(const Engine& engine, double eps,
                                  std::vector<std::string>& issues) {
    const auto& g = engine.graph();
    double rho_star = engine.config().rho_star;
    const auto& edges = g.edges();
    auto sims = exact_edge_sims(g, engine.config().measure);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto stored = engine.stored_sim(edges[i].first, edges[i].second);
        if (!stored) {
            issues.push_back("edge missing stored sim");
            continue;
        }
        bool treated_similar = *stored >= eps;
        if (sims[i] > eps + rho_star && !treated_similar) {
            issues.push_back("edge (" + std::to_string(edges[i].first) + "," +
                             std::to_string(edges[i].second) + ") must be similar at eps=" +
                             std::to_string(eps));
        }
        if (sims[i] < eps - rho_star && treated_similar) {
            issues.push_back("edge (" + std::to_string(edges[i].first) + "," +
                             std::to_string(edges[i].second) + ") must be dissimilar at eps=" +
                             std::to_string(eps));
        }
    }
}

inline bool cluster_contained(const std::vector<VertexId>& inner,
                              const std::vector<std::vector<VertexId>>& outers) {
    for (const auto& outer : outers) {
        if (std::includes(outer.begin(), outer.end(), inner.begin(), inner.end())) return true;
    }
    return false;
}

/// Sandwich check: every exact cluster at (eps + rho_star, mu) is contained
/// in an approximate cluster, and every approximate cluster is contained in
/// an exact cluster at (eps - rho_star, mu).
inline void check_sandwich(const Engine& engine, const ClusteringResult& approx, double eps,
                           std::size_t mu, std::vector<std::string>& issues) {
    double rho_star = engine.config().rho_star;
    ClusteringResult upper = oracle_cluster(engine.graph(), engine.config().measure,
                                            eps + rho_star, mu);
    ClusteringResult lower = oracle_cluster(engine.graph(), engine.config().measure,
                                            eps - rho_star, mu);
    for (const auto& cluster : upper.clusters) {
        if (!cluster_contained(cluster, approx.clusters)) {
            issues.push_back("exact cluster at eps+rho* not contained in any returned cluster");
        }
    }
    for (const auto& cluster : approx.clusters) {
        if (!cluster_contained(cluster, lower.clusters)) {
            issues.push_back("returned cluster not contained in any exact cluster at eps-rho*");
        }
    }
}

/// Runs every structural audit applicable to the engine's configuration.
inline std::vector<std::string> check_structures(Engine& engine) {
    std::vector<std::string> issues;
    check_sorted_lists(engine, issues);
    check_bucket_conservation(engine, issues);
    check_exact_counters(engine, issues);
    check_bottomk_signatures(engine, issues);
    check_delta_table(engine, issues);
    check_mu_table(engine, issues);
    return issues;
}

} // namespace audits
} // namespace dyscan

#endif
