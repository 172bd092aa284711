#ifndef DYSCAN_WORKLOAD_HPP
#define DYSCAN_WORKLOAD_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyscan/engine.hpp"
#include "dyscan/graph.hpp"
#include "dyscan/rng.hpp"

namespace dyscan {

struct SaturatedError : std::runtime_error {
    SaturatedError() : std::runtime_error("no legal edge insertion exists") {}
};

enum class InsertStrategy { RR, DR, DD };

inline const char* strategy_name(InsertStrategy s) {
    switch (s) {
        case InsertStrategy::RR: return "rr";
        case InsertStrategy::DR: return "dr";
        case InsertStrategy::DD: return "dd";
    }
    return "?";
}

struct UpdateOp {
    UpdateKind kind;
    VertexId u;
    VertexId v;

    bool operator==(const UpdateOp& o) const {
        return kind == o.kind && u == o.u && v == o.v;
    }
};

struct WorkloadConfig {
    InsertStrategy strategy = InsertStrategy::DR;
    double eta = 0.1;               // deletion-to-insertion ratio
    std::uint64_t updates = 0;      // 0 = 2 * initial edge count
    std::uint64_t query_period = 20;
    double eps_lo = 0.1;
    double eps_hi = 0.5;
    std::size_t mu_lo = 2;
};

namespace detail {

/// Degree-proportional endpoint pick: a uniform edge endpoint is chosen,
/// which weights each vertex by its degree.
inline VertexId degree_biased_vertex(const DynamicGraph& g, Rng& rng) {
    auto [a, b] = g.sample_edge(rng);
    return rng.bernoulli(0.5) ? a : b;
}

inline bool legal_pair(const DynamicGraph& g, VertexId u, VertexId v) {
    return u != v && !g.has_edge(u, v);
}

inline bool has_capacity(const DynamicGraph& g, VertexId u) {
    return g.degree(u) + 1 < g.vertex_count();
}

/// Uniform vertex not yet linked to u (and != u); falls back to an exact
/// scan when rejection fails. Requires has_capacity(g, u).
inline VertexId uniform_partner(const DynamicGraph& g, VertexId u, Rng& rng, int tries) {
    std::uint64_t n = g.vertex_count();
    for (int t = 0; t < tries; ++t) {
        VertexId v = static_cast<VertexId>(rng.below(n));
        if (legal_pair(g, u, v)) return v;
    }
    std::vector<VertexId> candidates;
    for (VertexId v = 0; v < n; ++v) {
        if (legal_pair(g, u, v)) candidates.push_back(v);
    }
    if (candidates.empty()) throw SaturatedError{};
    return candidates[rng.below(candidates.size())];
}

/// First endpoint with spare capacity, scanned in ascending order. Only a
/// completely saturated graph has none.
inline VertexId any_open_vertex(const DynamicGraph& g) {
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        if (has_capacity(g, u)) return u;
    }
    throw SaturatedError{};
}

inline UpdateOp dr_insertion(const DynamicGraph& g, Rng& rng) {
    for (int t = 0; t < 64; ++t) {
        VertexId u = g.edge_count() > 0 ? degree_biased_vertex(g, rng)
                                        : static_cast<VertexId>(rng.below(g.vertex_count()));
        if (has_capacity(g, u)) return UpdateOp{UpdateKind::Insert, u, uniform_partner(g, u, rng, 64)};
    }
    VertexId u = any_open_vertex(g);
    return UpdateOp{UpdateKind::Insert, u, uniform_partner(g, u, rng, 64)};
}

} // namespace detail

/// Draws the next update against the current graph state. Deletions are
/// uniform over existing edges; insertions follow the configured strategy.
inline UpdateOp next_update(const DynamicGraph& g, const WorkloadConfig& cfg, Rng& rng) {
    if (g.vertex_count() < 2) throw SaturatedError{};
    double p_delete = cfg.eta / (1.0 + cfg.eta);
    if (g.edge_count() > 0 && rng.uniform() < p_delete) {
        auto [u, v] = g.sample_edge(rng);
        return UpdateOp{UpdateKind::Delete, u, v};
    }
    switch (cfg.strategy) {
        case InsertStrategy::RR: {
            std::uint64_t n = g.vertex_count();
            for (int t = 0; t < 64; ++t) {
                VertexId u = static_cast<VertexId>(rng.below(n));
                VertexId v = static_cast<VertexId>(rng.below(n));
                if (detail::legal_pair(g, u, v)) return UpdateOp{UpdateKind::Insert, u, v};
            }
            VertexId u = detail::any_open_vertex(g);
            return UpdateOp{UpdateKind::Insert, u, detail::uniform_partner(g, u, rng, 0)};
        }
        case InsertStrategy::DR:
            return detail::dr_insertion(g, rng);
        case InsertStrategy::DD: {
            if (g.edge_count() == 0) return detail::dr_insertion(g, rng);
            for (int t = 0; t < 64; ++t) {
                VertexId u = detail::degree_biased_vertex(g, rng);
                VertexId v = detail::degree_biased_vertex(g, rng);
                if (detail::legal_pair(g, u, v)) return UpdateOp{UpdateKind::Insert, u, v};
            }
            return detail::dr_insertion(g, rng); // saturated hubs: DR semantics
        }
    }
    throw SaturatedError{};
}

/// Query parameters: eps uniform in [eps_lo, eps_hi], mu uniform integer in
/// [mu_lo, max(mu_lo, 2 * average degree)].
inline QueryParams next_query(const DynamicGraph& g, const WorkloadConfig& cfg, Rng& rng) {
    double eps = rng.uniform(cfg.eps_lo, cfg.eps_hi);
    double dbar = g.vertex_count() == 0
                      ? 0.0
                      : 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
    std::size_t mu_hi = std::max<std::size_t>(cfg.mu_lo, static_cast<std::size_t>(2.0 * dbar));
    std::size_t mu = cfg.mu_lo + rng.below(mu_hi - cfg.mu_lo + 1);
    return QueryParams{eps, mu};
}

/// Stream file format: one `I u v` or `D u v` per line.
inline void write_stream(std::ostream& out, const std::vector<UpdateOp>& ops) {
    for (const auto& op : ops) {
        out << (op.kind == UpdateKind::Insert ? 'I' : 'D') << ' ' << op.u << ' ' << op.v << '\n';
    }
}

inline std::vector<UpdateOp> read_stream(std::istream& in) {
    std::vector<UpdateOp> ops;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        char kind;
        std::uint64_t u, v;
        if (!(ls >> kind >> u >> v)) continue;
        if (kind != 'I' && kind != 'D') throw std::runtime_error("bad stream line: " + line);
        ops.push_back(UpdateOp{kind == 'I' ? UpdateKind::Insert : UpdateKind::Delete,
                               static_cast<VertexId>(u), static_cast<VertexId>(v)});
    }
    return ops;
}

/// Materializes a stream by replaying the generated updates against a
/// scratch copy of the graph (insertion strategies depend on the evolving
/// degrees).
inline std::vector<UpdateOp> generate_stream(const std::vector<std::pair<VertexId, VertexId>>& edges,
                                             std::size_t vertex_count, const WorkloadConfig& cfg,
                                             std::uint64_t seed) {
    DynamicGraph g;
    if (vertex_count > 0) g.ensure_vertex(static_cast<VertexId>(vertex_count - 1));
    for (auto [u, v] : edges) g.insert_edge(u, v);
    std::uint64_t count = cfg.updates > 0 ? cfg.updates : 2 * g.edge_count();
    Rng rng(seed);
    std::vector<UpdateOp> ops;
    ops.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        UpdateOp op = next_update(g, cfg, rng);
        if (op.kind == UpdateKind::Insert) {
            g.insert_edge(op.u, op.v);
        } else {
            g.delete_edge(op.u, op.v);
        }
        ops.push_back(op);
    }
    return ops;
}

} // namespace dyscan

#endif
