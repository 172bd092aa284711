#ifndef DYSCAN_BASELINES_HPP
#define DYSCAN_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include "dyscan/flat_map.hpp"
#include <utility>
#include <vector>

#include "dyscan/clustering.hpp"
#include "dyscan/graph.hpp"
#include "dyscan/order_statistic_list.hpp"
#include "dyscan/sim_index.hpp"
#include "dyscan/similarity.hpp"

namespace dyscan {

/// Exact similarity maintenance: per-edge intersection sizes I(u,v) plus
/// degrees. Every affected edge of an update is invalid.
class ExactCounterSimIndex final : public EdgeSimIndex {
public:
    explicit ExactCounterSimIndex(const DynamicGraph& graph) : graph_(&graph) {}

    void on_update(VertexId u, VertexId v, UpdateKind op) override {
        // common neighbors are the only third parties whose intersection
        // counts move; called while the graph still reflects the pre-update
        // adjacency
        const auto& small = graph_->degree(u) <= graph_->degree(v) ? graph_->neighbors(u)
                                                                   : graph_->neighbors(v);
        VertexId a = graph_->degree(u) <= graph_->degree(v) ? u : v;
        VertexId b = a == u ? v : u;
        int delta = op == UpdateKind::Insert ? 1 : -1;
        for (VertexId w : small.items()) {
            if (w == b) continue;
            if (graph_->neighbors(b).contains(w)) {
                icount_[edge_key(a, w)] += delta;
                icount_[edge_key(b, w)] += delta;
            }
        }
        if (op == UpdateKind::Insert) {
            std::size_t common = 0;
            for (VertexId w : small.items()) {
                if (w != b && graph_->neighbors(b).contains(w)) ++common;
            }
            icount_[edge_key(u, v)] = common + 2; // u and v join both sides
        } else {
            icount_.erase(edge_key(u, v));
        }
    }

    void insert_edge(VertexId, VertexId) override {}
    void erase_edge(VertexId, VertexId) override {}

    std::vector<std::pair<VertexId, VertexId>> find_invalid(VertexId u, VertexId v,
                                                            UpdateKind) override {
        std::vector<std::pair<VertexId, VertexId>> affected;
        for (VertexId w : graph_->neighbors(u).items()) affected.push_back(normalize_edge(u, w));
        for (VertexId w : graph_->neighbors(v).items()) affected.push_back(normalize_edge(v, w));
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
        return affected;
    }

    CalSimResult compute(VertexId x, VertexId y, Rng&) override {
        const std::int64_t* stored = icount_.find(edge_key(x, y));
        std::size_t i = stored ? static_cast<std::size_t>(*stored)
                               : intersection_size(*graph_, x, y);
        double value = similarity_from_counts(i, graph_->inclusive_size(x),
                                              graph_->inclusive_size(y), measure_);
        return CalSimResult{value, 0, true, false};
    }

    void rebuild(const DynamicGraph& graph, std::uint64_t) override {
        icount_.clear();
        for (auto [u, v] : graph.edges()) {
            icount_.put(edge_key(u, v), static_cast<std::int64_t>(intersection_size(graph, u, v)));
        }
    }

    const char* name() const override { return "exact-counters"; }
    std::size_t memory_bytes() const override { return icount_.memory_bytes(); }

    void set_measure(Measure m) { measure_ = m; }

    std::int64_t intersection_count(VertexId u, VertexId v) const {
        const std::int64_t* stored = icount_.find(edge_key(u, v));
        return stored ? *stored : -1;
    }

private:
    const DynamicGraph* graph_;
    Measure measure_ = Measure::Jaccard;
    FlatMap<std::uint64_t, std::int64_t> icount_;
};

/// Bottom-k signature maintenance under a fixed random total order on
/// vertex ids (Jaccard only). An update invalidates all edges incident on an
/// endpoint whose signature changed.
class BottomKSimIndex final : public EdgeSimIndex {
public:
    struct PiKey {
        std::uint64_t rank;
        VertexId id;
        bool operator<(const PiKey& o) const { return rank < o.rank; }
    };

    BottomKSimIndex(const DynamicGraph& graph, std::size_t k, std::uint64_t salt)
        : graph_(&graph), k_(k), salt_(splitmix64(salt)), base_salt_(salt) {}

    std::uint64_t pi(VertexId id) const { return splitmix64(salt_ ^ (id + 0x51ed2701471965a1ULL)); }

    void on_update(VertexId u, VertexId v, UpdateKind op) override {
        if (op == UpdateKind::Insert) {
            changed_u_ = sig_insert(u, v);
            changed_v_ = sig_insert(v, u);
        } else {
            changed_u_ = sig_erase(u, v);
            changed_v_ = sig_erase(v, u);
        }
    }

    void insert_edge(VertexId, VertexId) override {}
    void erase_edge(VertexId, VertexId) override {}

    std::vector<std::pair<VertexId, VertexId>> find_invalid(VertexId u, VertexId v,
                                                            UpdateKind) override {
        std::vector<std::pair<VertexId, VertexId>> affected;
        if (changed_u_) {
            for (VertexId w : graph_->neighbors(u).items()) affected.push_back(normalize_edge(u, w));
        }
        if (changed_v_) {
            for (VertexId w : graph_->neighbors(v).items()) affected.push_back(normalize_edge(v, w));
        }
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
        changed_u_ = changed_v_ = false;
        return affected;
    }

    CalSimResult compute(VertexId x, VertexId y, Rng&) override {
        auto sx = signature(x);
        auto sy = signature(y);
        // merge the two signatures in pi order; count members of both within
        // the first k of the union; when the union is smaller than k this
        // degenerates to the exact Jaccard of the inclusive neighborhoods
        std::size_t ix = 0, iy = 0, taken = 0, matches = 0;
        while (taken < k_ && (ix < sx.size() || iy < sy.size())) {
            if (ix < sx.size() && iy < sy.size() && sx[ix].rank == sy[iy].rank) {
                ++matches;
                ++ix;
                ++iy;
            } else if (iy >= sy.size() || (ix < sx.size() && sx[ix].rank < sy[iy].rank)) {
                ++ix;
            } else {
                ++iy;
            }
            ++taken; // taken = min(k, |s(x) ∪ s(y)|) at loop exit
        }
        double value = taken == 0
                           ? 0.0
                           : std::clamp(static_cast<double>(matches) / static_cast<double>(taken), 0.0, 1.0);
        return CalSimResult{value, 0, false, false};
    }

    void rebuild(const DynamicGraph& graph, std::uint64_t epoch_salt) override {
        salt_ = splitmix64(base_salt_ ^ epoch_salt);
        sigs_.clear();
        for (VertexId u = 0; u < graph.vertex_count(); ++u) {
            ensure(u);
            for (VertexId w : graph.neighbors(u).items()) {
                sigs_[u].insert(PiKey{pi(w), w});
            }
        }
    }

    const char* name() const override { return "bottom-k"; }

    std::size_t memory_bytes() const override {
        std::size_t total = 0;
        for (const auto& s : sigs_) total += s.memory_bytes();
        return total;
    }

    std::size_t k() const { return k_; }
    void set_k(std::size_t k) { k_ = k; }

    /// The bottom-min(k, n_u) members of N[u] in pi order.
    std::vector<PiKey> signature(VertexId u) {
        ensure(u);
        std::vector<PiKey> out;
        const auto& list = sigs_[u];
        std::size_t take = std::min(k_, list.size());
        out.reserve(take);
        list.walk([&](const PiKey& key) {
            out.push_back(key);
            return out.size() < take;
        });
        return out;
    }

    bool last_changed_u() const { return changed_u_; }
    bool last_changed_v() const { return changed_v_; }

private:
    void ensure(VertexId u) {
        if (u >= sigs_.size()) sigs_.resize(u + 1);
        if (sigs_[u].empty()) sigs_[u].insert(PiKey{pi(u), u}); // N[u] includes u
    }

    bool sig_insert(VertexId u, VertexId w) {
        ensure(u);
        sigs_[u].insert(PiKey{pi(w), w});
        // the signature changed iff w landed within the first k
        return sigs_[u].count_less(PiKey{pi(w), w}) < k_;
    }

    bool sig_erase(VertexId u, VertexId w) {
        ensure(u);
        PiKey key{pi(w), w};
        bool was_in_sig = sigs_[u].count_less(key) < k_;
        sigs_[u].erase(key);
        return was_in_sig;
    }

    const DynamicGraph* graph_;
    std::size_t k_;
    std::uint64_t salt_;
    std::uint64_t base_salt_ = 0;
    std::vector<OrderStatisticList<PiKey>> sigs_;
    bool changed_u_ = false, changed_v_ = false;
};

/// From-scratch exact structural clustering; the trusted reference for
/// differential tests.
inline std::vector<double> exact_edge_sims(const DynamicGraph& graph, Measure measure) {
    std::vector<double> sims;
    sims.reserve(graph.edge_count());
    for (auto [u, v] : graph.edges()) {
        std::size_t i = intersection_size(graph, u, v);
        sims.push_back(similarity_from_counts(i, graph.inclusive_size(u), graph.inclusive_size(v), measure));
    }
    return sims;
}

inline ClusteringResult oracle_cluster_from_sims(const DynamicGraph& graph,
                                                 const std::vector<double>& sims, double eps,
                                                 std::size_t mu) {
    std::vector<std::uint32_t> similar_count(graph.vertex_count(), 0);
    const auto& edges = graph.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (sims[i] >= eps) {
            ++similar_count[edges[i].first];
            ++similar_count[edges[i].second];
        }
    }
    std::vector<VertexId> cores;
    for (VertexId u = 0; u < graph.vertex_count(); ++u) {
        if (similar_count[u] >= mu) cores.push_back(u);
    }
    std::vector<char> is_core(graph.vertex_count(), 0);
    for (VertexId u : cores) is_core[u] = 1;
    std::vector<std::pair<VertexId, VertexId>> ecr;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (sims[i] >= eps && (is_core[edges[i].first] || is_core[edges[i].second])) {
            ecr.push_back(edges[i]);
        }
    }
    return extract_clusters(std::move(ecr), std::move(cores), graph);
}

inline ClusteringResult oracle_cluster(const DynamicGraph& graph, Measure measure, double eps,
                                       std::size_t mu) {
    return oracle_cluster_from_sims(graph, exact_edge_sims(graph, measure), eps, mu);
}

} // namespace dyscan

#endif
