#ifndef DYSCAN_CLUSTERING_HPP
#define DYSCAN_CLUSTERING_HPP

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dyscan/graph.hpp"

namespace dyscan {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::uint32_t> parent_;
};

struct ClusteringResult {
    std::vector<std::vector<VertexId>> clusters; // members sorted; clusters by min core id
    std::vector<VertexId> cores;
    std::vector<VertexId> hubs;
    std::vector<VertexId> outliers;
    std::vector<std::pair<VertexId, VertexId>> result_edges; // E_cr, normalized + sorted
    std::size_t n_cr = 0;
    std::size_t m_cr = 0;
};

/// Builds the clustering result from the result-graph edges E_cr (sim-edges
/// incident on at least one core). Connected components over core-core edges
/// form primitive clusters; a non-core endpoint joins the cluster of each
/// core it is similar to (overlap allowed). Remaining vertices are hubs when
/// their graph neighbors belong to two or more distinct clusters, otherwise
/// outliers.
inline ClusteringResult extract_clusters(std::vector<std::pair<VertexId, VertexId>> edges,
                                         std::vector<VertexId> cores,
                                         const DynamicGraph& graph) {
    ClusteringResult result;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::sort(cores.begin(), cores.end());
    result.cores = cores;
    result.result_edges = edges;
    result.m_cr = edges.size();
    {
        std::unordered_set<VertexId> vs;
        for (auto [a, b] : edges) {
            vs.insert(a);
            vs.insert(b);
        }
        result.n_cr = vs.size();
    }

    std::unordered_map<VertexId, std::uint32_t> core_idx;
    for (std::uint32_t i = 0; i < cores.size(); ++i) core_idx.emplace(cores[i], i);
    auto is_core = [&](VertexId v) { return core_idx.find(v) != core_idx.end(); };

    UnionFind uf(cores.size());
    for (auto [a, b] : edges) {
        if (is_core(a) && is_core(b)) uf.unite(core_idx[a], core_idx[b]);
    }

    // component root -> cluster slot, keyed so clusters come out ordered by
    // their smallest core id (roots are minimal indices in sorted `cores`)
    std::unordered_map<std::uint32_t, std::uint32_t> slot_of_root;
    std::vector<std::vector<VertexId>> raw_clusters;
    auto slot_for = [&](std::uint32_t root) {
        auto it = slot_of_root.find(root);
        if (it != slot_of_root.end()) return it->second;
        std::uint32_t slot = static_cast<std::uint32_t>(raw_clusters.size());
        slot_of_root.emplace(root, slot);
        raw_clusters.emplace_back();
        return slot;
    };
    // slots are assigned on first encounter; scanning cores in ascending id
    // order makes cluster order = ascending smallest-core-id order
    std::unordered_map<VertexId, std::vector<std::uint32_t>> membership;
    for (std::uint32_t i = 0; i < cores.size(); ++i) {
        std::uint32_t slot = slot_for(uf.find(i));
        raw_clusters[slot].push_back(cores[i]);
        membership[cores[i]].push_back(slot);
    }
    for (auto [a, b] : edges) {
        bool ca = is_core(a), cb = is_core(b);
        if (ca && !cb) {
            std::uint32_t slot = slot_for(uf.find(core_idx[a]));
            auto& m = membership[b];
            if (std::find(m.begin(), m.end(), slot) == m.end()) {
                m.push_back(slot);
                raw_clusters[slot].push_back(b);
            }
        } else if (cb && !ca) {
            std::uint32_t slot = slot_for(uf.find(core_idx[b]));
            auto& m = membership[a];
            if (std::find(m.begin(), m.end(), slot) == m.end()) {
                m.push_back(slot);
                raw_clusters[slot].push_back(a);
            }
        }
    }

    for (auto& c : raw_clusters) std::sort(c.begin(), c.end());
    result.clusters = std::move(raw_clusters);

    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
        if (membership.find(v) != membership.end()) continue;
        std::unordered_set<std::uint32_t> adjacent_clusters;
        for (VertexId w : graph.neighbors(v).items()) {
            auto it = membership.find(w);
            if (it == membership.end()) continue;
            for (std::uint32_t slot : it->second) adjacent_clusters.insert(slot);
            if (adjacent_clusters.size() >= 2) break;
        }
        if (adjacent_clusters.size() >= 2) {
            result.hubs.push_back(v);
        } else {
            result.outliers.push_back(v);
        }
    }
    return result;
}

inline bool operator==(const ClusteringResult& a, const ClusteringResult& b) {
    return a.clusters == b.clusters && a.cores == b.cores && a.hubs == b.hubs &&
           a.outliers == b.outliers && a.result_edges == b.result_edges;
}

} // namespace dyscan

#endif
