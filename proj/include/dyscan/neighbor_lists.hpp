#ifndef DYSCAN_NEIGHBOR_LISTS_HPP
#define DYSCAN_NEIGHBOR_LISTS_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dyscan/graph.hpp"
#include "dyscan/order_statistic_list.hpp"

namespace dyscan {

/// Key for neighbor lists ordered non-increasing by similarity, ties broken
/// by ascending neighbor id.
struct NeighborKey {
    double sim;
    VertexId id;

    bool operator<(const NeighborKey& o) const {
        if (sim != o.sim) return sim > o.sim;
        return id < o.id;
    }
    bool operator==(const NeighborKey& o) const { return sim == o.sim && id == o.id; }
};

/// Per-vertex neighbor lists sorted by stored approximate similarity, with
/// logarithmic insert/delete/k-th access. Both endpoints of an edge always
/// carry the same stored value.
class SortedNeighborLists {
public:
    void set(VertexId u, VertexId v, double sim) {
        set_one(u, v, sim);
        set_one(v, u, sim);
    }

    void erase(VertexId u, VertexId v) {
        erase_one(u, v);
        erase_one(v, u);
    }

    /// The stored similarity for edge (u, v), if present.
    std::optional<double> sim(VertexId u, VertexId v) const {
        if (u >= sims_.size()) return std::nullopt;
        auto it = sims_[u].find(v);
        if (it == sims_[u].end()) return std::nullopt;
        return it->second;
    }

    /// k-th largest stored similarity in N(u) (1-based k); absent if d_u < k.
    std::optional<double> kth_largest_sim(VertexId u, std::size_t k) const {
        if (k == 0 || u >= lists_.size()) return std::nullopt;
        const NeighborKey* key = lists_[u].kth(k - 1);
        if (!key) return std::nullopt;
        return key->sim;
    }

    std::size_t list_size(VertexId u) const {
        return u < lists_.size() ? lists_[u].size() : 0;
    }

    /// Number of neighbors of u with stored similarity >= x.
    std::size_t count_sims_ge(VertexId u, double x) const {
        if (u >= lists_.size()) return 0;
        return lists_[u].count_less(NeighborKey{x, std::numeric_limits<VertexId>::max()});
    }

    /// Walks u's neighbors in non-increasing similarity order; stops when fn
    /// returns false.
    template <class Fn>
    void walk_desc(VertexId u, Fn&& fn) const {
        if (u >= lists_.size()) return;
        lists_[u].walk([&](const NeighborKey& key) { return fn(key.id, key.sim); });
    }

    void clear() {
        lists_.clear();
        sims_.clear();
    }

    std::size_t memory_bytes() const {
        std::size_t total = 0;
        for (const auto& l : lists_) total += l.memory_bytes();
        for (const auto& m : sims_) total += m.size() * 24;
        return total;
    }

private:
    void set_one(VertexId u, VertexId v, double s) {
        grow(u);
        auto it = sims_[u].find(v);
        if (it != sims_[u].end()) {
            lists_[u].erase(NeighborKey{it->second, v});
            it->second = s;
        } else {
            sims_[u].emplace(v, s);
        }
        lists_[u].insert(NeighborKey{s, v});
    }

    void erase_one(VertexId u, VertexId v) {
        if (u >= sims_.size()) return;
        auto it = sims_[u].find(v);
        if (it == sims_[u].end()) return;
        lists_[u].erase(NeighborKey{it->second, v});
        sims_[u].erase(it);
    }

    void grow(VertexId u) {
        if (u >= lists_.size()) {
            lists_.resize(u + 1);
            sims_.resize(u + 1);
        }
    }

    std::vector<OrderStatisticList<NeighborKey>> lists_;
    std::vector<std::unordered_map<VertexId, double>> sims_;
};

} // namespace dyscan

#endif
