#ifndef DYSCAN_COREFIND_HPP
#define DYSCAN_COREFIND_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dyscan/graph.hpp"
#include "dyscan/neighbor_lists.hpp"
#include "dyscan/order_statistic_list.hpp"

namespace dyscan {

struct MuOutOfRangeError : std::runtime_error {
    MuOutOfRangeError() : std::runtime_error("mu exceeds the table cap") {}
};

/// Strategy interface for retrieving (eps, mu)-core vertices from the stored
/// similarities.
class CoreFinder {
public:
    virtual ~CoreFinder() = default;
    virtual void update(VertexId u) = 0;
    /// Returns core ids in ascending order. May throw MuOutOfRangeError to
    /// signal that the caller should fall back to a direct scan.
    virtual std::vector<VertexId> find_core(double eps, std::size_t mu) const = 0;
    virtual const char* name() const = 0;
    virtual void clear() = 0;
    virtual std::size_t memory_bytes() const = 0;
};

/// Key for count-ordered vertex lists: descending count, ascending id.
struct CountKey {
    std::uint32_t count;
    VertexId id;

    bool operator<(const CountKey& o) const {
        if (count != o.count) return count > o.count;
        return id < o.id;
    }
};

/// Level-table core finder: ceil(1/delta) similarity levels, each an ordered
/// list keyed by the per-vertex count of neighbors with stored similarity
/// >= i*delta. Vertices with at least one neighbor appear in every list;
/// zero-count entries sink to the tail and are never scanned.
class DeltaTable final : public CoreFinder {
public:
    DeltaTable(const SortedNeighborLists& lists, double delta)
        : lists_(&lists), delta_(delta),
          level_count_(static_cast<std::size_t>(std::ceil(1.0 / delta))) {
        tables_.resize(level_count_);
    }

    void update(VertexId u) override {
        if (u >= keys_.size()) keys_.resize(u + 1);
        std::size_t d = lists_->list_size(u);
        if (d == 0) {
            remove_all(u);
            return;
        }
        std::vector<std::uint32_t> counts = level_counts(u);
        if (keys_[u].empty()) {
            keys_[u] = counts;
            for (std::size_t i = 0; i < level_count_; ++i) {
                tables_[i].insert(CountKey{counts[i], u});
            }
            return;
        }
        for (std::size_t i = 0; i < level_count_; ++i) {
            if (keys_[u][i] != counts[i]) {
                tables_[i].erase(CountKey{keys_[u][i], u});
                tables_[i].insert(CountKey{counts[i], u});
                keys_[u][i] = counts[i];
            }
        }
    }

    std::vector<VertexId> find_core(double eps, std::size_t mu) const override {
        std::size_t level = level_of(eps);
        std::vector<VertexId> cores;
        tables_[level].walk([&](const CountKey& key) {
            if (key.count < mu) return false;
            cores.push_back(key.id);
            return true;
        });
        std::sort(cores.begin(), cores.end());
        return cores;
    }

    const char* name() const override { return "delta-table"; }

    void clear() override {
        for (auto& t : tables_) t.clear();
        keys_.clear();
    }

    std::size_t memory_bytes() const override {
        std::size_t total = 0;
        for (const auto& t : tables_) total += t.memory_bytes();
        for (const auto& k : keys_) total += k.capacity() * sizeof(std::uint32_t);
        return total;
    }

    std::size_t level_count() const { return level_count_; }
    double delta() const { return delta_; }

    std::size_t level_of(double eps) const {
        auto level = static_cast<std::size_t>(std::floor(eps / delta_ + 1e-9));
        return std::min(level, level_count_ - 1);
    }

    /// Count of u's neighbors with stored similarity >= i*delta, per level.
    std::vector<std::uint32_t> level_counts(VertexId u) const {
        std::vector<double> sims;
        sims.reserve(lists_->list_size(u));
        lists_->walk_desc(u, [&](VertexId, double s) {
            sims.push_back(s);
            return true;
        });
        std::vector<std::uint32_t> counts(level_count_, 0);
        std::size_t p = 0;
        for (std::size_t i = level_count_; i-- > 0;) {
            double threshold = static_cast<double>(i) * delta_;
            while (p < sims.size() && sims[p] >= threshold) ++p;
            counts[i] = static_cast<std::uint32_t>(p);
        }
        return counts;
    }

    std::uint32_t stored_key(VertexId u, std::size_t level) const {
        if (u >= keys_.size() || keys_[u].empty()) return 0;
        return keys_[u][level];
    }

    bool tracks(VertexId u) const { return u < keys_.size() && !keys_[u].empty(); }

private:
    void remove_all(VertexId u) {
        if (u >= keys_.size() || keys_[u].empty()) return;
        for (std::size_t i = 0; i < level_count_; ++i) {
            tables_[i].erase(CountKey{keys_[u][i], u});
        }
        keys_[u].clear();
    }

    const SortedNeighborLists* lists_;
    double delta_;
    std::size_t level_count_;
    std::vector<OrderStatisticList<CountKey>> tables_;
    std::vector<std::vector<std::uint32_t>> keys_; // empty = not tracked
};

/// Rank-table core finder: T[i] orders vertices with degree >= i by their
/// i-th largest stored similarity. cap == 0 keeps the full table; a positive
/// cap maintains only T[1..cap] and signals MuOutOfRange beyond it.
class MuTable final : public CoreFinder {
public:
    MuTable(const SortedNeighborLists& lists, std::size_t cap) : lists_(&lists), cap_(cap) {}

    void update(VertexId u) override {
        if (u >= keys_.size()) keys_.resize(u + 1);
        std::size_t d = lists_->list_size(u);
        std::size_t limit = cap_ == 0 ? d : std::min(d, cap_);
        std::vector<double> desired;
        desired.reserve(limit);
        lists_->walk_desc(u, [&](VertexId, double s) {
            desired.push_back(s);
            return desired.size() < limit;
        });
        if (limit > tables_.size()) tables_.resize(limit);
        auto& stored = keys_[u];
        std::size_t common = std::min(stored.size(), desired.size());
        for (std::size_t i = 0; i < common; ++i) {
            if (stored[i] != desired[i]) {
                tables_[i].erase(NeighborKey{stored[i], u});
                tables_[i].insert(NeighborKey{desired[i], u});
            }
        }
        for (std::size_t i = common; i < desired.size(); ++i) {
            tables_[i].insert(NeighborKey{desired[i], u});
        }
        for (std::size_t i = desired.size(); i < stored.size(); ++i) {
            tables_[i].erase(NeighborKey{stored[i], u});
        }
        stored = std::move(desired);
    }

    std::vector<VertexId> find_core(double eps, std::size_t mu) const override {
        if (mu == 0) mu = 1;
        if (cap_ != 0 && mu > cap_) throw MuOutOfRangeError{};
        std::vector<VertexId> cores;
        if (mu > tables_.size()) return cores;
        tables_[mu - 1].walk([&](const NeighborKey& key) {
            if (key.sim < eps) return false;
            cores.push_back(key.id);
            return true;
        });
        std::sort(cores.begin(), cores.end());
        return cores;
    }

    const char* name() const override { return cap_ == 0 ? "mu-table" : "mu-table-small"; }

    void clear() override {
        tables_.clear();
        keys_.clear();
    }

    std::size_t memory_bytes() const override {
        std::size_t total = 0;
        for (const auto& t : tables_) total += t.memory_bytes();
        for (const auto& k : keys_) total += k.capacity() * sizeof(double);
        return total;
    }

    std::size_t cap() const { return cap_; }

    std::optional<double> stored_key(VertexId u, std::size_t i) const {
        if (u >= keys_.size() || i == 0 || i > keys_[u].size()) return std::nullopt;
        return keys_[u][i - 1];
    }

private:
    const SortedNeighborLists* lists_;
    std::size_t cap_;
    std::vector<OrderStatisticList<NeighborKey>> tables_; // tables_[i-1] = T[i]
    std::vector<std::vector<double>> keys_;
};

/// Direct scan: no maintained index; a vertex is a core iff its mu-th
/// largest stored similarity exists and is >= eps.
class NoTable final : public CoreFinder {
public:
    NoTable(const DynamicGraph& graph, const SortedNeighborLists& lists)
        : graph_(&graph), lists_(&lists) {}

    void update(VertexId) override {}

    std::vector<VertexId> find_core(double eps, std::size_t mu) const override {
        std::vector<VertexId> cores;
        for (VertexId u = 0; u < graph_->vertex_count(); ++u) {
            auto kth = lists_->kth_largest_sim(u, mu);
            if (kth && *kth >= eps) cores.push_back(u);
        }
        return cores;
    }

    const char* name() const override { return "no-table"; }
    void clear() override {}
    std::size_t memory_bytes() const override { return 0; }

private:
    const DynamicGraph* graph_;
    const SortedNeighborLists* lists_;
};

} // namespace dyscan

#endif
