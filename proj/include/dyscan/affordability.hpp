#ifndef DYSCAN_AFFORDABILITY_HPP
#define DYSCAN_AFFORDABILITY_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dyscan/graph.hpp"

namespace dyscan {

struct DuplicateEntryError : std::runtime_error {
    DuplicateEntryError() : std::runtime_error("bucket entry already present") {}
};
struct MissingEntryError : std::runtime_error {
    MissingEntryError() : std::runtime_error("bucket entry not present") {}
};

/// Update-affordability quota for an edge.
///
/// tau = rho^2/4 * max(n_u, n_v); q is the largest power of two <= tau,
/// divided by 4. When that falls below 1 the quota clamps to q = 1 and the
/// edge is flagged for immediate recomputation on every affecting update
/// (at that point tau itself admits no slack, so any lazy schedule would
/// run stale).
struct Quota {
    double tau = 0.0;
    std::uint64_t q = 1;
    std::uint32_t bucket_index = 0;
    double floor2_tau = 0.0;
    bool clamped = false;
};

inline Quota compute_quota(std::size_t n_u, std::size_t n_v, double rho) {
    Quota quota;
    quota.tau = rho * rho / 4.0 * static_cast<double>(std::max(n_u, n_v));
    quota.floor2_tau = std::exp2(std::floor(std::log2(quota.tau)));
    double q_raw = quota.floor2_tau / 4.0;
    if (q_raw < 1.0) {
        quota.q = 1;
        quota.bucket_index = 0;
        quota.clamped = true;
    } else {
        quota.q = static_cast<std::uint64_t>(q_raw);
        quota.bucket_index = static_cast<std::uint32_t>(std::countr_zero(quota.q));
    }
    return quota;
}

/// Per-vertex affecting-update counters and power-of-two affordability
/// buckets. A bucket B_i holds the neighbors whose edge quota is 2^i; a
/// second visit of an entry reports the edge for recomputation.
class AffordabilityIndex {
public:
    struct Entry {
        VertexId neighbor;
        bool visited_once;
        bool immediate;
    };

    struct Bucket {
        std::uint32_t index;
        std::uint64_t counter_snapshot; // c̄: value of c_u at last visit
        std::vector<Entry> entries;
    };

    void on_update(VertexId u, VertexId v) {
        grow(std::max(u, v));
        ++states_[u].counter;
        ++states_[v].counter;
    }

    void insert_entry(VertexId u, VertexId v, const Quota& quota) {
        grow(std::max(u, v));
        if (states_[u].locator.count(v) || states_[v].locator.count(u)) {
            throw DuplicateEntryError{};
        }
        insert_one(u, v, quota);
        insert_one(v, u, quota);
    }

    void delete_entry(VertexId u, VertexId v) {
        if (u >= states_.size() || v >= states_.size() ||
            !states_[u].locator.count(v) || !states_[v].locator.count(u)) {
            throw MissingEntryError{};
        }
        delete_one(u, v);
        delete_one(v, u);
    }

    bool has_entry(VertexId u, VertexId v) const {
        return u < states_.size() && states_[u].locator.count(v) > 0;
    }

    /// Scans both endpoints' bucket lists in increasing index order and
    /// returns the deduplicated set of edges whose entries were visited for
    /// the second time, normalized and sorted.
    std::vector<std::pair<VertexId, VertexId>> find_invalid(VertexId u, VertexId v) {
        std::vector<std::pair<VertexId, VertexId>> found;
        scan_side(u, found);
        scan_side(v, found);
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
        return found;
    }

    std::uint64_t counter(VertexId u) const {
        return u < states_.size() ? states_[u].counter : 0;
    }

    /// Minimum materialized bucket index >= from, via the bitmask.
    std::optional<std::uint32_t> successor(VertexId u, std::uint32_t from) const {
        if (u >= states_.size() || from >= 64) return std::nullopt;
        std::uint64_t masked = states_[u].mask & (~0ULL << from);
        if (masked == 0) return std::nullopt;
        return static_cast<std::uint32_t>(std::countr_zero(masked));
    }

    const std::vector<Bucket>& buckets(VertexId u) const {
        static const std::vector<Bucket> empty;
        return u < states_.size() ? states_[u].buckets : empty;
    }

    std::optional<Entry> entry(VertexId u, VertexId v) const {
        if (u >= states_.size()) return std::nullopt;
        auto it = states_[u].locator.find(v);
        if (it == states_[u].locator.end()) return std::nullopt;
        const Bucket& b = states_[u].buckets[bucket_slot(states_[u], it->second.bucket_index)];
        return b.entries[it->second.entry_slot];
    }

    std::size_t total_entries(VertexId u) const {
        if (u >= states_.size()) return 0;
        std::size_t total = 0;
        for (const auto& b : states_[u].buckets) total += b.entries.size();
        return total;
    }

    void clear() {
        states_.clear();
        entries_visited_total = 0;
        buckets_checked_total = 0;
    }

    std::size_t memory_bytes() const {
        std::size_t total = 0;
        for (const auto& s : states_) {
            total += sizeof(s) + s.locator.size() * 28;
            for (const auto& b : s.buckets) total += sizeof(Bucket) + b.entries.capacity() * sizeof(Entry);
        }
        return total;
    }

    // instrumentation (cumulative)
    std::uint64_t entries_visited_total = 0;
    std::uint64_t buckets_checked_total = 0;

private:
    struct Locator {
        std::uint32_t bucket_index;
        std::uint32_t entry_slot;
    };

    struct VertexState {
        std::uint64_t counter = 0;
        std::uint64_t mask = 0;
        std::vector<Bucket> buckets; // sorted by index
        std::unordered_map<VertexId, Locator> locator;
    };

    void grow(VertexId u) {
        if (u >= states_.size()) states_.resize(u + 1);
    }

    void insert_one(VertexId u, VertexId v, const Quota& quota) {
        VertexState& s = states_[u];
        std::uint32_t idx = quota.bucket_index;
        std::uint32_t slot;
        if (!(s.mask & (1ULL << idx))) {
            slot = bucket_slot(s, idx);
            s.buckets.insert(s.buckets.begin() + slot, Bucket{idx, s.counter, {}});
            s.mask |= 1ULL << idx;
        } else {
            slot = bucket_slot(s, idx);
        }
        Bucket& b = s.buckets[slot];
        // clamped quotas skip the one-visit grace: preset visited so the next
        // bucket check reports the edge at once
        b.entries.push_back(Entry{v, quota.clamped, quota.clamped});
        s.locator[v] = Locator{idx, static_cast<std::uint32_t>(b.entries.size() - 1)};
    }

    void delete_one(VertexId u, VertexId v) {
        VertexState& s = states_[u];
        Locator loc = s.locator.at(v);
        std::uint32_t slot = bucket_slot(s, loc.bucket_index);
        Bucket& b = s.buckets[slot];
        Entry last = b.entries.back();
        b.entries[loc.entry_slot] = last;
        if (last.neighbor != v) s.locator[last.neighbor].entry_slot = loc.entry_slot;
        b.entries.pop_back();
        s.locator.erase(v);
        if (b.entries.empty()) {
            s.mask &= ~(1ULL << b.index);
            s.buckets.erase(s.buckets.begin() + slot);
        }
    }

    std::uint32_t bucket_slot(const VertexState& s, std::uint32_t index) const {
        auto it = std::lower_bound(s.buckets.begin(), s.buckets.end(), index,
                                   [](const Bucket& b, std::uint32_t i) { return b.index < i; });
        return static_cast<std::uint32_t>(it - s.buckets.begin());
    }

    void scan_side(VertexId u, std::vector<std::pair<VertexId, VertexId>>& found) {
        if (u >= states_.size()) return;
        VertexState& s = states_[u];
        std::uint32_t from = 0;
        while (auto idx = successor(u, from)) {
            Bucket& b = s.buckets[bucket_slot(s, *idx)];
            std::uint64_t step = 1ULL << b.index;
            if (s.counter / step <= b.counter_snapshot / step) break;
            ++buckets_checked_total;
            for (Entry& e : b.entries) {
                ++entries_visited_total;
                if (e.visited_once) {
                    found.push_back(normalize_edge(u, e.neighbor));
                } else {
                    e.visited_once = true;
                }
            }
            b.counter_snapshot = s.counter;
            from = b.index + 1;
        }
    }

    std::vector<VertexState> states_;
};

} // namespace dyscan

#endif
