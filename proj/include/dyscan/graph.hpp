#ifndef DYSCAN_GRAPH_HPP
#define DYSCAN_GRAPH_HPP

#include <cstdint>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dyscan/flat_map.hpp"
#include "dyscan/rng.hpp"

namespace dyscan {

using VertexId = std::uint32_t;

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SelfLoopError : GraphError {
    SelfLoopError() : GraphError("self-loops are not allowed") {}
};
struct DuplicateEdgeError : GraphError {
    DuplicateEdgeError() : GraphError("edge already present") {}
};
struct MissingEdgeError : GraphError {
    MissingEdgeError() : GraphError("edge not present") {}
};

inline std::uint64_t edge_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

inline std::pair<VertexId, VertexId> normalize_edge(VertexId u, VertexId v) {
    return u <= v ? std::make_pair(u, v) : std::make_pair(v, u);
}

/// Unordered set of vertex ids with O(1) expected membership and O(1)
/// uniform sampling (dense backing array + position map).
class IndexedSet {
public:
    bool contains(VertexId x) const { return pos_.contains(x); }

    bool insert(VertexId x) {
        if (contains(x)) return false;
        pos_.put(x, static_cast<std::uint32_t>(items_.size()));
        items_.push_back(x);
        return true;
    }

    bool erase(VertexId x) {
        const std::uint32_t* idx_ptr = pos_.find(x);
        if (!idx_ptr) return false;
        std::uint32_t idx = *idx_ptr;
        VertexId last = items_.back();
        items_[idx] = last;
        items_.pop_back();
        pos_.erase(x);
        if (last != x) pos_.put(last, idx);
        return true;
    }

    std::size_t size() const { return items_.size(); }
    VertexId at(std::size_t i) const { return items_[i]; }
    const std::vector<VertexId>& items() const { return items_; }

    std::size_t memory_bytes() const {
        return items_.capacity() * sizeof(VertexId) + pos_.memory_bytes();
    }

private:
    std::vector<VertexId> items_;
    FlatMap<VertexId, std::uint32_t> pos_;
};

/// Dynamic undirected simple graph. Vertices are dense ids; edge updates on
/// unseen ids implicitly create isolated vertices.
class DynamicGraph {
public:
    std::size_t vertex_count() const { return adj_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    void ensure_vertex(VertexId u) {
        if (u == std::numeric_limits<VertexId>::max()) {
            throw GraphError("vertex id out of range"); // reserved sentinel
        }
        if (u >= adj_.size()) adj_.resize(u + 1);
    }

    std::size_t degree(VertexId u) const {
        return u < adj_.size() ? adj_[u].size() : 0;
    }

    /// n_u = d_u + 1, the inclusive neighborhood size.
    std::size_t inclusive_size(VertexId u) const { return degree(u) + 1; }

    bool has_edge(VertexId u, VertexId v) const { return edge_pos_.contains(edge_key(u, v)); }

    void insert_edge(VertexId u, VertexId v) {
        if (u == v) throw SelfLoopError{};
        if (has_edge(u, v)) throw DuplicateEdgeError{};
        ensure_vertex(u);
        ensure_vertex(v);
        adj_[u].insert(v);
        adj_[v].insert(u);
        auto [a, b] = normalize_edge(u, v);
        edge_pos_.put(edge_key(a, b), static_cast<std::uint32_t>(edges_.size()));
        edges_.emplace_back(a, b);
    }

    void delete_edge(VertexId u, VertexId v) {
        std::uint64_t key = edge_key(u, v);
        const std::uint32_t* idx_ptr = edge_pos_.find(key);
        if (!idx_ptr) throw MissingEdgeError{};
        std::uint32_t idx = *idx_ptr;
        adj_[u].erase(v);
        adj_[v].erase(u);
        auto last = edges_.back();
        edges_[idx] = last;
        edges_.pop_back();
        edge_pos_.erase(key);
        if (edge_key(last.first, last.second) != key) {
            edge_pos_.put(edge_key(last.first, last.second), idx);
        }
    }

    const IndexedSet& neighbors(VertexId u) const {
        static const IndexedSet empty;
        return u < adj_.size() ? adj_[u] : empty;
    }

    /// Tests w ∈ N[u] (inclusive neighborhood).
    bool in_inclusive(VertexId u, VertexId w) const {
        return w == u || (u < adj_.size() && adj_[u].contains(w));
    }

    /// Uniform sample from N[u]; index d_u maps to u itself.
    VertexId sample_inclusive(VertexId u, Rng& rng) const {
        std::size_t d = degree(u);
        std::uint64_t i = rng.below(d + 1);
        return i == d ? u : adj_[u].at(i);
    }

    const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }

    std::pair<VertexId, VertexId> sample_edge(Rng& rng) const {
        return edges_[rng.below(edges_.size())];
    }

    std::size_t memory_bytes() const {
        std::size_t total =
            edges_.capacity() * sizeof(std::pair<VertexId, VertexId>) + edge_pos_.memory_bytes();
        for (const auto& s : adj_) total += s.memory_bytes();
        return total;
    }

private:
    std::vector<IndexedSet> adj_;
    std::vector<std::pair<VertexId, VertexId>> edges_;
    FlatMap<std::uint64_t, std::uint32_t> edge_pos_;
};

struct IngestResult {
    std::vector<std::pair<VertexId, VertexId>> edges; // dense remapped ids
    std::vector<std::uint64_t> labels;                // labels[id] = original label
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicates = 0;
};

/// Reads a whitespace-separated `u v` edge list (SNAP style). Lines starting
/// with '#' are comments; self-loops and duplicate edges are dropped.
inline IngestResult ingest_edge_list(std::istream& in) {
    IngestResult result;
    std::unordered_map<std::uint64_t, VertexId> remap;
    std::unordered_map<std::uint64_t, bool> seen;
    auto map_id = [&](std::uint64_t label) {
        auto it = remap.find(label);
        if (it != remap.end()) return it->second;
        VertexId id = static_cast<VertexId>(result.labels.size());
        remap.emplace(label, id);
        result.labels.push_back(label);
        return id;
    };
    std::string line;
    while (std::getline(in, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ls(line);
        std::uint64_t a, b;
        if (!(ls >> a >> b)) continue;
        if (a == b) {
            ++result.dropped_self_loops;
            continue;
        }
        VertexId u = map_id(a), v = map_id(b);
        std::uint64_t key = edge_key(u, v);
        if (seen.count(key)) {
            ++result.dropped_duplicates;
            continue;
        }
        seen.emplace(key, true);
        result.edges.emplace_back(u, v);
    }
    return result;
}

} // namespace dyscan

#endif
