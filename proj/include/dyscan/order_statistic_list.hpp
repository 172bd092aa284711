#ifndef DYSCAN_ORDER_STATISTIC_LIST_HPP
#define DYSCAN_ORDER_STATISTIC_LIST_HPP

#include <cstdint>
#include <cstddef>
#include <vector>

#include "dyscan/rng.hpp"

namespace dyscan {

/// Ordered multiset-like container with logarithmic rank access, backed by a
/// treap over a node pool. Keys must be strict-weak-ordered by `operator<`
/// and unique (callers embed a tie-breaking id in the key).
///
/// Priorities are derived deterministically from a per-instance salt so that
/// identical operation sequences rebuild identical trees.
template <class Key>
class OrderStatisticList {
public:
    OrderStatisticList() : salt_(0x6a09e667f3bcc909ULL) {}
    explicit OrderStatisticList(std::uint64_t salt) : salt_(salt) {}

    std::size_t size() const { return root_ == kNil ? 0 : nodes_[root_].size; }
    bool empty() const { return root_ == kNil; }

    void clear() {
        nodes_.clear();
        free_.clear();
        root_ = kNil;
        inserted_ = 0;
    }

    /// Inserts a key; returns false if an equal key is already present.
    bool insert(const Key& key) {
        if (find_node(key) != kNil) return false;
        std::uint32_t node = alloc_node(key);
        root_ = insert_at(root_, node);
        return true;
    }

    /// Removes the node with a key equal to `key`; returns false if absent.
    bool erase(const Key& key) {
        bool removed = false;
        root_ = erase_at(root_, key, removed);
        return removed;
    }

    bool contains(const Key& key) const { return find_node(key) != kNil; }

    /// 0-based rank access; rank 0 is the smallest key under `operator<`.
    const Key* kth(std::size_t rank) const {
        if (rank >= size()) return nullptr;
        std::uint32_t cur = root_;
        while (cur != kNil) {
            std::size_t left = subtree_size(nodes_[cur].left);
            if (rank < left) {
                cur = nodes_[cur].left;
            } else if (rank == left) {
                return &nodes_[cur].key;
            } else {
                rank -= left + 1;
                cur = nodes_[cur].right;
            }
        }
        return nullptr;
    }

    /// Number of stored keys strictly less than `key`.
    std::size_t count_less(const Key& key) const {
        std::size_t count = 0;
        std::uint32_t cur = root_;
        while (cur != kNil) {
            if (nodes_[cur].key < key) {
                count += subtree_size(nodes_[cur].left) + 1;
                cur = nodes_[cur].right;
            } else {
                cur = nodes_[cur].left;
            }
        }
        return count;
    }

    /// In-order traversal from the smallest key; stops when `fn` returns false.
    template <class Fn>
    void walk(Fn&& fn) const {
        walk_rec(root_, fn);
    }

    std::size_t memory_bytes() const {
        return nodes_.capacity() * sizeof(Node) + free_.capacity() * sizeof(std::uint32_t);
    }

private:
    static constexpr std::uint32_t kNil = 0xffffffffu;

    struct Node {
        Key key;
        std::uint64_t priority;
        std::uint32_t left = kNil;
        std::uint32_t right = kNil;
        std::uint32_t size = 1;
    };

    std::size_t subtree_size(std::uint32_t n) const { return n == kNil ? 0 : nodes_[n].size; }

    void pull(std::uint32_t n) {
        nodes_[n].size = static_cast<std::uint32_t>(subtree_size(nodes_[n].left) + subtree_size(nodes_[n].right) + 1);
    }

    std::uint32_t alloc_node(const Key& key) {
        std::uint32_t idx;
        if (!free_.empty()) {
            idx = free_.back();
            free_.pop_back();
            nodes_[idx] = Node{};
        } else {
            idx = static_cast<std::uint32_t>(nodes_.size());
            nodes_.emplace_back();
        }
        nodes_[idx].key = key;
        nodes_[idx].priority = splitmix64(salt_ ^ (0x9e3779b97f4a7c15ULL * ++inserted_));
        return idx;
    }

    std::uint32_t find_node(const Key& key) const {
        std::uint32_t cur = root_;
        while (cur != kNil) {
            if (key < nodes_[cur].key) {
                cur = nodes_[cur].left;
            } else if (nodes_[cur].key < key) {
                cur = nodes_[cur].right;
            } else {
                return cur;
            }
        }
        return kNil;
    }

    std::uint32_t rotate_right(std::uint32_t n) {
        std::uint32_t l = nodes_[n].left;
        nodes_[n].left = nodes_[l].right;
        nodes_[l].right = n;
        pull(n);
        pull(l);
        return l;
    }

    std::uint32_t rotate_left(std::uint32_t n) {
        std::uint32_t r = nodes_[n].right;
        nodes_[n].right = nodes_[r].left;
        nodes_[r].left = n;
        pull(n);
        pull(r);
        return r;
    }

    std::uint32_t insert_at(std::uint32_t cur, std::uint32_t node) {
        if (cur == kNil) return node;
        if (nodes_[node].key < nodes_[cur].key) {
            nodes_[cur].left = insert_at(nodes_[cur].left, node);
            pull(cur);
            if (nodes_[nodes_[cur].left].priority > nodes_[cur].priority) cur = rotate_right(cur);
        } else {
            nodes_[cur].right = insert_at(nodes_[cur].right, node);
            pull(cur);
            if (nodes_[nodes_[cur].right].priority > nodes_[cur].priority) cur = rotate_left(cur);
        }
        return cur;
    }

    std::uint32_t erase_at(std::uint32_t cur, const Key& key, bool& removed) {
        if (cur == kNil) return kNil;
        if (key < nodes_[cur].key) {
            nodes_[cur].left = erase_at(nodes_[cur].left, key, removed);
        } else if (nodes_[cur].key < key) {
            nodes_[cur].right = erase_at(nodes_[cur].right, key, removed);
        } else {
            removed = true;
            cur = join(nodes_[cur].left, nodes_[cur].right, cur);
            return cur;
        }
        pull(cur);
        return cur;
    }

    std::uint32_t join(std::uint32_t a, std::uint32_t b, std::uint32_t freed) {
        free_.push_back(freed);
        if (a == kNil) return b;
        if (b == kNil) return a;
        if (nodes_[a].priority > nodes_[b].priority) {
            nodes_[a].right = join_keep(nodes_[a].right, b);
            pull(a);
            return a;
        }
        nodes_[b].left = join_keep(a, nodes_[b].left);
        pull(b);
        return b;
    }

    std::uint32_t join_keep(std::uint32_t a, std::uint32_t b) {
        if (a == kNil) return b;
        if (b == kNil) return a;
        if (nodes_[a].priority > nodes_[b].priority) {
            nodes_[a].right = join_keep(nodes_[a].right, b);
            pull(a);
            return a;
        }
        nodes_[b].left = join_keep(a, nodes_[b].left);
        pull(b);
        return b;
    }

    template <class Fn>
    bool walk_rec(std::uint32_t cur, Fn& fn) const {
        if (cur == kNil) return true;
        if (!walk_rec(nodes_[cur].left, fn)) return false;
        if (!fn(nodes_[cur].key)) return false;
        return walk_rec(nodes_[cur].right, fn);
    }

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> free_;
    std::uint32_t root_ = kNil;
    std::uint64_t salt_;
    std::uint64_t inserted_ = 0;
};

} // namespace dyscan

#endif
