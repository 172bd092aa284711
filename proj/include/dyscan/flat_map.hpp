#ifndef DYSCAN_FLAT_MAP_HPP
#define DYSCAN_FLAT_MAP_HPP

#include <cstdint>
#include <cstddef>
#include <bit>
#include <limits>
#include <vector>

#include "dyscan/rng.hpp"

namespace dyscan {

/// Open-addressing hash map with linear probing and backshift deletion.
/// Keys are unsigned integers; the all-ones key is reserved as the empty
/// sentinel (vertex ids are dense from zero and edge keys pack two of them,
/// so the sentinel never collides with a real key).
template <class Key, class Value>
class FlatMap {
public:
    static constexpr Key kEmpty = std::numeric_limits<Key>::max();

    FlatMap() { reset(16); }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    void clear() { reset(16); }

    const Value* find(Key key) const {
        std::size_t i = slot_of(key);
        while (keys_[i] != kEmpty) {
            if (keys_[i] == key) return &values_[i];
            i = (i + 1) & mask_;
        }
        return nullptr;
    }

    Value* find(Key key) {
        return const_cast<Value*>(static_cast<const FlatMap*>(this)->find(key));
    }

    bool contains(Key key) const { return find(key) != nullptr; }

    /// Inserts or overwrites; returns true when the key was new.
    bool put(Key key, Value value) {
        if ((size_ + 1) * 10 >= keys_.size() * 7) grow();
        std::size_t i = slot_of(key);
        while (keys_[i] != kEmpty) {
            if (keys_[i] == key) {
                values_[i] = value;
                return false;
            }
            i = (i + 1) & mask_;
        }
        keys_[i] = key;
        values_[i] = value;
        ++size_;
        return true;
    }

    /// Value reference, default-constructed on first access.
    Value& operator[](Key key) {
        if ((size_ + 1) * 10 >= keys_.size() * 7) grow();
        std::size_t i = slot_of(key);
        while (keys_[i] != kEmpty) {
            if (keys_[i] == key) return values_[i];
            i = (i + 1) & mask_;
        }
        keys_[i] = key;
        values_[i] = Value{};
        ++size_;
        return values_[i];
    }

    bool erase(Key key) {
        std::size_t i = slot_of(key);
        while (keys_[i] != kEmpty) {
            if (keys_[i] == key) {
                erase_slot(i);
                --size_;
                return true;
            }
            i = (i + 1) & mask_;
        }
        return false;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            if (keys_[i] != kEmpty) fn(keys_[i], values_[i]);
        }
    }

    std::size_t memory_bytes() const {
        return keys_.capacity() * sizeof(Key) + values_.capacity() * sizeof(Value);
    }

private:
    std::size_t slot_of(Key key) const {
        // Fibonacci hashing: one multiply, top bits select the slot
        return static_cast<std::size_t>(
            (static_cast<std::uint64_t>(key) * 0x9e3779b97f4a7c15ULL) >> shift_);
    }

    void reset(std::size_t capacity) {
        keys_.assign(capacity, kEmpty);
        values_.assign(capacity, Value{});
        mask_ = capacity - 1;
        shift_ = 64 - std::countr_zero(capacity);
        size_ = 0;
    }

    void grow() {
        std::vector<Key> old_keys = std::move(keys_);
        std::vector<Value> old_values = std::move(values_);
        reset(old_keys.size() * 2);
        for (std::size_t i = 0; i < old_keys.size(); ++i) {
            if (old_keys[i] != kEmpty) put(old_keys[i], old_values[i]);
        }
    }

    void erase_slot(std::size_t i) {
        // backshift: pull forward any element whose probe chain crosses i
        std::size_t j = i;
        while (true) {
            keys_[i] = kEmpty;
            while (true) {
                j = (j + 1) & mask_;
                if (keys_[j] == kEmpty) return;
                std::size_t home = slot_of(keys_[j]);
                bool movable = i <= j ? (home <= i || home > j) : (home <= i && home > j);
                if (movable) break;
            }
            keys_[i] = keys_[j];
            values_[i] = values_[j];
            i = j;
        }
    }

    std::vector<Key> keys_;
    std::vector<Value> values_;
    std::size_t mask_ = 0;
    int shift_ = 64;
    std::size_t size_ = 0;
};

} // namespace dyscan

#endif
