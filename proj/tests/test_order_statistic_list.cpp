#include <algorithm>
#include <vector>

#include <catch_amalgamated.hpp>

#include "dyscan/neighbor_lists.hpp"
#include "dyscan/order_statistic_list.hpp"
#include "dyscan/rng.hpp"

using namespace dyscan;

namespace {

// reference implementation: sorted vector with linear maintenance
struct BruteList {
    std::vector<NeighborKey> keys;

    void insert(NeighborKey k) {
        keys.insert(std::upper_bound(keys.begin(), keys.end(), k), k);
    }
    void erase(NeighborKey k) {
        auto it = std::find(keys.begin(), keys.end(), k);
        if (it != keys.end()) keys.erase(it);
    }
};

} // namespace

TEST_CASE("insert, erase and rank agree with a linear-scan reference") {
    Rng rng(42);
    OrderStatisticList<NeighborKey> list;
    BruteList brute;
    std::vector<NeighborKey> live;

    for (int step = 0; step < 4000; ++step) {
        bool do_insert = live.empty() || rng.uniform() < 0.6;
        if (do_insert) {
            NeighborKey key{static_cast<double>(rng.below(32)) / 32.0,
                            static_cast<VertexId>(rng.below(512))};
            if (list.insert(key)) {
                brute.insert(key);
                live.push_back(key);
            }
        } else {
            std::size_t pick = rng.below(live.size());
            NeighborKey key = live[pick];
            REQUIRE(list.erase(key));
            brute.erase(key);
            live[pick] = live.back();
            live.pop_back();
        }
    }

    REQUIRE(list.size() == brute.keys.size());
    for (std::size_t r = 0; r < brute.keys.size(); ++r) {
        const NeighborKey* k = list.kth(r);
        REQUIRE(k != nullptr);
        CHECK(*k == brute.keys[r]);
    }
    for (int probe = 0; probe < 50; ++probe) {
        NeighborKey key{static_cast<double>(rng.below(33)) / 32.0,
                        static_cast<VertexId>(rng.below(600))};
        std::size_t expected = static_cast<std::size_t>(
            std::lower_bound(brute.keys.begin(), brute.keys.end(), key) - brute.keys.begin());
        CHECK(list.count_less(key) == expected);
    }
}

TEST_CASE("walk visits keys in order and honors early exit") {
    OrderStatisticList<NeighborKey> list;
    list.insert(NeighborKey{0.9, 3});
    list.insert(NeighborKey{0.5, 1});
    list.insert(NeighborKey{0.5, 7});
    list.insert(NeighborKey{0.1, 2});

    std::vector<VertexId> order;
    list.walk([&](const NeighborKey& k) {
        order.push_back(k.id);
        return true;
    });
    CHECK(order == std::vector<VertexId>{3, 1, 7, 2});

    order.clear();
    list.walk([&](const NeighborKey& k) {
        if (k.sim < 0.5) return false;
        order.push_back(k.id);
        return true;
    });
    CHECK(order == std::vector<VertexId>{3, 1, 7});
}

TEST_CASE("kth out of range returns null") {
    OrderStatisticList<NeighborKey> list;
    CHECK(list.kth(0) == nullptr);
    list.insert(NeighborKey{0.3, 0});
    CHECK(list.kth(0) != nullptr);
    CHECK(list.kth(1) == nullptr);
}

TEST_CASE("duplicate keys are rejected") {
    OrderStatisticList<NeighborKey> list;
    CHECK(list.insert(NeighborKey{0.7, 4}));
    CHECK_FALSE(list.insert(NeighborKey{0.7, 4}));
    CHECK(list.insert(NeighborKey{0.7, 5})); // distinct id, same sim
    CHECK(list.size() == 2);
}
