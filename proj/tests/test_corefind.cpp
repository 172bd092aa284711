#include <algorithm>
#include <set>

#include <catch_amalgamated.hpp>

#include "dyscan/corefind.hpp"
#include "dyscan/graph.hpp"
#include "dyscan/neighbor_lists.hpp"
#include "dyscan/rng.hpp"

using namespace dyscan;

namespace {

void set_and_update(SortedNeighborLists& lists, CoreFinder& finder, VertexId u, VertexId v,
                    double sim) {
    lists.set(u, v, sim);
    finder.update(u);
    finder.update(v);
}

std::vector<VertexId> scan_cores(const SortedNeighborLists& lists, std::size_t n, double eps,
                                 std::size_t mu) {
    std::vector<VertexId> cores;
    for (VertexId u = 0; u < n; ++u) {
        auto kth = lists.kth_largest_sim(u, mu);
        if (kth && *kth >= eps) cores.push_back(u);
    }
    return cores;
}

} // namespace

TEST_CASE("level counts for a small neighborhood") {
    SortedNeighborLists lists;
    DeltaTable table(lists, 0.2);
    REQUIRE(table.level_count() == 5);
    set_and_update(lists, table, 0, 10, 0.9);
    set_and_update(lists, table, 0, 11, 0.5);
    set_and_update(lists, table, 0, 12, 0.3);

    CHECK(table.stored_key(0, 0) == 3);
    CHECK(table.stored_key(0, 1) == 3);
    CHECK(table.stored_key(0, 2) == 2);
    CHECK(table.stored_key(0, 3) == 1);
    CHECK(table.stored_key(0, 4) == 1);
}

TEST_CASE("isolated vertices leave the level table") {
    SortedNeighborLists lists;
    DeltaTable table(lists, 0.25);
    set_and_update(lists, table, 0, 1, 0.6);
    CHECK(table.tracks(0));
    lists.erase(0, 1);
    table.update(0);
    table.update(1);
    CHECK_FALSE(table.tracks(0));
    CHECK_FALSE(table.tracks(1));
}

TEST_CASE("all-ones neighborhood counts the full degree at every level") {
    SortedNeighborLists lists;
    DeltaTable table(lists, 0.2);
    for (VertexId w = 1; w <= 4; ++w) set_and_update(lists, table, 0, w, 1.0);
    for (std::size_t i = 0; i < table.level_count(); ++i) {
        CHECK(table.stored_key(0, i) == 4);
    }
}

TEST_CASE("level-table core retrieval on the worked schema") {
    SortedNeighborLists lists;
    DeltaTable table(lists, 0.2);
    // v1 has five neighbors similar at level [0.2, 0.4), v3 four, v2 three
    VertexId v1 = 1, v2 = 2, v3 = 3;
    double v1_sims[] = {0.9, 0.8, 0.5, 0.3, 0.25};
    double v3_sims[] = {0.35, 0.3, 0.28, 0.22};
    double v2_sims[] = {0.5, 0.4, 0.3};
    VertexId next = 10;
    for (double s : v1_sims) set_and_update(lists, table, v1, next++, s);
    for (double s : v3_sims) set_and_update(lists, table, v3, next++, s);
    for (double s : v2_sims) set_and_update(lists, table, v2, next++, s);

    CHECK(table.level_of(0.3) == 1);
    CHECK(table.find_core(0.3, 4) == std::vector<VertexId>{v1, v3});

    SECTION("mu = 1 returns every vertex with a similar neighbor at the level") {
        auto cores = table.find_core(0.3, 1);
        // leaves hold one edge each at sims >= 0.22 >= 0.2
        CHECK(cores.size() == 3 + 12);
    }
    SECTION("mu above every count returns nothing") {
        CHECK(table.find_core(0.3, 6).empty());
    }
}

TEST_CASE("rank table keys follow the k-th largest sims") {
    SortedNeighborLists lists;
    MuTable table(lists, 0);
    set_and_update(lists, table, 0, 5, 0.8);
    CHECK(table.stored_key(0, 1) == 0.8);

    set_and_update(lists, table, 1, 6, 0.9);
    set_and_update(lists, table, 1, 7, 0.4);
    CHECK(table.stored_key(1, 2) == 0.4);
}

TEST_CASE("small rank table caps its rows") {
    SortedNeighborLists lists;
    MuTable table(lists, 15);
    for (VertexId w = 100; w < 120; ++w) set_and_update(lists, table, 0, w, 0.5);
    CHECK(table.stored_key(0, 15).has_value());
    CHECK_FALSE(table.stored_key(0, 16).has_value());
    CHECK_THROWS_AS(table.find_core(0.2, 16), MuOutOfRangeError);
}

TEST_CASE("rank-table core retrieval scans the head of one row") {
    SortedNeighborLists lists;
    MuTable table(lists, 0);
    VertexId a = 0, b = 1, c = 2;
    set_and_update(lists, table, a, 10, 0.95);
    set_and_update(lists, table, a, 11, 0.9);
    set_and_update(lists, table, b, 12, 0.7);
    set_and_update(lists, table, b, 13, 0.6);
    set_and_update(lists, table, c, 14, 0.35);
    set_and_update(lists, table, c, 15, 0.3);
    CHECK(table.find_core(0.5, 2) == std::vector<VertexId>{a, b});
}

TEST_CASE("direct scan basics") {
    DynamicGraph g;
    SortedNeighborLists lists;
    NoTable scan(g, lists);
    CHECK(scan.find_core(0.3, 1).empty());

    g.insert_edge(0, 1);
    lists.set(0, 1, 0.4);
    g.insert_edge(2, 3);
    lists.set(2, 3, 0.1);
    auto cores = scan.find_core(0.2, 1);
    CHECK(cores == std::vector<VertexId>{0, 1});
}

TEST_CASE("strategies agree under random stored sims") {
    Rng rng(71);
    for (int trial = 0; trial < 15; ++trial) {
        DynamicGraph g;
        SortedNeighborLists lists;
        double delta = 0.1;
        DeltaTable delta_table(lists, delta);
        MuTable full_table(lists, 0);
        NoTable scan(g, lists);

        std::size_t n = 30;
        g.ensure_vertex(static_cast<VertexId>(n - 1));
        for (int e = 0; e < 120; ++e) {
            VertexId u = static_cast<VertexId>(rng.below(n));
            VertexId v = static_cast<VertexId>(rng.below(n));
            if (u == v || g.has_edge(u, v)) continue;
            g.insert_edge(u, v);
            double sim = static_cast<double>(rng.below(101)) / 100.0;
            lists.set(u, v, sim);
            delta_table.update(u);
            delta_table.update(v);
            full_table.update(u);
            full_table.update(v);
        }

        for (int q = 0; q < 25; ++q) {
            double eps = rng.uniform(0.05, 0.95);
            std::size_t mu = 1 + rng.below(6);
            auto expected = scan_cores(lists, n, eps, mu);

            CHECK(scan.find_core(eps, mu) == expected);
            CHECK(full_table.find_core(eps, mu) == expected);

            // level quantization may only add vertices whose decisive sim
            // lies in [level*delta, eps)
            auto with_delta = delta_table.find_core(eps, mu);
            double level_lo = static_cast<double>(delta_table.level_of(eps)) * delta;
            std::set<VertexId> expected_set(expected.begin(), expected.end());
            for (VertexId u : with_delta) {
                if (expected_set.count(u)) continue;
                auto kth = lists.kth_largest_sim(u, mu);
                REQUIRE(kth.has_value());
                CHECK(*kth >= level_lo);
                CHECK(*kth < eps);
            }
            std::set<VertexId> delta_set(with_delta.begin(), with_delta.end());
            for (VertexId u : expected) {
                CHECK(delta_set.count(u) == 1); // widening is one-sided
            }
        }
    }
}

TEST_CASE("level and rank tables survive churn with consistent keys") {
    Rng rng(97);
    DynamicGraph g;
    SortedNeighborLists lists;
    DeltaTable delta_table(lists, 0.2);
    MuTable small_table(lists, 5);
    std::size_t n = 16;
    g.ensure_vertex(static_cast<VertexId>(n - 1));

    for (int step = 0; step < 1500; ++step) {
        VertexId u = static_cast<VertexId>(rng.below(n));
        VertexId v = static_cast<VertexId>(rng.below(n));
        if (u == v) continue;
        if (g.has_edge(u, v)) {
            if (rng.uniform() < 0.5) {
                g.delete_edge(u, v);
                lists.erase(u, v);
            } else {
                lists.set(u, v, static_cast<double>(rng.below(11)) / 10.0);
            }
        } else {
            g.insert_edge(u, v);
            lists.set(u, v, static_cast<double>(rng.below(11)) / 10.0);
        }
        delta_table.update(u);
        delta_table.update(v);
        small_table.update(u);
        small_table.update(v);

        if (step % 250 == 0) {
            for (VertexId x = 0; x < n; ++x) {
                REQUIRE(delta_table.tracks(x) == (g.degree(x) >= 1));
                if (delta_table.tracks(x)) {
                    auto counts = delta_table.level_counts(x);
                    for (std::size_t i = 0; i < counts.size(); ++i) {
                        REQUIRE(delta_table.stored_key(x, i) == counts[i]);
                    }
                }
                std::size_t limit = std::min<std::size_t>(g.degree(x), 5);
                for (std::size_t i = 1; i <= limit; ++i) {
                    REQUIRE(small_table.stored_key(x, i) == lists.kth_largest_sim(x, i));
                }
                REQUIRE_FALSE(small_table.stored_key(x, limit + 1).has_value());
            }
        }
    }
}
