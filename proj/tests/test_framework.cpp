#include <algorithm>
#include <vector>

#include <catch_amalgamated.hpp>

#include "dyscan/audits.hpp"
#include "dyscan/baselines.hpp"
#include "dyscan/engine.hpp"

using namespace dyscan;

namespace {

// Two mirrored communities around centers 0 and 7, bridged by vertex 6 and
// with a pendant 5: at eps = 0.5, mu = 4 (Jaccard) the cores are {0, 7},
// vertex 6 is a hub and vertex 5 an outlier.
std::vector<std::pair<VertexId, VertexId>> two_community_fixture() {
    return {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {2, 5}, {4, 6},
            {6, 8}, {7, 8}, {7, 9}, {7, 10}, {7, 11}, {8, 9}, {9, 10}, {10, 11}};
}

EngineConfig config_for(Algorithm algorithm, double rho_star = 0.02, std::uint64_t seed = 1) {
    EngineConfig cfg;
    cfg.algorithm = algorithm;
    cfg.rho_star = rho_star;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::pair<VertexId, VertexId>> random_edges(std::size_t n, std::size_t m, Rng& rng) {
    DynamicGraph g;
    g.ensure_vertex(static_cast<VertexId>(n - 1));
    std::vector<std::pair<VertexId, VertexId>> edges;
    while (edges.size() < m) {
        VertexId u = static_cast<VertexId>(rng.below(n));
        VertexId v = static_cast<VertexId>(rng.below(n));
        if (u == v || g.has_edge(u, v)) continue;
        g.insert_edge(u, v);
        edges.emplace_back(u, v);
    }
    return edges;
}

} // namespace

TEST_CASE("insert into an empty graph touches only the new edge") {
    Engine engine(config_for(Algorithm::VdStar));
    engine.load({});
    UpdateReport report = engine.apply_update(UpdateKind::Insert, 0, 1);
    CHECK(report.invalidated == 0);
    CHECK(report.cal_sim_calls == 1);
    CHECK(engine.stored_sim(0, 1).has_value());
}

TEST_CASE("deleting the only edge tears every structure down") {
    Engine engine(config_for(Algorithm::VdStar));
    engine.load({{0, 1}});
    engine.apply_update(UpdateKind::Delete, 0, 1);
    CHECK(engine.graph().edge_count() == 0);
    CHECK(engine.lists().list_size(0) == 0);
    CHECK(engine.lists().list_size(1) == 0);
    CHECK_FALSE(engine.stored_sim(0, 1).has_value());
    const auto& afford = engine.affordability_index()->affordability();
    CHECK(afford.total_entries(0) == 0);
    CHECK(afford.total_entries(1) == 0);
    auto issues = audits::check_structures(engine);
    CHECK(issues.empty());
}

TEST_CASE("update errors propagate from the graph") {
    Engine engine(config_for(Algorithm::VdStar));
    engine.load({{0, 1}});
    CHECK_THROWS_AS(engine.apply_update(UpdateKind::Insert, 0, 1), DuplicateEdgeError);
    CHECK_THROWS_AS(engine.apply_update(UpdateKind::Insert, 2, 2), SelfLoopError);
    CHECK_THROWS_AS(engine.apply_update(UpdateKind::Delete, 0, 5), MissingEdgeError);
    // failed updates must not corrupt state
    CHECK(audits::check_structures(engine).empty());
}

TEST_CASE("a lazily tracked edge is eventually recomputed") {
    // unclamped quota regime: large star, large budget
    EngineConfig cfg = config_for(Algorithm::VdStarNoT, 0.9);
    cfg.affordability_audit = true;
    Engine engine(cfg);
    std::vector<std::pair<VertexId, VertexId>> edges{{0, 1}};
    for (VertexId w = 2; w <= 31; ++w) edges.emplace_back(0, w);
    for (VertexId w = 32; w <= 61; ++w) edges.emplace_back(1, w);
    engine.load(edges);

    Quota q = compute_quota(engine.graph().inclusive_size(0), engine.graph().inclusive_size(1), 0.9);
    REQUIRE_FALSE(q.clamped);

    double before = *engine.stored_sim(0, 1);
    // churn other edges incident on the hub; edge (0, 1) must get refreshed
    // within its affordability window
    VertexId fresh = 100;
    bool changed = false;
    for (int i = 0; i < static_cast<int>(4 * q.q + 4) && !changed; ++i) {
        engine.apply_update(UpdateKind::Insert, 0, fresh++);
        changed = engine.stored_sim(0, 1).value() != before;
    }
    CHECK(changed);
    CHECK(engine.audit_violations().empty());
}

TEST_CASE("clustering query on the two-community fixture") {
    auto algorithms = {Algorithm::GsIndex, Algorithm::VdStar, Algorithm::VdStarNoT,
                       Algorithm::VdStarMuT};
    for (Algorithm a : algorithms) {
        Engine engine(config_for(a));
        engine.load(two_community_fixture());
        ClusteringResult r = engine.query(0.5, 4);
        INFO(algorithm_name(a));
        CHECK(r.cores == std::vector<VertexId>{0, 7});
        REQUIRE(r.clusters.size() == 2);
        CHECK(r.clusters[0] == std::vector<VertexId>{0, 1, 2, 3, 4});
        CHECK(r.clusters[1] == std::vector<VertexId>{7, 8, 9, 10, 11});
        CHECK(r.hubs == std::vector<VertexId>{6});
        CHECK(r.outliers == std::vector<VertexId>{5});
    }
}

TEST_CASE("oracle agrees with the engine on the fixture") {
    DynamicGraph g;
    for (auto [u, v] : two_community_fixture()) g.insert_edge(u, v);
    ClusteringResult r = oracle_cluster(g, Measure::Jaccard, 0.5, 4);
    CHECK(r.cores == std::vector<VertexId>{0, 7});
    CHECK(r.hubs == std::vector<VertexId>{6});
    CHECK(r.outliers == std::vector<VertexId>{5});
}

TEST_CASE("tiny eps and mu one merge a connected graph into one cluster") {
    Engine engine(config_for(Algorithm::GsIndex));
    engine.load({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    ClusteringResult r = engine.query(0.05, 1);
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.clusters[0] == std::vector<VertexId>{0, 1, 2, 3});
    CHECK(r.hubs.empty());
    CHECK(r.outliers.empty());
}

TEST_CASE("no cores means no clusters and only outliers") {
    Engine engine(config_for(Algorithm::GsIndex));
    engine.load({{0, 1}, {2, 3}});
    ClusteringResult r = engine.query(0.99, 5);
    CHECK(r.clusters.empty());
    CHECK(r.hubs.empty());
    CHECK(r.outliers == std::vector<VertexId>{0, 1, 2, 3});
}

TEST_CASE("extract_clusters unit semantics") {
    DynamicGraph g;
    SECTION("single core with similar non-core neighbors") {
        g.insert_edge(0, 1);
        g.insert_edge(0, 2);
        g.insert_edge(0, 3);
        auto r = extract_clusters({{0, 1}, {0, 2}, {0, 3}}, {0}, g);
        REQUIRE(r.clusters.size() == 1);
        CHECK(r.clusters[0] == std::vector<VertexId>{0, 1, 2, 3});
    }
    SECTION("two cores joined by a core sim-edge form one primitive cluster") {
        g.insert_edge(0, 1);
        auto r = extract_clusters({{0, 1}}, {0, 1}, g);
        REQUIRE(r.clusters.size() == 1);
        CHECK(r.clusters[0] == std::vector<VertexId>{0, 1});
    }
    SECTION("a non-core similar to cores of two clusters joins both") {
        g.insert_edge(0, 2);
        g.insert_edge(1, 2);
        auto r = extract_clusters({{0, 2}, {1, 2}}, {0, 1}, g);
        REQUIRE(r.clusters.size() == 2);
        CHECK(r.clusters[0] == std::vector<VertexId>{0, 2});
        CHECK(r.clusters[1] == std::vector<VertexId>{1, 2});
        CHECK(r.hubs.empty());
    }
}

TEST_CASE("queries are read-only and repeatable") {
    Engine engine(config_for(Algorithm::VdStar));
    engine.load(two_community_fixture());
    ClusteringResult a = engine.query(0.4, 3);
    ClusteringResult b = engine.query(0.4, 3);
    CHECK(a == b);
}

TEST_CASE("identical config and seed replay to identical state") {
    Rng stream_rng(123);
    auto edges = random_edges(25, 60, stream_rng);
    for (Algorithm a : {Algorithm::VdStar, Algorithm::Botbin}) {
        Engine e1(config_for(a, 0.1, 77));
        Engine e2(config_for(a, 0.1, 77));
        e1.load(edges);
        e2.load(edges);
        Rng ops(5);
        for (int i = 0; i < 200; ++i) {
            VertexId u = static_cast<VertexId>(ops.below(25));
            VertexId v = static_cast<VertexId>(ops.below(25));
            if (u == v) continue;
            UpdateKind kind = e1.graph().has_edge(u, v) ? UpdateKind::Delete : UpdateKind::Insert;
            e1.apply_update(kind, u, v);
            e2.apply_update(kind, u, v);
        }
        ClusteringResult r1 = e1.query(0.3, 2);
        ClusteringResult r2 = e2.query(0.3, 2);
        INFO(algorithm_name(a));
        CHECK(r1 == r2);
        for (auto [u, v] : e1.graph().edges()) {
            REQUIRE(e1.stored_sim(u, v) == e2.stored_sim(u, v));
        }
    }
}

TEST_CASE("sandwich and label soundness hold through a random stream") {
    Rng rng(901);
    for (Algorithm a : {Algorithm::VdStar, Algorithm::VdStarNoT, Algorithm::GsIndex}) {
        EngineConfig cfg = config_for(a, 0.1, 31);
        cfg.affordability_audit = true;
        Engine engine(cfg);
        engine.load(random_edges(30, 80, rng));

        std::vector<std::string> issues;
        Rng ops(17);
        for (int i = 0; i < 300; ++i) {
            VertexId u = static_cast<VertexId>(ops.below(30));
            VertexId v = static_cast<VertexId>(ops.below(30));
            if (u == v) continue;
            UpdateKind kind = engine.graph().has_edge(u, v) ? UpdateKind::Delete : UpdateKind::Insert;
            engine.apply_update(kind, u, v);
            if (i % 25 == 0) {
                double eps = ops.uniform(0.15, 0.5);
                std::size_t mu = 1 + ops.below(4);
                ClusteringResult approx = engine.query(eps, mu);
                audits::check_label_soundness(engine, eps, issues);
                audits::check_sandwich(engine, approx, eps, mu, issues);
            }
        }
        INFO(algorithm_name(a));
        CHECK(issues.empty());
        CHECK(engine.audit_violations().empty());
    }
}

TEST_CASE("small rank table falls back to the scan beyond its cap") {
    EngineConfig small = config_for(Algorithm::VdStarMuT, 0.1, 9);
    EngineConfig scan = config_for(Algorithm::VdStarNoT, 0.1, 9);
    Engine e_small(small);
    Engine e_scan(scan);
    Rng rng(55);
    auto edges = random_edges(40, 200, rng);
    e_small.load(edges);
    e_scan.load(edges);
    for (std::size_t mu : {2u, 15u, 16u, 20u}) {
        ClusteringResult a = e_small.query(0.2, mu);
        ClusteringResult b = e_scan.query(0.2, mu);
        CHECK(a == b);
    }
}

TEST_CASE("epoch rebuild preserves behavior") {
    EngineConfig cfg = config_for(Algorithm::VdStar, 0.1, 3);
    Engine engine(cfg);
    engine.load({{0, 1}, {1, 2}});  // n0 = 3, epoch budget = 9
    Rng ops(77);
    std::uint64_t rebuilds_before = engine.perf().rebuilds;
    for (int i = 0; i < 40; ++i) {
        VertexId u = static_cast<VertexId>(ops.below(3));
        VertexId v = static_cast<VertexId>(ops.below(3));
        if (u == v) continue;
        UpdateKind kind = engine.graph().has_edge(u, v) ? UpdateKind::Delete : UpdateKind::Insert;
        engine.apply_update(kind, u, v);
        REQUIRE(audits::check_structures(engine).empty());
    }
    CHECK(engine.perf().rebuilds > rebuilds_before);
}
