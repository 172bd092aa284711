#ifndef DYSCAN_ENGINE_HPP
#define DYSCAN_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dyscan/baselines.hpp"
#include "dyscan/clustering.hpp"
#include "dyscan/corefind.hpp"
#include "dyscan/graph.hpp"
#include "dyscan/neighbor_lists.hpp"
#include "dyscan/rng.hpp"
#include "dyscan/sim_index.hpp"
#include "dyscan/similarity.hpp"

namespace dyscan {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Algorithm { VdStar, VdStarNoT, VdStarMuT, GsIndex, Botbin };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::VdStar: return "vdstar";
        case Algorithm::VdStarNoT: return "vdstar_not";
        case Algorithm::VdStarMuT: return "vdstar_mut";
        case Algorithm::GsIndex: return "gsindex";
        case Algorithm::Botbin: return "botbin";
    }
    return "?";
}

struct EngineConfig {
    Algorithm algorithm = Algorithm::VdStar;
    Measure measure = Measure::Jaccard;
    double rho_star = 0.02;
    double delta = 0.01;
    std::size_t mu_cap = 15;
    std::uint64_t seed = 1;
    CalSimOptions calc;
    std::uint64_t botbin_k = 0; // 0 = derive from rho and the epoch budget
    bool affordability_audit = false;

    bool uses_delta_table() const {
        return algorithm == Algorithm::VdStar || algorithm == Algorithm::Botbin;
    }

    /// Per-edge budget: the level table consumes delta of the overall budget.
    double rho() const { return uses_delta_table() ? rho_star - delta : rho_star; }

    void validate() const {
        if (rho_star <= 0.0 || rho_star >= 1.0) throw ConfigError("rho_star must be in (0,1)");
        if (algorithm == Algorithm::Botbin && measure != Measure::Jaccard) {
            throw ConfigError("botbin supports the jaccard measure only");
        }
        if (uses_delta_table()) {
            if (delta <= 0.0 || delta >= 1.0) throw ConfigError("delta must be in (0,1)");
            if (rho_star - delta <= 0.0) throw ConfigError("rho_star must exceed delta");
        }
        if (algorithm == Algorithm::VdStarMuT && mu_cap == 0) {
            throw ConfigError("mu_cap must be positive");
        }
    }
};

struct QueryParams {
    double eps;
    std::size_t mu;
};

struct UpdateReport {
    std::size_t invalidated = 0;   // |F|
    std::size_t cal_sim_calls = 0;
    std::uint64_t samples = 0;
    std::uint64_t touched_entries = 0;
    bool rebuilt = false;
};

struct PerfCounters {
    std::uint64_t updates = 0;
    std::uint64_t cal_sim_calls = 0;
    std::uint64_t samples = 0;
    std::uint64_t invalidated = 0;
    std::uint64_t invalidated_max = 0;
    std::uint64_t touched_entries = 0;
    std::uint64_t rebuilds = 0;
    std::uint64_t capped_estimates = 0;
};

/// The unified update/query engine: a similarity index for lazily maintained
/// edge estimates plus a pluggable core finder over the sorted neighbor
/// lists.
class Engine {
public:
    explicit Engine(EngineConfig config) : config_(config), rng_(config.seed) {
        config_.validate();
        sim_index_ = make_sim_index();
        core_finder_ = make_core_finder();
        scan_finder_ = std::make_unique<NoTable>(graph_, lists_);
        epoch_budget_ = 1;
    }

    /// Bulk-loads an initial edge set and builds all structures from scratch.
    void load(const std::vector<std::pair<VertexId, VertexId>>& edges) {
        for (auto [u, v] : edges) graph_.insert_edge(u, v);
        rebuild();
    }

    UpdateReport apply_update(UpdateKind op, VertexId u, VertexId v) {
        UpdateReport report;
        if (op == UpdateKind::Insert) {
            if (u == v) throw SelfLoopError{};
            if (graph_.has_edge(u, v)) throw DuplicateEdgeError{};
        } else {
            if (!graph_.has_edge(u, v)) throw MissingEdgeError{};
        }
        graph_.ensure_vertex(u);
        graph_.ensure_vertex(v);
        bool audit = config_.affordability_audit && affordability_index() != nullptr;
        if (audit) note_affecting_update(u, v);

        std::uint64_t visited_before = afford_entries_visited();
        sim_index_->on_update(u, v, op);
        if (op == UpdateKind::Insert) {
            graph_.insert_edge(u, v);
            refresh_edge(u, v, report);
        } else {
            sim_index_->erase_edge(u, v);
            graph_.delete_edge(u, v);
            lists_.erase(u, v);
            sims_.erase(edge_key(u, v));
            audit_state_.erase(edge_key(u, v));
        }

        auto invalid = sim_index_->find_invalid(u, v, op);
        report.invalidated = invalid.size();
        for (auto [x, y] : invalid) {
            sim_index_->erase_edge(x, y);
            refresh_edge(x, y, report);
        }

        std::vector<VertexId> touched{u, v};
        for (auto [x, y] : invalid) {
            touched.push_back(x);
            touched.push_back(y);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (VertexId x : touched) core_finder_->update(x);

        report.touched_entries = (afford_entries_visited() - visited_before) +
                                 2 * static_cast<std::uint64_t>(report.invalidated) + 2;

        perf_.updates += 1;
        perf_.cal_sim_calls += report.cal_sim_calls;
        perf_.samples += report.samples;
        perf_.invalidated += report.invalidated;
        perf_.invalidated_max = std::max<std::uint64_t>(perf_.invalidated_max, report.invalidated);
        perf_.touched_entries += report.touched_entries;

        ++updates_in_epoch_;
        if (updates_in_epoch_ >= epoch_budget_) {
            rebuild();
            report.rebuilt = true;
        }
        return report;
    }

    /// Clustering query for parameters given on the fly; read-only.
    ClusteringResult query(double eps, std::size_t mu) const {
        if (mu == 0) mu = 1;
        std::vector<VertexId> cores;
        try {
            cores = core_finder_->find_core(eps, mu);
        } catch (const MuOutOfRangeError&) {
            cores = scan_finder_->find_core(eps, mu);
        }
        std::vector<std::pair<VertexId, VertexId>> ecr;
        for (VertexId u : cores) {
            lists_.walk_desc(u, [&](VertexId w, double sim) {
                if (sim < eps) return false;
                ecr.push_back(normalize_edge(u, w));
                return true;
            });
        }
        return extract_clusters(std::move(ecr), std::move(cores), graph_);
    }

    /// Rebuilds every structure from the current graph; counters reset and a
    /// new epoch begins with budget n0^2.
    void rebuild() {
        ++perf_.rebuilds;
        ++epoch_;
        updates_in_epoch_ = 0;
        std::uint64_t n0 = static_cast<std::uint64_t>(graph_.vertex_count());
        epoch_budget_ = std::max<std::uint64_t>(n0 * n0, 1);

        if (auto* botbin = dynamic_cast<BottomKSimIndex*>(sim_index_.get())) {
            botbin->set_k(botbin_k_for_epoch());
        }
        sim_index_->rebuild(graph_, epoch_);
        lists_.clear();
        sims_.clear();
        audit_state_.clear();

        auto edges = graph_.edges();
        std::sort(edges.begin(), edges.end());
        UpdateReport scratch;
        for (auto [u, v] : edges) refresh_edge(u, v, scratch);
        perf_.cal_sim_calls += scratch.cal_sim_calls;
        perf_.samples += scratch.samples;

        core_finder_->clear();
        for (VertexId u = 0; u < graph_.vertex_count(); ++u) core_finder_->update(u);
    }

    const DynamicGraph& graph() const { return graph_; }
    const SortedNeighborLists& lists() const { return lists_; }
    const EngineConfig& config() const { return config_; }
    const PerfCounters& perf() const { return perf_; }
    std::uint64_t epoch() const { return epoch_; }

    std::optional<double> stored_sim(VertexId u, VertexId v) const {
        auto it = sims_.find(edge_key(u, v));
        if (it == sims_.end()) return std::nullopt;
        return it->second;
    }

    /// k-th largest stored similarity around u (absent when d_u < k).
    std::optional<double> kth_largest_sim(VertexId u, std::size_t k) const {
        return lists_.kth_largest_sim(u, k);
    }

    const std::vector<std::string>& audit_violations() const { return audit_violations_; }

    AffordabilitySimIndex* affordability_index() {
        return dynamic_cast<AffordabilitySimIndex*>(sim_index_.get());
    }
    const AffordabilitySimIndex* affordability_index() const {
        return dynamic_cast<const AffordabilitySimIndex*>(sim_index_.get());
    }
    ExactCounterSimIndex* exact_index() {
        return dynamic_cast<ExactCounterSimIndex*>(sim_index_.get());
    }
    BottomKSimIndex* bottomk_index() {
        return dynamic_cast<BottomKSimIndex*>(sim_index_.get());
    }
    const CoreFinder& core_finder() const { return *core_finder_; }
    CoreFinder& core_finder() { return *core_finder_; }

    std::size_t memory_bytes() const {
        return graph_.memory_bytes() + lists_.memory_bytes() + sim_index_->memory_bytes() +
               core_finder_->memory_bytes() + sims_.size() * 24;
    }

private:
    std::unique_ptr<EdgeSimIndex> make_sim_index() {
        switch (config_.algorithm) {
            case Algorithm::VdStar:
            case Algorithm::VdStarNoT:
            case Algorithm::VdStarMuT:
                return std::make_unique<AffordabilitySimIndex>(graph_, config_.measure,
                                                               config_.rho(), config_.calc);
            case Algorithm::GsIndex: {
                auto index = std::make_unique<ExactCounterSimIndex>(graph_);
                index->set_measure(config_.measure);
                return index;
            }
            case Algorithm::Botbin:
                return std::make_unique<BottomKSimIndex>(graph_, 1, config_.seed);
        }
        throw ConfigError("unknown algorithm");
    }

    std::unique_ptr<CoreFinder> make_core_finder() {
        switch (config_.algorithm) {
            case Algorithm::VdStar:
            case Algorithm::Botbin:
                return std::make_unique<DeltaTable>(lists_, config_.delta);
            case Algorithm::VdStarNoT:
                return std::make_unique<NoTable>(graph_, lists_);
            case Algorithm::VdStarMuT:
                return std::make_unique<MuTable>(lists_, config_.mu_cap);
            case Algorithm::GsIndex:
                return std::make_unique<MuTable>(lists_, 0);
        }
        throw ConfigError("unknown algorithm");
    }

    std::uint64_t botbin_k_for_epoch() const {
        if (config_.botbin_k > 0) return config_.botbin_k;
        double rho = config_.rho();
        double n = static_cast<double>(std::max<std::size_t>(graph_.vertex_count(), 2));
        double m_budget = std::max(n * n, 1.0);
        double k = std::ceil(2.0 / (rho * rho) * std::log(2.0 * (n * m_budget) * (n * m_budget)));
        return static_cast<std::uint64_t>(k);
    }

    std::uint64_t afford_entries_visited() const {
        const auto* a = affordability_index();
        return a ? a->affordability().entries_visited_total : 0;
    }

    void refresh_edge(VertexId x, VertexId y, UpdateReport& report) {
        CalSimResult result = sim_index_->compute(x, y, rng_);
        ++report.cal_sim_calls;
        report.samples += result.samples;
        if (result.capped) ++perf_.capped_estimates;
        if (config_.affordability_audit) check_recompute_schedule(x, y);
        sim_index_->insert_edge(x, y);
        lists_.set(x, y, result.value);
        sims_[edge_key(x, y)] = result.value;
    }

    void note_affecting_update(VertexId u, VertexId v) {
        for (VertexId w : graph_.neighbors(u).items()) {
            if (w != v) ++audit_state_[edge_key(u, w)].affecting;
        }
        for (VertexId w : graph_.neighbors(v).items()) {
            if (w != u) ++audit_state_[edge_key(v, w)].affecting;
        }
    }

    /// Lazy-recompute schedule audit: the number of affecting updates that
    /// completed between two similarity computations of an edge must stay
    /// strictly below the power-of-two floor of its affordability.
    void check_recompute_schedule(VertexId x, VertexId y) {
        const auto* a = affordability_index();
        if (!a) return;
        std::uint64_t key = edge_key(x, y);
        auto it = audit_state_.find(key);
        if (it != audit_state_.end() && it->second.floor2_tau > 0.0) {
            double completed = static_cast<double>(it->second.affecting) - 1.0;
            if (completed >= it->second.floor2_tau) {
                audit_violations_.push_back(
                    "edge (" + std::to_string(x) + "," + std::to_string(y) + ") recomputed after " +
                    std::to_string(completed) + " affecting updates, floor2(tau)=" +
                    std::to_string(it->second.floor2_tau));
            }
        }
        Quota quota = compute_quota(graph_.inclusive_size(x), graph_.inclusive_size(y), a->rho());
        audit_state_[key] = AuditState{0, quota.floor2_tau};
    }

    struct AuditState {
        std::uint64_t affecting = 0;
        double floor2_tau = 0.0;
    };

    EngineConfig config_;
    DynamicGraph graph_;
    SortedNeighborLists lists_;
    std::unordered_map<std::uint64_t, double> sims_;
    std::unique_ptr<EdgeSimIndex> sim_index_;
    std::unique_ptr<CoreFinder> core_finder_;
    std::unique_ptr<NoTable> scan_finder_;
    Rng rng_;
    PerfCounters perf_;
    std::uint64_t epoch_ = 0;
    std::uint64_t updates_in_epoch_ = 0;
    std::uint64_t epoch_budget_ = 1;
    std::unordered_map<std::uint64_t, AuditState> audit_state_;
    std::vector<std::string> audit_violations_;
};

} // namespace dyscan

#endif
