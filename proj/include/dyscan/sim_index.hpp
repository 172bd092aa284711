#ifndef DYSCAN_SIM_INDEX_HPP
#define DYSCAN_SIM_INDEX_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "dyscan/affordability.hpp"
#include "dyscan/graph.hpp"
#include "dyscan/rng.hpp"
#include "dyscan/similarity.hpp"

namespace dyscan {

enum class UpdateKind { Insert, Delete };

/// Maintains (approximate) similarities for all edges. The engine drives the
/// five calls in a fixed order per update: on_update (before the graph
/// mutates), insert_edge/erase_edge around each similarity computation,
/// find_invalid once the mutation is applied, and compute for every edge
/// whose estimate must be refreshed.
class EdgeSimIndex {
public:
    virtual ~EdgeSimIndex() = default;
    virtual void on_update(VertexId u, VertexId v, UpdateKind op) = 0;
    virtual void insert_edge(VertexId u, VertexId v) = 0;
    virtual void erase_edge(VertexId u, VertexId v) = 0;
    virtual std::vector<std::pair<VertexId, VertexId>> find_invalid(VertexId u, VertexId v,
                                                                    UpdateKind op) = 0;
    virtual CalSimResult compute(VertexId x, VertexId y, Rng& rng) = 0;
    /// Rebuilds internal state from the graph at an epoch boundary. Edge
    /// entries that the engine re-adds via insert_edge must start empty.
    virtual void rebuild(const DynamicGraph& graph, std::uint64_t epoch_salt) = 0;
    virtual const char* name() const = 0;
    virtual std::size_t memory_bytes() const = 0;
};

/// Lazy similarity maintenance from affecting-update counters and
/// power-of-two affordability buckets: an update only bumps two counters,
/// and an edge is recomputed when its bucket entry is visited twice.
class AffordabilitySimIndex final : public EdgeSimIndex {
public:
    AffordabilitySimIndex(const DynamicGraph& graph, Measure measure, double rho,
                          CalSimOptions opts = {})
        : graph_(&graph), measure_(measure), rho_(rho), opts_(opts) {}

    void on_update(VertexId u, VertexId v, UpdateKind) override { afford_.on_update(u, v); }

    void insert_edge(VertexId u, VertexId v) override {
        Quota quota = compute_quota(graph_->inclusive_size(u), graph_->inclusive_size(v), rho_);
        afford_.insert_entry(u, v, quota);
    }

    void erase_edge(VertexId u, VertexId v) override { afford_.delete_entry(u, v); }

    std::vector<std::pair<VertexId, VertexId>> find_invalid(VertexId u, VertexId v,
                                                            UpdateKind) override {
        return afford_.find_invalid(u, v);
    }

    CalSimResult compute(VertexId x, VertexId y, Rng& rng) override {
        return cal_sim(*graph_, x, y, measure_, rho_, rng, opts_);
    }

    void rebuild(const DynamicGraph&, std::uint64_t) override { afford_.clear(); }

    const char* name() const override { return "affordability"; }
    std::size_t memory_bytes() const override { return afford_.memory_bytes(); }

    double rho() const { return rho_; }
    AffordabilityIndex& affordability() { return afford_; }
    const AffordabilityIndex& affordability() const { return afford_; }

private:
    const DynamicGraph* graph_;
    Measure measure_;
    double rho_;
    CalSimOptions opts_;
    AffordabilityIndex afford_;
};

} // namespace dyscan

#endif
