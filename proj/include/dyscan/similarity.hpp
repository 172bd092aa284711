#ifndef DYSCAN_SIMILARITY_HPP
#define DYSCAN_SIMILARITY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "dyscan/graph.hpp"
#include "dyscan/rng.hpp"

namespace dyscan {

enum class Measure { Jaccard, Cosine, Dice };

inline const char* measure_name(Measure m) {
    switch (m) {
        case Measure::Jaccard: return "jaccard";
        case Measure::Cosine: return "cosine";
        case Measure::Dice: return "dice";
    }
    return "?";
}

struct SampleBudget {
    std::uint64_t count; // L
    double half_error;   // r
};

/// Measure-specific half-error for the Hoeffding budget: rho/4 for Jaccard,
/// rho^2/4 for Cosine, rho/2 for Dice.
inline double half_error(double rho, Measure m) {
    switch (m) {
        case Measure::Jaccard: return rho / 4.0;
        case Measure::Cosine: return rho * rho / 4.0;
        case Measure::Dice: return rho / 2.0;
    }
    return rho / 4.0;
}

/// L = ceil(ln(4 n^4) / (2 r^2)), evaluated at the live vertex count
/// (floored at 2).
inline SampleBudget sample_count(std::size_t n, double rho, Measure m) {
    double nn = static_cast<double>(std::max<std::size_t>(n, 2));
    double r = half_error(rho, m);
    double l = std::ceil(std::log(4.0 * nn * nn * nn * nn) / (2.0 * r * r));
    return SampleBudget{static_cast<std::uint64_t>(l), r};
}

/// |N[u] ∩ N[v]|, probing the larger inclusive neighborhood with members of
/// the smaller one.
inline std::size_t intersection_size(const DynamicGraph& g, VertexId u, VertexId v) {
    if (g.inclusive_size(u) > g.inclusive_size(v)) std::swap(u, v);
    std::size_t count = g.in_inclusive(v, u) ? 1 : 0; // u itself
    for (VertexId w : g.neighbors(u).items()) {
        if (g.in_inclusive(v, w)) ++count;
    }
    return count;
}

inline double similarity_from_counts(std::size_t i, std::size_t nu, std::size_t nv, Measure m) {
    double di = static_cast<double>(i);
    double du = static_cast<double>(nu);
    double dv = static_cast<double>(nv);
    switch (m) {
        case Measure::Jaccard: return di / (du + dv - di);
        case Measure::Cosine: return di / std::sqrt(du * dv);
        case Measure::Dice: return di / ((du + dv) / 2.0);
    }
    return 0.0;
}

/// Exact similarity; 0 when (u, v) is not an edge.
inline double exact_sim(const DynamicGraph& g, VertexId u, VertexId v, Measure m) {
    if (!g.has_edge(u, v)) return 0.0;
    std::size_t i = intersection_size(g, u, v);
    return similarity_from_counts(i, g.inclusive_size(u), g.inclusive_size(v), m);
}

inline bool is_valid_approx(double sigma_tilde, double sigma_exact, double rho) {
    return std::abs(sigma_tilde - sigma_exact) <= rho;
}

struct CalSimOptions {
    std::uint64_t max_samples = 0; // 0 = uncapped
    bool force_sampling = false;   // disable the exact shortcut (tests)
};

struct CalSimResult {
    double value = 0.0;
    std::uint64_t samples = 0;
    bool exact = false;  // computed by exact intersection
    bool capped = false; // max_samples truncated the Hoeffding budget
};

/// Sampled similarity estimate for an existing edge (x, y).
///
/// Degenerate degree ratios (n_x <= rho^2/4 * n_y or vice versa) return 0.
/// Otherwise draws L samples: a coin z with Pr[z=1] = n_x/(n_x+n_y) picks the
/// side, a uniform member of that side's inclusive neighborhood is tested for
/// membership in the intersection, and the hit rate is transformed per
/// measure. When the sample budget exceeds the cost of an exact intersection
/// the exact value is returned instead (a strictly better estimate).
inline CalSimResult cal_sim(const DynamicGraph& g, VertexId x, VertexId y, Measure m,
                            double rho, Rng& rng, const CalSimOptions& opts = {}) {
    double nx = static_cast<double>(g.inclusive_size(x));
    double ny = static_cast<double>(g.inclusive_size(y));
    double gate = rho * rho / 4.0;
    if (nx <= gate * ny || ny <= gate * nx) {
        return CalSimResult{0.0, 0, false, false};
    }

    SampleBudget budget = sample_count(g.vertex_count(), rho, m);
    std::uint64_t min_side = static_cast<std::uint64_t>(std::min(nx, ny));
    if (!opts.force_sampling && budget.count >= min_side) {
        std::size_t i = intersection_size(g, x, y);
        double v = similarity_from_counts(i, g.inclusive_size(x), g.inclusive_size(y), m);
        return CalSimResult{v, 0, true, false};
    }

    std::uint64_t draws = budget.count;
    bool capped = false;
    if (opts.max_samples > 0 && opts.max_samples < draws) {
        draws = opts.max_samples;
        capped = true;
    }

    std::uint64_t hits = 0;
    const IndexedSet& adj_x = g.neighbors(x);
    const IndexedSet& adj_y = g.neighbors(y);
    std::uint64_t size_x = adj_x.size() + 1;
    std::uint64_t size_y = adj_y.size() + 1;
    // Drawing the coin z and then a uniform member of the chosen side is the
    // same distribution as one uniform draw over the disjoint union of the
    // two inclusive neighborhoods (coin weight n_x/(n_x+n_y) = side share).
    // Each slot's intersection membership is fixed while the graph is
    // frozen, so the sample loop reduces to one draw and one table load.
    std::vector<std::uint8_t> table(size_x + size_y);
    for (std::uint64_t i = 0; i + 1 < size_x; ++i) {
        table[i] = static_cast<std::uint8_t>(g.in_inclusive(y, adj_x.at(i)));
    }
    table[size_x - 1] = 1; // x itself: the edge (x, y) exists, so x ∈ N[y]
    for (std::uint64_t i = 0; i + 1 < size_y; ++i) {
        table[size_x + i] = static_cast<std::uint8_t>(g.in_inclusive(x, adj_y.at(i)));
    }
    table[size_x + size_y - 1] = 1;
    const std::uint8_t* slots = table.data();
    std::uint64_t span = size_x + size_y;
    Rng local = rng; // keep generator state in registers through the loop
    for (std::uint64_t i = 0; i < draws; ++i) {
        hits += slots[local.below(span)];
    }
    rng = local;
    double mean = static_cast<double>(hits) / static_cast<double>(draws);
    double value = 0.0;
    switch (m) {
        case Measure::Jaccard: value = mean / (2.0 - mean); break;
        case Measure::Cosine: value = (nx + ny) / (2.0 * std::sqrt(nx * ny)) * mean; break;
        case Measure::Dice: value = mean; break;
    }
    value = std::clamp(value, 0.0, 1.0);
    return CalSimResult{value, draws, false, capped};
}

} // namespace dyscan

#endif
