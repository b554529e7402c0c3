#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "jigsaw/connectivity.hpp"
#include "jigsaw/engine.hpp"

namespace jigsaw {

// Canonical partition: clusters sorted by minimum member, members sorted.
struct PartitionState {
    std::vector<Cluster> clusters;

    std::size_t cluster_count() const noexcept { return clusters.size(); }

    friend bool operator==(const PartitionState&, const PartitionState&) = default;
    friend auto operator<=>(const PartitionState&, const PartitionState&) = default;
};

inline PartitionState canonical_partition(std::vector<Cluster> clusters) {
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.min_piece() < b.min_piece(); });
    return PartitionState{std::move(clusters)};
}

inline constexpr std::uint32_t kDefaultOracleMaxPieces = 9;

namespace detail {

// Replaces the chosen clusters (bitmask over state indices) by the components
// of their union. Uses the reference component finder, not the engine path.
inline PartitionState merge_subset(const PartitionState& state, std::uint32_t mask, const GridSpec& grid) {
    std::vector<Cluster> next;
    std::vector<PieceId> pooled;
    for (std::uint32_t i = 0; i < state.clusters.size(); ++i) {
        if (mask & (1u << i)) {
            const auto& p = state.clusters[i].pieces();
            pooled.insert(pooled.end(), p.begin(), p.end());
        } else {
            next.push_back(state.clusters[i]);
        }
    }
    auto comps = connected_components_reference(pooled, grid);
    std::move(comps.begin(), comps.end(), std::back_inserter(next));
    return canonical_partition(std::move(next));
}

inline void check_oracle_grid(const GridSpec& grid, std::uint32_t max_pieces) {
    if (grid.piece_count() > max_pieces || grid.piece_count() > 31) {
        throw CapacityError("exact enumeration limited to " + std::to_string(max_pieces) + " pieces, grid has " +
                            std::to_string(grid.piece_count()));
    }
}

}  // namespace detail

// Every partition of the grid into 4-connected clusters, exactly once. Built as
// the closure of the all-singletons partition under merging two adjacent
// clusters. Ordered by descending cluster count, then lexicographically.
inline std::vector<PartitionState> enumerate_partitions(const GridSpec& grid,
                                                        std::uint32_t max_pieces = kDefaultOracleMaxPieces) {
    detail::check_oracle_grid(grid, max_pieces);
    std::vector<Cluster> singles;
    for (std::uint32_t p = 1; p <= grid.piece_count(); ++p) singles.push_back(Cluster::singleton({p}));

    std::set<PartitionState> seen{canonical_partition(singles)};
    std::vector<PartitionState> frontier{*seen.begin()};
    while (!frontier.empty()) {
        std::vector<PartitionState> next_frontier;
        for (const auto& s : frontier) {
            for (std::uint32_t i = 0; i < s.clusters.size(); ++i) {
                for (std::uint32_t j = i + 1; j < s.clusters.size(); ++j) {
                    auto merged = detail::merge_subset(s, (1u << i) | (1u << j), grid);
                    if (merged.cluster_count() == s.cluster_count()) continue;  // not adjacent
                    if (seen.insert(merged).second) next_frontier.push_back(std::move(merged));
                }
            }
        }
        frontier = std::move(next_frontier);
    }

    std::vector<PartitionState> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(), [](const PartitionState& a, const PartitionState& b) {
        return a.cluster_count() > b.cluster_count();
    });
    return out;
}

// Sparse transition kernel of the with-replacement chain: row s lists
// (target index, probability) pairs, aggregated per target.
struct TransitionKernel {
    std::vector<PartitionState> states;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    std::size_t initial = 0;   // all singletons
    std::size_t absorbing = 0;  // single cluster
};

inline TransitionKernel build_kernel(const GridSpec& grid, std::uint32_t k,
                                     std::uint32_t max_pieces = kDefaultOracleMaxPieces) {
    if (k < 2) throw DomainError("sample size k must be >= 2");
    TransitionKernel kernel;
    kernel.states = enumerate_partitions(grid, max_pieces);
    std::map<PartitionState, std::size_t> index;
    for (std::size_t i = 0; i < kernel.states.size(); ++i) index.emplace(kernel.states[i], i);
    kernel.initial = 0;
    kernel.absorbing = kernel.states.size() - 1;

    kernel.rows.resize(kernel.states.size());
    for (std::size_t s = 0; s < kernel.states.size(); ++s) {
        const auto& state = kernel.states[s];
        const auto c = static_cast<std::uint32_t>(state.cluster_count());
        if (c == 1) {
            kernel.rows[s] = {{s, 1.0}};
            continue;
        }
        const auto m = std::min(k, c);
        std::map<std::size_t, std::uint64_t> hits;
        std::uint64_t subsets = 0;
        for (std::uint32_t mask = 0; mask < (1u << c); ++mask) {
            if (static_cast<std::uint32_t>(std::popcount(mask)) != m) continue;
            ++subsets;
            ++hits[index.at(detail::merge_subset(state, mask, grid))];
        }
        for (const auto& [target, count] : hits) {
            kernel.rows[s].emplace_back(target, static_cast<double>(count) / static_cast<double>(subsets));
        }
    }
    return kernel;
}

// Expected steps from all singletons to one cluster. Transitions never raise
// the cluster count and any move away from a state lowers it, so solving states
// in ascending cluster count is an exact back substitution:
//   t(s) = (1 + sum_{s' != s} P(s, s') t(s')) / (1 - P(s, s)).
inline double exact_expected_completion(const GridSpec& grid, std::uint32_t k, Mode mode,
                                        std::uint32_t max_pieces = kDefaultOracleMaxPieces) {
    if (mode != Mode::WithReplacement) {
        throw UnsupportedModeError("exact expected completion is only available with replacement");
    }
    const auto kernel = build_kernel(grid, k, max_pieces);
    std::vector<double> t(kernel.states.size(), 0.0);
    for (std::size_t i = kernel.states.size(); i-- > 0;) {
        if (i == kernel.absorbing) continue;
        double stay = 0, acc = 1.0;
        for (const auto& [target, p] : kernel.rows[i]) {
            if (target == i) {
                stay = p;
            } else {
                acc += p * t[target];
            }
        }
        if (stay >= 1.0) throw ContractError("partition state cannot reach completion");
        t[i] = acc / (1.0 - stay);
    }
    return t[kernel.initial];
}

// Simulation-free cross-check: E[T] = sum_{t>=0} P(T > t), propagating the
// state distribution through the kernel until the unabsorbed mass drops below
// tolerance or max_steps is reached.
inline double expected_completion_by_propagation(const GridSpec& grid, std::uint32_t k,
                                                 double tolerance = 1e-13,
                                                 std::uint64_t max_steps = 10'000'000) {
    const auto kernel = build_kernel(grid, k);
    std::vector<double> dist(kernel.states.size(), 0.0), next(kernel.states.size());
    dist[kernel.initial] = 1.0;
    double expected = 0;
    for (std::uint64_t step = 0; step < max_steps; ++step) {
        double alive = 0;
        for (std::size_t s = 0; s < dist.size(); ++s) {
            if (s != kernel.absorbing) alive += dist[s];
        }
        if (alive < tolerance) break;
        expected += alive;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < dist.size(); ++s) {
            if (dist[s] == 0.0) continue;
            for (const auto& [target, p] : kernel.rows[s]) next[target] += dist[s] * p;
        }
        dist.swap(next);
    }
    return expected;
}

}  // namespace jigsaw
