#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "jigsaw/grid.hpp"
#include "jigsaw/union_find.hpp"

namespace jigsaw {

namespace detail {

inline void validate_piece_set(std::span<const PieceId> pieces, const GridSpec& grid,
                               std::vector<std::uint32_t>& slot) {
    slot.assign(grid.piece_count() + 1, std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t i = 0; i < pieces.size(); ++i) {
        const PieceId p = pieces[i];
        if (!is_valid(p, grid)) {
            throw DomainError("piece " + std::to_string(p.value) + " outside [1, " +
                              std::to_string(grid.piece_count()) + "]");
        }
        if (slot[p.value] != std::numeric_limits<std::uint32_t>::max()) {
            throw DomainError("duplicate piece " + std::to_string(p.value));
        }
        slot[p.value] = i;
    }
}

inline void sort_by_min_member(std::vector<Cluster>& clusters) {
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.min_piece() < b.min_piece(); });
}

}  // namespace detail

// Maximal 4-connected subsets of `pieces`, ordered by minimum member. Union-find
// over the input, probing each piece's <= 4 grid neighbours for membership.
inline std::vector<Cluster> connected_components(std::span<const PieceId> pieces,
                                                 const GridSpec& grid) {
    std::vector<std::uint32_t> slot;
    detail::validate_piece_set(pieces, grid, slot);

    DisjointSets sets(pieces.size());
    for (std::uint32_t i = 0; i < pieces.size(); ++i) {
        for_each_neighbor(pieces[i], grid, [&](PieceId q) {
            const auto j = slot[q.value];
            if (j != std::numeric_limits<std::uint32_t>::max()) sets.unite(i, j);
        });
    }

    std::vector<std::uint32_t> root_to_out(pieces.size(), std::numeric_limits<std::uint32_t>::max());
    std::vector<std::vector<PieceId>> groups;
    for (std::uint32_t i = 0; i < pieces.size(); ++i) {
        const auto r = sets.find(i);
        if (root_to_out[r] == std::numeric_limits<std::uint32_t>::max()) {
            root_to_out[r] = static_cast<std::uint32_t>(groups.size());
            groups.emplace_back();
            groups.back().reserve(sets.set_size(r));
        }
        groups[root_to_out[r]].push_back(pieces[i]);
    }

    std::vector<Cluster> out;
    out.reserve(groups.size());
    for (auto& g : groups) out.emplace_back(std::move(g));
    detail::sort_by_min_member(out);
    return out;
}

// Independent oracle: breadth-first search over the induced subgraph with an
// all-pairs adjacency test on coordinates. Quadratic; for tests and the exact solver.
inline std::vector<Cluster> connected_components_reference(std::span<const PieceId> pieces,
                                                           const GridSpec& grid) {
    std::vector<GridCoord> coords;
    coords.reserve(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        coords.push_back(coord_of(pieces[i], grid));
        for (std::size_t j = 0; j < i; ++j) {
            if (pieces[j] == pieces[i]) throw DomainError("duplicate piece " + std::to_string(pieces[i].value));
        }
    }

    std::vector<bool> visited(pieces.size(), false);
    std::vector<Cluster> out;
    for (std::size_t start = 0; start < pieces.size(); ++start) {
        if (visited[start]) continue;
        std::vector<PieceId> members;
        std::deque<std::size_t> queue{start};
        visited[start] = true;
        while (!queue.empty()) {
            const auto cur = queue.front();
            queue.pop_front();
            members.push_back(pieces[cur]);
            for (std::size_t other = 0; other < pieces.size(); ++other) {
                if (!visited[other] && are_adjacent(coords[cur], coords[other])) {
                    visited[other] = true;
                    queue.push_back(other);
                }
            }
        }
        out.emplace_back(std::move(members));
    }
    detail::sort_by_min_member(out);
    return out;
}

}  // namespace jigsaw
