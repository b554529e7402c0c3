#pragma once

// Independent oracles and invariant checkers shared by the test binaries.
// Nothing here calls connected_components() or the engine internals.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "jigsaw/jigsaw.hpp"

namespace jigsaw::testing {

using PieceSet = std::set<std::uint32_t>;
using SetOfSets = std::set<PieceSet>;

inline SetOfSets as_set_of_sets(const std::vector<Cluster>& clusters) {
    SetOfSets out;
    for (const auto& c : clusters) {
        PieceSet s;
        for (auto p : c.pieces()) s.insert(p.value);
        out.insert(s);
    }
    return out;
}

inline std::vector<PieceId> random_subset(const GridSpec& grid, std::size_t size, std::mt19937_64& rng) {
    std::vector<PieceId> all;
    for (std::uint32_t p = 1; p <= grid.piece_count(); ++p) all.push_back({p});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(size, all.size()));
    return all;
}

// Flood fill on the explicit (row, col) matrix: is `members` 4-connected?
inline bool connected_by_flood(const PieceSet& members, std::uint32_t n) {
    if (members.empty()) return false;
    std::vector<std::vector<int>> cell(n + 2, std::vector<int>(n + 2, 0));
    for (auto v : members) cell[(v - 1) % n + 1][(v - 1) / n + 1] = 1;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
    const auto first = *members.begin();
    stack.emplace_back((first - 1) % n + 1, (first - 1) / n + 1);
    cell[stack.back().first][stack.back().second] = 2;
    std::size_t reached = 0;
    while (!stack.empty()) {
        auto [r, c] = stack.back();
        stack.pop_back();
        ++reached;
        const int dr[] = {1, -1, 0, 0}, dc[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            auto rr = r + dr[d], cc = c + dc[d];
            if (cell[rr][cc] == 1) {
                cell[rr][cc] = 2;
                stack.emplace_back(rr, cc);
            }
        }
    }
    return reached == members.size();
}

// Counts set partitions of {1..N} (restricted growth strings) whose blocks are
// all 4-connected on the n x n grid.
inline std::size_t count_connected_set_partitions(std::uint32_t n) {
    const std::uint32_t total = n * n;
    std::vector<std::uint32_t> label(total, 0);
    std::size_t count = 0;
    // Recursive generation of restricted growth strings.
    auto rec = [&](auto&& self, std::uint32_t pos, std::uint32_t max_label) -> void {
        if (pos == total) {
            std::vector<PieceSet> blocks(max_label + 1);
            for (std::uint32_t i = 0; i < total; ++i) blocks[label[i]].insert(i + 1);
            for (const auto& b : blocks) {
                if (!connected_by_flood(b, n)) return;
            }
            ++count;
            return;
        }
        for (std::uint32_t l = 0; l <= max_label + 1; ++l) {
            label[pos] = l;
            self(self, pos + 1, std::max(max_label, l));
        }
    };
    label[0] = 0;
    if (total == 1) return 1;
    rec(rec, 1, 0);
    return count;
}

// Reference transition: drop the clusters at `chosen`, add the BFS components
// of their union (to active for with-replacement, to reserve otherwise).
inline PuzzleState reference_step(PuzzleState s, const std::vector<std::uint32_t>& chosen) {
    std::vector<PieceId> pooled;
    std::vector<Cluster> kept;
    for (std::uint32_t i = 0; i < s.active.size(); ++i) {
        if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) {
            const auto& p = s.active[i].pieces();
            pooled.insert(pooled.end(), p.begin(), p.end());
        } else {
            kept.push_back(s.active[i]);
        }
    }
    auto comps = connected_components_reference(pooled, s.grid);
    s.active = kept;
    auto& dest = s.mode == Mode::WithReplacement ? s.active : s.reserve;
    dest.insert(dest.end(), comps.begin(), comps.end());
    return s;
}

inline SetOfSets partition_of(const PuzzleState& s) {
    auto all = s.active;
    all.insert(all.end(), s.reserve.begin(), s.reserve.end());
    return as_set_of_sets(all);
}

// Conservation, disjointness, connectivity and mode purity. Returns an empty
// string when all hold, otherwise a description of the first violation.
inline std::string check_state(const PuzzleState& s) {
    if (s.mode == Mode::WithReplacement && !s.reserve.empty()) return "reserve nonempty in with-replacement mode";
    std::vector<int> owner(s.grid.piece_count() + 1, 0);
    std::size_t mass = 0;
    auto scan = [&](const std::vector<Cluster>& pool) -> std::string {
        for (const auto& c : pool) {
            PieceSet members;
            for (auto p : c.pieces()) {
                if (p.value < 1 || p.value > s.grid.piece_count()) return "piece out of range";
                if (owner[p.value]++) return "piece in two clusters";
                members.insert(p.value);
            }
            mass += c.size();
            if (!connected_by_flood(members, s.grid.n())) return "disconnected cluster";
        }
        return {};
    };
    if (auto e = scan(s.active); !e.empty()) return e;
    if (auto e = scan(s.reserve); !e.empty()) return e;
    if (mass != s.grid.piece_count()) return "piece mass not conserved";
    return {};
}

}  // namespace jigsaw::testing
