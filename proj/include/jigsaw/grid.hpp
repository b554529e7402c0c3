#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "jigsaw/errors.hpp"

namespace jigsaw {

// Side length n of the square puzzle and the cached piece count n*n.
class GridSpec {
public:
    explicit GridSpec(std::uint32_t n) : n_(n), piece_count_(n * n) {
        if (n == 0) throw DomainError("grid side length must be >= 1");
        if (n > 65535) throw DomainError("grid side length too large: " + std::to_string(n));
    }

    std::uint32_t n() const noexcept { return n_; }
    std::uint32_t piece_count() const noexcept { return piece_count_; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    std::uint32_t n_;
    std::uint32_t piece_count_;
};

// 1-based piece index in [1, n*n].
struct PieceId {
    std::uint32_t value = 0;

    friend auto operator<=>(const PieceId&, const PieceId&) = default;
};

// 1-based (row, col), both in [1, n].
struct GridCoord {
    std::uint32_t row = 0;
    std::uint32_t col = 0;

    friend auto operator<=>(const GridCoord&, const GridCoord&) = default;
};

inline bool is_valid(PieceId piece, const GridSpec& grid) noexcept {
    return piece.value >= 1 && piece.value <= grid.piece_count();
}

inline bool is_valid(GridCoord c, const GridSpec& grid) noexcept {
    return c.row >= 1 && c.row <= grid.n() && c.col >= 1 && c.col <= grid.n();
}

// Column-major, as MATLAB's ind2sub([n n], idx).
inline GridCoord coord_of(PieceId piece, const GridSpec& grid) {
    if (!is_valid(piece, grid)) {
        throw DomainError("piece " + std::to_string(piece.value) + " outside [1, " +
                          std::to_string(grid.piece_count()) + "]");
    }
    const std::uint32_t z = piece.value - 1;
    return {z % grid.n() + 1, z / grid.n() + 1};
}

inline PieceId piece_of(GridCoord c, const GridSpec& grid) {
    if (!is_valid(c, grid)) {
        throw DomainError("coordinate (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                          ") outside grid of side " + std::to_string(grid.n()));
    }
    return {(c.col - 1) * grid.n() + c.row};
}

// Distance exactly 1: orthogonal neighbours only.
constexpr bool are_adjacent(GridCoord a, GridCoord b) noexcept {
    const auto dr = a.row > b.row ? a.row - b.row : b.row - a.row;
    const auto dc = a.col > b.col ? a.col - b.col : b.col - a.col;
    return dr + dc == 1;
}

// Calls fn(PieceId) for each in-grid orthogonal neighbour of piece. No bounds
// check on piece itself; callers validate first.
template <typename Fn>
void for_each_neighbor(PieceId piece, const GridSpec& grid, Fn&& fn) {
    const std::uint32_t n = grid.n();
    const std::uint32_t z = piece.value - 1;
    const std::uint32_t row = z % n;
    const std::uint32_t col = z / n;
    if (row > 0) fn(PieceId{piece.value - 1});
    if (row + 1 < n) fn(PieceId{piece.value + 1});
    if (col > 0) fn(PieceId{piece.value - n});
    if (col + 1 < n) fn(PieceId{piece.value + n});
}

// A nonempty, 4-connected set of pieces. Members are kept sorted ascending so
// that equality is set equality and the minimum member is front().
class Cluster {
public:
    Cluster() = default;

    explicit Cluster(std::vector<PieceId> pieces) : pieces_(std::move(pieces)) {
        std::sort(pieces_.begin(), pieces_.end());
    }

    static Cluster singleton(PieceId p) {
        Cluster c;
        c.pieces_.push_back(p);
        return c;
    }

    const std::vector<PieceId>& pieces() const noexcept { return pieces_; }
    std::size_t size() const noexcept { return pieces_.size(); }
    bool empty() const noexcept { return pieces_.empty(); }
    PieceId min_piece() const { return pieces_.front(); }

    friend bool operator==(const Cluster&, const Cluster&) = default;
    friend auto operator<=>(const Cluster& a, const Cluster& b) { return a.pieces_ <=> b.pieces_; }

private:
    std::vector<PieceId> pieces_;
};

// Checks the Cluster invariant: nonempty, valid, duplicate-free and 4-connected.
inline bool is_connected_cluster(const Cluster& cluster, const GridSpec& grid) {
    const auto& pieces = cluster.pieces();
    if (pieces.empty()) return false;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!is_valid(pieces[i], grid)) return false;
        if (i > 0 && pieces[i] == pieces[i - 1]) return false;
    }
    std::vector<char> member(grid.piece_count() + 1, 0);
    for (auto p : pieces) member[p.value] = 1;
    std::vector<char> seen(grid.piece_count() + 1, 0);
    std::vector<PieceId> stack{pieces.front()};
    seen[pieces.front().value] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
        const PieceId p = stack.back();
        stack.pop_back();
        ++reached;
        for_each_neighbor(p, grid, [&](PieceId q) {
            if (member[q.value] && !seen[q.value]) {
                seen[q.value] = 1;
                stack.push_back(q);
            }
        });
    }
    return reached == pieces.size();
}

}  // namespace jigsaw
