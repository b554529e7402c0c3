#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jigsaw/connectivity.hpp"
#include "jigsaw/grid.hpp"
#include "jigsaw/sampling.hpp"

namespace jigsaw {

enum class Mode { WithReplacement, WithoutReplacement };

inline std::string_view mode_name(Mode m) noexcept {
    return m == Mode::WithReplacement ? "with" : "without";
}

inline Mode parse_mode(std::string_view s) {
    if (s == "with") return Mode::WithReplacement;
    if (s == "without") return Mode::WithoutReplacement;
    throw DomainError("unknown mode '" + std::string(s) + "' (expected with|without)");
}

// Stable numeric tag folded into per-trial seeds.
constexpr std::uint64_t mode_tag(Mode m) noexcept { return m == Mode::WithReplacement ? 1 : 2; }

// Partition of all pieces into clusters, split into the drawable pool and the
// reserve (without-replacement only).
struct PuzzleState {
    GridSpec grid;
    Mode mode;
    std::vector<Cluster> active;
    std::vector<Cluster> reserve;

    std::size_t total_clusters() const noexcept { return active.size() + reserve.size(); }
    bool complete() const noexcept { return total_clusters() == 1; }
};

struct MergeEvent {
    std::uint64_t iteration = 0;
    std::uint64_t group_id = 0;
    std::vector<PieceId> pieces;  // sorted ascending

    friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

struct IterationRecord {
    std::uint64_t iteration = 0;
    std::uint32_t total_clusters = 0;
    std::uint32_t largest_size = 0;
    std::map<std::uint32_t, std::uint32_t> size_multiset;  // cluster size -> count

    friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct TrialConfig {
    GridSpec grid{1};
    std::uint32_t sample_size = 2;
    Mode mode = Mode::WithReplacement;
    std::uint64_t seed = 0;
    std::uint64_t iteration_cap = 10'000;

    static std::uint64_t default_cap(const GridSpec& grid) noexcept {
        return std::max<std::uint64_t>(10'000, 200ULL * grid.piece_count());
    }

    void validate() const {
        if (sample_size < 2) throw DomainError("sample size k must be >= 2, got " + std::to_string(sample_size));
        if (iteration_cap == 0) throw DomainError("iteration cap must be positive");
    }

    friend bool operator==(const TrialConfig&, const TrialConfig&) = default;
};

struct TrialTrace {
    TrialConfig config;
    std::vector<IterationRecord> records;  // records[t].iteration == t
    std::vector<MergeEvent> merges;
    std::uint64_t refill_count = 0;
    bool completed = false;

    // Number of sampling steps executed.
    std::uint64_t iterations() const noexcept { return records.empty() ? 0 : records.size() - 1; }

    friend bool operator==(const TrialTrace&, const TrialTrace&) = default;
};

inline PuzzleState initial_state(const GridSpec& grid, Mode mode) {
    PuzzleState s{grid, mode, {}, {}};
    s.active.reserve(grid.piece_count());
    for (std::uint32_t p = 1; p <= grid.piece_count(); ++p) s.active.push_back(Cluster::singleton({p}));
    return s;
}

inline IterationRecord record_of(const PuzzleState& state, std::uint64_t iteration) {
    IterationRecord r;
    r.iteration = iteration;
    r.total_clusters = static_cast<std::uint32_t>(state.total_clusters());
    auto tally = [&r](const std::vector<Cluster>& pool) {
        for (const auto& c : pool) {
            const auto sz = static_cast<std::uint32_t>(c.size());
            ++r.size_multiset[sz];
            r.largest_size = std::max(r.largest_size, sz);
        }
    };
    tally(state.active);
    tally(state.reserve);
    return r;
}

struct StepOutcome {
    std::vector<Cluster> merged;  // components built from >= 2 sampled clusters
    bool refilled = false;
};

// One sampling step. Draws min(k, |active|) clusters uniformly (unweighted by
// size), replaces them by the connected components of their union. In
// with-replacement mode the components go back to the active pool; otherwise
// they are parked in the reserve, which is folded back into the pool first
// whenever fewer than k clusters remain drawable.
template <typename Urbg>
StepOutcome step(PuzzleState& state, std::uint32_t k, Urbg& rng) {
    if (k < 2) throw DomainError("sample size k must be >= 2");
    if (state.total_clusters() < 2) throw ContractError("step called on a completed puzzle");

    StepOutcome out;
    if (state.mode == Mode::WithoutReplacement && state.active.size() < k) {
        std::move(state.reserve.begin(), state.reserve.end(), std::back_inserter(state.active));
        state.reserve.clear();
        out.refilled = true;
    }

    const auto pool = static_cast<std::uint32_t>(state.active.size());
    const auto m = std::min(k, pool);
    const auto chosen_idx = draw_units(pool, m, rng);

    std::vector<char> chosen(pool, 0);
    for (auto i : chosen_idx) chosen[i] = 1;

    // Gather sampled pieces in draw order; remember each piece's source cluster size.
    std::vector<std::uint32_t> source_size(state.grid.piece_count() + 1, 0);
    std::vector<PieceId> pieces;
    for (auto i : chosen_idx) {
        const auto& c = state.active[i];
        for (auto p : c.pieces()) {
            source_size[p.value] = static_cast<std::uint32_t>(c.size());
            pieces.push_back(p);
        }
    }

    std::size_t keep = 0;
    for (std::uint32_t i = 0; i < pool; ++i) {
        if (!chosen[i]) {
            if (keep != i) state.active[keep] = std::move(state.active[i]);
            ++keep;
        }
    }
    state.active.resize(keep);

    auto components = connected_components(pieces, state.grid);
    for (const auto& comp : components) {
        if (comp.size() > source_size[comp.min_piece().value]) out.merged.push_back(comp);
    }

    auto& dest = state.mode == Mode::WithReplacement ? state.active : state.reserve;
    std::move(components.begin(), components.end(), std::back_inserter(dest));
    return out;
}

struct NoObserver {
    void operator()(const PuzzleState&, const IterationRecord&, std::span<const MergeEvent>) const noexcept {}
};

// Runs the process until a single cluster remains or the iteration cap is hit.
// Iteration numbers count sampling steps; refills do not consume one. The
// observer sees the state after initialisation and after every step.
template <typename Observer = NoObserver>
TrialTrace run_trial(const TrialConfig& config, Observer&& observer = {}) {
    config.validate();
    TrialTrace trace;
    trace.config = config;

    Rng rng(config.seed);
    PuzzleState state = initial_state(config.grid, config.mode);
    trace.records.push_back(record_of(state, 0));
    observer(state, trace.records.back(), std::span<const MergeEvent>{});

    std::uint64_t next_group = 0;
    std::uint64_t iteration = 0;
    while (!state.complete() && iteration < config.iteration_cap) {
        ++iteration;
        auto outcome = step(state, config.sample_size, rng);
        if (outcome.refilled) ++trace.refill_count;

        const auto first_new = trace.merges.size();
        for (auto& c : outcome.merged) {
            trace.merges.push_back(MergeEvent{iteration, next_group++, c.pieces()});
        }
        trace.records.push_back(record_of(state, iteration));
        observer(state, trace.records.back(),
                 std::span<const MergeEvent>(trace.merges.data() + first_new, trace.merges.size() - first_new));
    }
    trace.completed = state.complete();
    return trace;
}

}  // namespace jigsaw
