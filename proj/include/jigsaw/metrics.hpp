#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jigsaw/engine.hpp"

namespace jigsaw {

struct SizeBand {
    std::uint32_t lo = 1;
    std::uint32_t hi = 1;

    bool contains(std::uint32_t size) const noexcept { return size >= lo && size <= hi; }
    friend bool operator==(const SizeBand&, const SizeBand&) = default;
};

// Disjoint ascending intervals covering [1, piece_count].
class SizeBands {
public:
    SizeBands(std::vector<SizeBand> bands, std::uint32_t piece_count) : bands_(std::move(bands)) {
        if (bands_.empty()) throw DomainError("size bands must not be empty");
        std::uint32_t expect = 1;
        for (const auto& b : bands_) {
            if (b.lo != expect || b.hi < b.lo) {
                throw DomainError("size bands must be ascending, disjoint and contiguous from 1");
            }
            expect = b.hi + 1;
        }
        if (bands_.back().hi != piece_count) {
            throw DomainError("size bands must cover [1, " + std::to_string(piece_count) + "]");
        }
    }

    const std::vector<SizeBand>& bands() const noexcept { return bands_; }
    std::size_t size() const noexcept { return bands_.size(); }

private:
    std::vector<SizeBand> bands_;
};

// [1,1], [2,10], [11,50], [51,100] at n = 10; for other n the break points 10
// and 50 scale with n*n (rounded), collapsing bands that become empty.
inline SizeBands default_bands(const GridSpec& grid) {
    const std::uint32_t total = grid.piece_count();
    const auto scaled = [total](double fraction) {
        return static_cast<std::uint32_t>(std::lround(fraction * total));
    };
    const std::uint32_t breaks[] = {1, scaled(0.10), scaled(0.50), total};
    std::vector<SizeBand> bands;
    std::uint32_t lo = 1;
    for (auto hi : breaks) {
        hi = std::min(hi, total);
        if (hi >= lo) {
            bands.push_back({lo, hi});
            lo = hi + 1;
        }
    }
    return SizeBands(std::move(bands), total);
}

struct CompletionStats {
    std::optional<std::uint64_t> half_iteration;
    std::optional<std::uint64_t> full_iteration;

    friend bool operator==(const CompletionStats&, const CompletionStats&) = default;
};

struct AggregateStats {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    Mode mode = Mode::WithReplacement;
    std::uint32_t trials = 0;    // trials contributing to the statistics
    std::uint32_t excluded = 0;  // trials dropped for not completing under the cap
    double half_mean = 0;
    double half_std = 0;
    double full_mean = 0;
    double full_std = 0;

    friend bool operator==(const AggregateStats&, const AggregateStats&) = default;
};

// Cluster-count threshold for "half completion": floor(n*n / 2), but never
// below 1 so a 1x1 puzzle is half complete at iteration 0.
inline std::uint32_t half_threshold(const GridSpec& grid) noexcept {
    return std::max<std::uint32_t>(1, grid.piece_count() / 2);
}

// First iteration whose cluster count is <= threshold.
inline std::optional<std::uint64_t> completion_iteration(const TrialTrace& trace, std::uint32_t threshold) {
    if (threshold < 1) throw DomainError("completion threshold must be >= 1");
    for (const auto& r : trace.records) {
        if (r.total_clusters <= threshold) return r.iteration;
    }
    return std::nullopt;
}

inline CompletionStats completion_stats(const TrialTrace& trace) {
    return {completion_iteration(trace, half_threshold(trace.config.grid)), completion_iteration(trace, 1)};
}

// Fraction of clusters (not pieces) whose size falls in each band.
inline std::vector<double> banded_proportions(const IterationRecord& record, const SizeBands& bands) {
    std::vector<double> out(bands.size(), 0.0);
    if (record.total_clusters == 0) return out;
    for (const auto& [size, count] : record.size_multiset) {
        for (std::size_t b = 0; b < bands.size(); ++b) {
            if (bands.bands()[b].contains(size)) {
                out[b] += count;
                break;
            }
        }
    }
    for (auto& v : out) v /= record.total_clusters;
    return out;
}

// First iteration at which the largest cluster holds >= theta * n*n pieces.
inline std::optional<std::uint64_t> growth_onset(const TrialTrace& trace, double theta = 0.5) {
    if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("growth onset theta must lie in (0, 1]");
    const double target = theta * trace.config.grid.piece_count();
    for (const auto& r : trace.records) {
        if (static_cast<double>(r.largest_size) >= target) return r.iteration;
    }
    return std::nullopt;
}

// onset / full completion; absent when either is absent or completion is at 0.
inline std::optional<double> lag_fraction(const TrialTrace& trace, double theta = 0.5) {
    const auto onset = growth_onset(trace, theta);
    const auto full = completion_iteration(trace, 1);
    if (!onset || !full || *full == 0) return std::nullopt;
    return static_cast<double>(*onset) / static_cast<double>(*full);
}

namespace detail {

// Mean and sample (n-1) std; values are sorted first so the result does not
// depend on input order. A single value has std 0.
inline std::pair<double, double> mean_and_sample_std(std::vector<double> values) {
    if (values.empty()) return {0.0, 0.0};
    std::sort(values.begin(), values.end());
    double sum = 0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace detail

// Aggregates per-trial completion statistics of one (n, k, mode) cell. Entries
// without a full completion count as excluded.
inline AggregateStats aggregate_completions(std::uint32_t n, std::uint32_t k, Mode mode,
                                            std::span<const CompletionStats> stats) {
    AggregateStats agg;
    agg.n = n;
    agg.k = k;
    agg.mode = mode;
    std::vector<double> half, full;
    for (const auto& s : stats) {
        if (!s.full_iteration) {
            ++agg.excluded;
            continue;
        }
        half.push_back(static_cast<double>(s.half_iteration.value_or(*s.full_iteration)));
        full.push_back(static_cast<double>(*s.full_iteration));
    }
    agg.trials = static_cast<std::uint32_t>(full.size());
    std::tie(agg.half_mean, agg.half_std) = detail::mean_and_sample_std(std::move(half));
    std::tie(agg.full_mean, agg.full_std) = detail::mean_and_sample_std(std::move(full));
    return agg;
}

// Cross-trial mean and sample std of half/full completion. All traces must
// share (n, k, mode). Incomplete traces throw when strict, else are excluded
// and counted in AggregateStats::excluded.
inline AggregateStats aggregate_trials(std::span<const TrialTrace> traces, bool strict = false) {
    if (traces.size() < 2) throw DomainError("aggregate_trials needs at least 2 traces");
    const auto& first = traces.front().config;
    std::vector<CompletionStats> stats;
    stats.reserve(traces.size());
    for (const auto& t : traces) {
        if (t.config.grid != first.grid || t.config.sample_size != first.sample_size ||
            t.config.mode != first.mode) {
            throw DomainError("aggregate_trials given traces from different (n, k, mode) cells");
        }
        if (!t.completed && strict) {
            throw SweepError("trial with seed " + std::to_string(t.config.seed) +
                             " did not complete within " + std::to_string(t.config.iteration_cap) +
                             " iterations");
        }
        stats.push_back(completion_stats(t));
    }
    auto agg = aggregate_completions(first.grid.n(), first.sample_size, first.mode, stats);
    if (agg.trials < 2) throw SweepError("fewer than 2 completed traces to aggregate");
    return agg;
}

}  // namespace jigsaw
