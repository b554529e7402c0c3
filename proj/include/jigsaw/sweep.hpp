#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "jigsaw/csv_io.hpp"
#include "jigsaw/engine.hpp"
#include "jigsaw/metrics.hpp"

namespace jigsaw {

struct SweepConfig {
    std::vector<std::uint32_t> grid_sizes{10};
    std::vector<std::uint32_t> sample_sizes{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    std::vector<Mode> modes{Mode::WithReplacement};
    std::uint32_t trials = 20;
    std::uint64_t master_seed = 0;
    std::optional<std::uint64_t> iteration_cap;  // default: TrialConfig::default_cap per grid
    bool strict = false;
    std::string output_dir;    // per-trial files go to <output_dir>/trials when emit_trials
    bool emit_trials = false;
    unsigned threads = 0;      // 0: hardware concurrency

    void validate() const {
        if (grid_sizes.empty()) throw DomainError("sweep needs at least one grid size");
        if (sample_sizes.empty()) throw DomainError("sweep needs at least one sample size");
        if (modes.empty()) throw DomainError("sweep needs at least one mode");
        if (trials < 1) throw DomainError("sweep needs at least one trial per cell");
        for (auto n : grid_sizes) (void)GridSpec{n};
        for (auto k : sample_sizes) {
            if (k < 2) throw DomainError("sample size k must be >= 2, got " + std::to_string(k));
        }
        if (iteration_cap && *iteration_cap == 0) throw DomainError("iteration cap must be positive");
        if (emit_trials && output_dir.empty()) throw DomainError("per-trial output requires an output directory");
    }
};

struct SweepSummary {
    std::vector<AggregateStats> rows;  // one per (n, mode, k) cell, in that nesting order
    std::uint64_t master_seed = 0;
};

inline TrialConfig trial_config_for(const SweepConfig& sweep, std::uint32_t n, std::uint32_t k, Mode mode,
                                    std::uint32_t trial) {
    TrialConfig tc;
    tc.grid = GridSpec(n);
    tc.sample_size = k;
    tc.mode = mode;
    tc.seed = derive_trial_seed(sweep.master_seed, n, k, mode_tag(mode), trial);
    tc.iteration_cap = sweep.iteration_cap.value_or(TrialConfig::default_cap(tc.grid));
    return tc;
}

inline std::string trial_file_stem(std::uint32_t n, std::uint32_t k, Mode mode, std::uint32_t trial) {
    return "n" + std::to_string(n) + "_k" + std::to_string(k) + "_" + std::string(mode_name(mode)) + "_t" +
           std::to_string(trial);
}

// Accepts {"grid_sizes", "sample_sizes", "modes", "trials", "master_seed",
// "iteration_cap", "strict", "output_dir", "emit_trials", "threads"}; missing
// keys keep their defaults, unknown keys are rejected.
inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    static const char* known[] = {"grid_sizes", "sample_sizes", "modes",       "trials",      "master_seed",
                                  "iteration_cap", "strict",    "output_dir", "emit_trials", "threads"};
    if (!j.is_object()) throw DomainError("sweep config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw DomainError("unknown sweep config key '" + key + "'");
        }
    }
    SweepConfig c;
    try {
        if (j.contains("grid_sizes")) c.grid_sizes = j.at("grid_sizes").get<std::vector<std::uint32_t>>();
        if (j.contains("sample_sizes")) c.sample_sizes = j.at("sample_sizes").get<std::vector<std::uint32_t>>();
        if (j.contains("modes")) {
            c.modes.clear();
            for (const auto& m : j.at("modes")) c.modes.push_back(parse_mode(m.get<std::string>()));
        }
        if (j.contains("trials")) c.trials = j.at("trials").get<std::uint32_t>();
        if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("iteration_cap")) c.iteration_cap = j.at("iteration_cap").get<std::uint64_t>();
        if (j.contains("strict")) c.strict = j.at("strict").get<bool>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("emit_trials")) c.emit_trials = j.at("emit_trials").get<bool>();
        if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("invalid sweep config: ") + e.what());
    }
    c.validate();
    return c;
}

using SweepLogger = std::function<void(std::string_view)>;

// Runs every (n, mode, k) cell. Trials are spread over worker threads; each
// result lands in a slot fixed by (cell, trial), so the summary does not depend
// on scheduling or thread count.
inline SweepSummary run_sweep(const SweepConfig& config, const SweepLogger& log = {}) {
    config.validate();

    struct Cell {
        std::uint32_t n, k;
        Mode mode;
    };
    std::vector<Cell> cells;
    for (auto n : config.grid_sizes)
        for (auto mode : config.modes)
            for (auto k : config.sample_sizes) cells.push_back({n, k, mode});

    const std::size_t jobs = cells.size() * config.trials;
    std::vector<CompletionStats> results(jobs);
    std::vector<char> capped(jobs, 0);

    std::filesystem::path trial_dir;
    if (config.emit_trials) {
        trial_dir = std::filesystem::path(config.output_dir) / "trials";
        std::error_code ec;
        std::filesystem::create_directories(trial_dir, ec);
        if (ec) throw IoError(trial_dir.string(), ec.message());
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::mutex log_mutex;
    std::atomic<std::size_t> done{0};

    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            try {
                const auto& cell = cells[job / config.trials];
                const auto trial = static_cast<std::uint32_t>(job % config.trials);
                const auto tc = trial_config_for(config, cell.n, cell.k, cell.mode, trial);
                const auto trace = run_trial(tc);
                results[job] = completion_stats(trace);
                capped[job] = !trace.completed;
                if (config.emit_trials) {
                    const auto stem = trial_file_stem(cell.n, cell.k, cell.mode, trial);
                    emit_trace(trace, trial_dir / (stem + "_trace.csv"), trial);
                    emit_sizes(trace, trial_dir / (stem + "_sizes.csv"), trial);
                    emit_merges(trace, trial_dir / (stem + "_merges.csv"), trial);
                }
                const auto finished = ++done;
                if (log && (finished % config.trials == 0)) {
                    std::lock_guard lock(log_mutex);
                    log("progress: " + std::to_string(finished) + "/" + std::to_string(jobs) + " trials");
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next = jobs;
            }
        }
    };

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    SweepSummary summary;
    summary.master_seed = config.master_seed;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& cell = cells[c];
        const auto begin = c * config.trials;
        for (std::uint32_t t = 0; t < config.trials; ++t) {
            if (!capped[begin + t]) continue;
            const auto tc = trial_config_for(config, cell.n, cell.k, cell.mode, t);
            const auto msg = "cell n=" + std::to_string(cell.n) + " k=" + std::to_string(cell.k) + " mode=" +
                             std::string(mode_name(cell.mode)) + " trial " + std::to_string(t) + " (seed " +
                             std::to_string(tc.seed) + ") hit the iteration cap " + std::to_string(tc.iteration_cap);
            if (config.strict) throw SweepError(msg);
            if (log) log("warning: " + msg + "; excluded from aggregate");
        }
        auto agg = aggregate_completions(cell.n, cell.k, cell.mode,
                                         std::span<const CompletionStats>(results.data() + begin, config.trials));
        if (agg.trials == 0) {
            throw SweepError("cell n=" + std::to_string(cell.n) + " k=" + std::to_string(cell.k) + " mode=" +
                             std::string(mode_name(cell.mode)) + " has no completed trials");
        }
        summary.rows.push_back(agg);
    }
    return summary;
}

}  // namespace jigsaw
