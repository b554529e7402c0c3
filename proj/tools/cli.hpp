#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jigsaw/jigsaw.hpp"

namespace jigsaw::cli {

// Configurations regenerated by `figures`.
struct FigureConfig {
    std::uint32_t n, k;
    Mode mode;
    std::string note;
};

inline const std::vector<FigureConfig>& figure_configs() {
    static const std::vector<FigureConfig> configs = {
        {10, 5, Mode::WithReplacement, ""},
        {10, 10, Mode::WithReplacement, ""},
        {20, 10, Mode::WithReplacement, ""},
        {10, 5, Mode::WithoutReplacement, ""},
        {10, 10, Mode::WithoutReplacement, ""},
        {20, 10, Mode::WithoutReplacement,
         "reference caption for this configuration gives sample size 20, the reference text gives 10; 10 is used"},
        {10, 2, Mode::WithReplacement, ""},
    };
    return configs;
}

inline std::string config_stem(std::uint32_t n, std::uint32_t k, Mode mode) {
    return "n" + std::to_string(n) + "_k" + std::to_string(k) + "_" + std::string(mode_name(mode));
}

// 12 significant digits, always with a fractional part ("1.0", "3.5").
inline std::string format_real(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    std::string s(buf, ec == std::errc{} ? end : buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

template <typename T>
std::string optional_str(const std::optional<T>& v) {
    return v ? std::to_string(*v) : std::string("none");
}

inline std::uint32_t parse_u32(const std::string& s, const std::string& what) {
    std::uint32_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw DomainError("invalid " + what + " '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// "A:B:STEP", "A:B" (step 1), or a comma list "2,4,8".
inline std::vector<std::uint32_t> parse_int_list(const std::string& spec, const std::string& what) {
    std::vector<std::uint32_t> out;
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() < 2 || parts.size() > 3) throw DomainError("invalid " + what + " range '" + spec + "'");
        const auto lo = parse_u32(parts[0], what);
        const auto hi = parse_u32(parts[1], what);
        const auto step = parts.size() == 3 ? parse_u32(parts[2], what) : 1u;
        if (step == 0 || hi < lo) throw DomainError("invalid " + what + " range '" + spec + "'");
        for (std::uint64_t v = lo; v <= hi; v += step) out.push_back(static_cast<std::uint32_t>(v));
    } else {
        for (const auto& item : split(spec, ',')) out.push_back(parse_u32(item, what));
    }
    if (out.empty()) throw DomainError("empty " + what + " list");
    return out;
}

inline std::vector<Mode> parse_modes(const std::string& spec) {
    if (spec == "both") return {Mode::WithReplacement, Mode::WithoutReplacement};
    std::vector<Mode> out;
    for (const auto& item : split(spec, ',')) out.push_back(parse_mode(item));
    if (out.empty()) throw DomainError("empty mode list");
    return out;
}

inline void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError(dir, "cannot create output directory");
}

inline void emit_all(const TrialTrace& trace, const std::filesystem::path& dir, const std::string& stem) {
    emit_trace(trace, dir / (stem + "_trace.csv"));
    emit_sizes(trace, dir / (stem + "_sizes.csv"));
    emit_merges(trace, dir / (stem + "_merges.csv"));
    emit_bands(trace, default_bands(trace.config.grid), dir / (stem + "_bands.csv"));
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Iterative random-sampling jigsaw puzzle simulator"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("--verbose", verbose, "Progress logging to stderr");

    // run
    auto* run_cmd = app.add_subcommand("run", "Run a single trial");
    std::uint32_t run_n = 0, run_k = 0;
    std::string run_mode;
    std::uint64_t run_seed = 0;
    std::optional<std::uint64_t> run_cap;
    std::string trace_path, sizes_path, merges_path;
    double theta = 0.5;
    run_cmd->add_option("--n", run_n, "Grid side length")->required()->check(CLI::PositiveNumber);
    run_cmd->add_option("--k", run_k, "Sample size")->required()->check(CLI::Range(2u, 1u << 30));
    run_cmd->add_option("--mode", run_mode, "with|without")->required()->check(CLI::IsMember({"with", "without"}));
    run_cmd->add_option("--seed", run_seed, "Random seed")->required();
    run_cmd->add_option("--cap", run_cap, "Iteration cap")->check(CLI::PositiveNumber);
    run_cmd->add_option("--trace", trace_path, "Write per-iteration trace CSV");
    run_cmd->add_option("--sizes", sizes_path, "Write cluster size CSV");
    run_cmd->add_option("--merges", merges_path, "Write merge event CSV");
    run_cmd->add_option("--theta", theta, "Growth onset threshold (fraction of pieces)")
        ->check(CLI::Range(0.0, 1.0));

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep and write summary.csv");
    std::string config_path, sweep_n = "10", sweep_k = "2:20:2", sweep_mode = "with", out_dir;
    std::uint32_t sweep_trials = 20;
    std::uint64_t sweep_seed = 0;
    std::optional<std::uint64_t> sweep_cap;
    bool strict = false, per_trial = false;
    unsigned threads = 0;
    auto* cfg_opt = sweep_cmd->add_option("--config", config_path, "JSON sweep config")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--n", sweep_n, "Grid sizes: N, list, or A:B:STEP")->excludes(cfg_opt);
    sweep_cmd->add_option("--k", sweep_k, "Sample sizes: K, list, or A:B:STEP")->excludes(cfg_opt);
    sweep_cmd->add_option("--mode", sweep_mode, "with|without|both or list")->excludes(cfg_opt);
    sweep_cmd->add_option("--trials", sweep_trials, "Trials per cell")->excludes(cfg_opt)->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", sweep_seed, "Master seed")->excludes(cfg_opt);
    sweep_cmd->add_option("--cap", sweep_cap, "Iteration cap")->excludes(cfg_opt)->check(CLI::PositiveNumber);
    sweep_cmd->add_flag("--strict", strict, "Fail when a trial hits the cap")->excludes(cfg_opt);
    sweep_cmd->add_flag("--per-trial", per_trial, "Also write per-trial trace/sizes/merges files")->excludes(cfg_opt);
    sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sweep_cmd->add_option("--out", out_dir, "Output directory");

    // figures
    auto* fig_cmd = app.add_subcommand("figures", "Regenerate the showcased single-run datasets");
    std::string fig_out;
    std::uint64_t fig_seed = 0;
    fig_cmd->add_option("--out", fig_out, "Output directory")->required();
    fig_cmd->add_option("--seed", fig_seed, "Master seed")->required();

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact expected completion for tiny grids");
    std::uint32_t oracle_n = 0, oracle_k = 0;
    oracle_cmd->add_option("--n", oracle_n, "Grid side length")->required()->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--k", oracle_k, "Sample size")->required()->check(CLI::Range(2u, 1u << 30));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const auto logger = [&](std::string_view msg) {
        if (verbose || msg.rfind("warning", 0) == 0) err << msg << '\n';
    };

    try {
        if (*run_cmd) {
            TrialConfig tc;
            tc.grid = GridSpec(run_n);
            tc.sample_size = run_k;
            tc.mode = parse_mode(run_mode);
            tc.seed = run_seed;
            tc.iteration_cap = run_cap.value_or(TrialConfig::default_cap(tc.grid));
            const auto trace = run_trial(tc);
            if (!trace_path.empty()) emit_trace(trace, trace_path);
            if (!sizes_path.empty()) emit_sizes(trace, sizes_path);
            if (!merges_path.empty()) emit_merges(trace, merges_path);
            const auto stats = completion_stats(trace);
            out << "completed=" << (trace.completed ? "true" : "false") << '\n'
                << "iterations=" << trace.iterations() << '\n'
                << "half_completion=" << optional_str(stats.half_iteration) << '\n'
                << "full_completion=" << optional_str(stats.full_iteration) << '\n'
                << "growth_onset=" << optional_str(growth_onset(trace, theta)) << '\n'
                << "refills=" << trace.refill_count << '\n';
            if (!trace.completed) err << "warning: trial hit the iteration cap " << tc.iteration_cap << '\n';
            return 0;
        }

        if (*sweep_cmd) {
            SweepConfig sc;
            if (!config_path.empty()) {
                std::ifstream is(config_path);
                if (!is) throw IoError(config_path, "cannot open");
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(is);
                } catch (const nlohmann::json::parse_error& e) {
                    throw DomainError(config_path + ": " + e.what());
                }
                sc = sweep_config_from_json(j);
            } else {
                sc.grid_sizes = parse_int_list(sweep_n, "grid size");
                sc.sample_sizes = parse_int_list(sweep_k, "sample size");
                sc.modes = parse_modes(sweep_mode);
                sc.trials = sweep_trials;
                sc.master_seed = sweep_seed;
                sc.iteration_cap = sweep_cap;
                sc.strict = strict;
                sc.emit_trials = per_trial;
            }
            if (!out_dir.empty()) sc.output_dir = out_dir;
            if (threads) sc.threads = threads;
            if (sc.output_dir.empty()) throw DomainError("sweep requires --out (or output_dir in the config)");
            sc.validate();
            ensure_directory(sc.output_dir);
            const auto summary = run_sweep(sc, logger);
            const auto path = std::filesystem::path(sc.output_dir) / "summary.csv";
            emit_summary(summary.rows, summary.master_seed, path);
            write_summary_csv(out, summary.rows, summary.master_seed);
            return 0;
        }

        if (*fig_cmd) {
            ensure_directory(fig_out);
            const std::filesystem::path dir(fig_out);
            std::ostringstream manifest;
            manifest << "master_seed=" << fig_seed << '\n';
            for (const auto& fc : figure_configs()) {
                TrialConfig tc;
                tc.grid = GridSpec(fc.n);
                tc.sample_size = fc.k;
                tc.mode = fc.mode;
                tc.seed = derive_trial_seed(fig_seed, fc.n, fc.k, mode_tag(fc.mode), 0);
                tc.iteration_cap = TrialConfig::default_cap(tc.grid);
                const auto trace = run_trial(tc);
                const auto stem = config_stem(fc.n, fc.k, fc.mode);
                emit_all(trace, dir, stem);
                const auto stats = completion_stats(trace);
                manifest << stem << ": seed=" << tc.seed << " completed=" << (trace.completed ? "true" : "false")
                         << " half=" << optional_str(stats.half_iteration)
                         << " full=" << optional_str(stats.full_iteration)
                         << " onset=" << optional_str(growth_onset(trace)) << " refills=" << trace.refill_count;
                if (!fc.note.empty()) manifest << " note: " << fc.note;
                manifest << '\n';
                if (verbose) err << "wrote " << stem << '\n';
            }
            write_file(dir / "manifest.txt", [&](std::ostream& os) { os << manifest.str(); });
            out << manifest.str();
            return 0;
        }

        if (*oracle_cmd) {
            out << format_real(exact_expected_completion(GridSpec(oracle_n), oracle_k, Mode::WithReplacement))
                << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"jigsaw"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace jigsaw::cli
