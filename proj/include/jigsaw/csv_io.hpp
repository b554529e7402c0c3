#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "jigsaw/engine.hpp"
#include "jigsaw/metrics.hpp"

namespace jigsaw {

inline constexpr std::string_view kTraceHeader = "trial_id,iteration,total_clusters,largest_size";
inline constexpr std::string_view kSizesHeader = "trial_id,iteration,cluster_size,count";
inline constexpr std::string_view kMergesHeader = "trial_id,iteration,group_id,row,col";
inline constexpr std::string_view kBandsHeader = "trial_id,iteration,band_lo,band_hi,proportion";
inline constexpr std::string_view kSummaryHeader = "n,k,mode,trials,half_mean,half_std,full_mean,full_std,master_seed";

struct TraceRow {
    std::uint64_t trial_id, iteration;
    std::uint32_t total_clusters, largest_size;
    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct SizeRow {
    std::uint64_t trial_id, iteration;
    std::uint32_t cluster_size, count;
    friend bool operator==(const SizeRow&, const SizeRow&) = default;
};

struct MergeRow {
    std::uint64_t trial_id, iteration, group_id;
    std::uint32_t row, col;
    friend bool operator==(const MergeRow&, const MergeRow&) = default;
};

struct SummaryRow {
    AggregateStats stats;
    std::uint64_t master_seed = 0;
};

// ---- writers ---------------------------------------------------------------

inline void write_trace_csv(std::ostream& os, const TrialTrace& trace, std::uint64_t trial_id) {
    os << kTraceHeader << '\n';
    for (const auto& r : trace.records) {
        os << trial_id << ',' << r.iteration << ',' << r.total_clusters << ',' << r.largest_size << '\n';
    }
}

inline void write_sizes_csv(std::ostream& os, const TrialTrace& trace, std::uint64_t trial_id) {
    os << kSizesHeader << '\n';
    for (const auto& r : trace.records) {
        for (const auto& [size, count] : r.size_multiset) {
            os << trial_id << ',' << r.iteration << ',' << size << ',' << count << '\n';
        }
    }
}

inline void write_merges_csv(std::ostream& os, const TrialTrace& trace, std::uint64_t trial_id) {
    os << kMergesHeader << '\n';
    for (const auto& ev : trace.merges) {
        for (auto p : ev.pieces) {
            const auto c = coord_of(p, trace.config.grid);
            os << trial_id << ',' << ev.iteration << ',' << ev.group_id << ',' << c.row << ',' << c.col << '\n';
        }
    }
}

inline void write_bands_csv(std::ostream& os, const TrialTrace& trace, const SizeBands& bands,
                            std::uint64_t trial_id) {
    os << kBandsHeader << '\n';
    std::ostringstream buf;
    buf << std::fixed << std::setprecision(6);
    for (const auto& r : trace.records) {
        const auto props = banded_proportions(r, bands);
        for (std::size_t b = 0; b < bands.size(); ++b) {
            buf.str({});
            buf << props[b];
            os << trial_id << ',' << r.iteration << ',' << bands.bands()[b].lo << ',' << bands.bands()[b].hi << ','
               << buf.str() << '\n';
        }
    }
}

inline std::string format_fixed2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

inline void write_summary_csv(std::ostream& os, std::span<const AggregateStats> rows, std::uint64_t master_seed) {
    os << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        os << r.n << ',' << r.k << ',' << mode_name(r.mode) << ',' << r.trials << ',' << format_fixed2(r.half_mean)
           << ',' << format_fixed2(r.half_std) << ',' << format_fixed2(r.full_mean) << ','
           << format_fixed2(r.full_std) << ',' << master_seed << '\n';
    }
}

// Opens `path` for binary (LF-preserving) writing, runs `write`, and reports
// any stream failure with the path.
template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& write) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(path.string(), "cannot open for writing");
    write(os);
    os.flush();
    if (!os) throw IoError(path.string(), "write failed");
}

inline void emit_trace(const TrialTrace& trace, const std::filesystem::path& path, std::uint64_t trial_id = 0) {
    write_file(path, [&](std::ostream& os) { write_trace_csv(os, trace, trial_id); });
}

inline void emit_sizes(const TrialTrace& trace, const std::filesystem::path& path, std::uint64_t trial_id = 0) {
    write_file(path, [&](std::ostream& os) { write_sizes_csv(os, trace, trial_id); });
}

inline void emit_merges(const TrialTrace& trace, const std::filesystem::path& path, std::uint64_t trial_id = 0) {
    write_file(path, [&](std::ostream& os) { write_merges_csv(os, trace, trial_id); });
}

inline void emit_bands(const TrialTrace& trace, const SizeBands& bands, const std::filesystem::path& path,
                       std::uint64_t trial_id = 0) {
    write_file(path, [&](std::ostream& os) { write_bands_csv(os, trace, bands, trial_id); });
}

inline void emit_summary(std::span<const AggregateStats> rows, std::uint64_t master_seed,
                         const std::filesystem::path& path) {
    if (rows.empty()) throw DomainError("refusing to emit an empty summary");
    write_file(path, [&](std::ostream& os) { write_summary_csv(os, rows, master_seed); });
}

// ---- readers ---------------------------------------------------------------

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_field(std::string_view s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DomainError("malformed CSV field '" + std::string(s) + "'");
    }
    return v;
}

// Reads a CSV body after checking the header; calls row(fields) per line.
template <typename RowFn>
void read_csv(std::istream& is, std::string_view header, std::size_t columns, RowFn&& row) {
    std::string line;
    if (!std::getline(is, line) || line != header) {
        throw DomainError("unexpected CSV header '" + line + "', expected '" + std::string(header) + "'");
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != columns) throw DomainError("wrong field count in CSV line '" + line + "'");
        row(fields);
    }
}

}  // namespace detail

inline std::vector<TraceRow> read_trace_csv(std::istream& is) {
    std::vector<TraceRow> rows;
    detail::read_csv(is, kTraceHeader, 4, [&](const auto& f) {
        rows.push_back({detail::parse_field<std::uint64_t>(f[0]), detail::parse_field<std::uint64_t>(f[1]),
                        detail::parse_field<std::uint32_t>(f[2]), detail::parse_field<std::uint32_t>(f[3])});
    });
    return rows;
}

inline std::vector<SizeRow> read_sizes_csv(std::istream& is) {
    std::vector<SizeRow> rows;
    detail::read_csv(is, kSizesHeader, 4, [&](const auto& f) {
        rows.push_back({detail::parse_field<std::uint64_t>(f[0]), detail::parse_field<std::uint64_t>(f[1]),
                        detail::parse_field<std::uint32_t>(f[2]), detail::parse_field<std::uint32_t>(f[3])});
    });
    return rows;
}

inline std::vector<MergeRow> read_merges_csv(std::istream& is) {
    std::vector<MergeRow> rows;
    detail::read_csv(is, kMergesHeader, 5, [&](const auto& f) {
        rows.push_back({detail::parse_field<std::uint64_t>(f[0]), detail::parse_field<std::uint64_t>(f[1]),
                        detail::parse_field<std::uint64_t>(f[2]), detail::parse_field<std::uint32_t>(f[3]),
                        detail::parse_field<std::uint32_t>(f[4])});
    });
    return rows;
}

inline std::vector<SummaryRow> read_summary_csv(std::istream& is) {
    std::vector<SummaryRow> rows;
    detail::read_csv(is, kSummaryHeader, 9, [&](const auto& f) {
        SummaryRow r;
        r.stats.n = detail::parse_field<std::uint32_t>(f[0]);
        r.stats.k = detail::parse_field<std::uint32_t>(f[1]);
        r.stats.mode = parse_mode(f[2]);
        r.stats.trials = detail::parse_field<std::uint32_t>(f[3]);
        r.stats.half_mean = detail::parse_field<double>(f[4]);
        r.stats.half_std = detail::parse_field<double>(f[5]);
        r.stats.full_mean = detail::parse_field<double>(f[6]);
        r.stats.full_std = detail::parse_field<double>(f[7]);
        r.master_seed = detail::parse_field<std::uint64_t>(f[8]);
        rows.push_back(r);
    });
    return rows;
}

// Rebuilds per-iteration records (iteration, counts, multiset) from the trace
// and sizes files of a single trial.
inline std::vector<IterationRecord> records_from_csv(std::span<const TraceRow> trace,
                                                     std::span<const SizeRow> sizes) {
    std::vector<IterationRecord> out;
    out.reserve(trace.size());
    for (const auto& t : trace) out.push_back({t.iteration, t.total_clusters, t.largest_size, {}});
    for (const auto& s : sizes) {
        if (s.iteration >= out.size()) throw DomainError("sizes row references unknown iteration");
        out[s.iteration].size_multiset[s.cluster_size] = s.count;
    }
    return out;
}

}  // namespace jigsaw
