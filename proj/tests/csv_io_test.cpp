#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jigsaw/csv_io.hpp"

using namespace jigsaw;

namespace {

TrialTrace sample_trace(std::uint32_t n, std::uint32_t k, Mode mode, std::uint64_t seed) {
    TrialConfig c;
    c.grid = GridSpec(n);
    c.sample_size = k;
    c.mode = mode;
    c.seed = seed;
    return run_trial(c);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("jigsaw_csv_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST(TraceCsv, HeaderFirstAndLastRows) {
    const auto t = sample_trace(10, 5, Mode::WithReplacement, 3);
    std::ostringstream os;
    write_trace_csv(os, t, 7);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "trial_id,iteration,total_clusters,largest_size");
    std::getline(is, line);
    EXPECT_EQ(line, "7,0,100,1");
    EXPECT_EQ(os.str().find('\r'), std::string::npos);

    std::istringstream again(os.str());
    const auto rows = read_trace_csv(again);
    ASSERT_EQ(rows.size(), t.records.size());
    EXPECT_EQ(rows.back().total_clusters, 1u);
    EXPECT_EQ(rows.back().largest_size, 100u);
}

TEST(SizesCsv, InitialRowAndConservation) {
    const auto t = sample_trace(10, 4, Mode::WithoutReplacement, 8);
    std::ostringstream os;
    write_sizes_csv(os, t, 0);
    std::istringstream is(os.str());
    const auto rows = read_sizes_csv(is);
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows.front(), (SizeRow{0, 0, 1, 100}));
    EXPECT_EQ(rows.size() > 1 && rows[1].iteration == 0, false);

    std::map<std::uint64_t, std::uint64_t> mass;
    for (const auto& r : rows) mass[r.iteration] += static_cast<std::uint64_t>(r.cluster_size) * r.count;
    ASSERT_EQ(mass.size(), t.records.size());
    for (const auto& [it, m] : mass) ASSERT_EQ(m, 100u) << "iteration " << it;
}

TEST(SizesCsv, BandProportionsRecomputedFromFile) {
    const auto t = sample_trace(10, 2, Mode::WithReplacement, 12);
    std::ostringstream trace_os, sizes_os;
    write_trace_csv(trace_os, t, 0);
    write_sizes_csv(sizes_os, t, 0);
    std::istringstream trace_is(trace_os.str()), sizes_is(sizes_os.str());
    const auto trace_rows = read_trace_csv(trace_is);
    const auto size_rows = read_sizes_csv(sizes_is);
    const auto rebuilt = records_from_csv(trace_rows, size_rows);
    ASSERT_EQ(rebuilt, t.records);
    const auto bands = default_bands(t.config.grid);
    for (std::size_t i = 0; i < rebuilt.size(); ++i) {
        ASSERT_EQ(banded_proportions(rebuilt[i], bands), banded_proportions(t.records[i], bands));
    }
}

TEST(MergesCsv, RowsPerPieceAndCoverage) {
    const auto t = sample_trace(10, 6, Mode::WithReplacement, 4);
    std::ostringstream os;
    write_merges_csv(os, t, 2);
    std::istringstream is(os.str());
    const auto rows = read_merges_csv(is);

    std::size_t expected_rows = 0;
    for (const auto& ev : t.merges) expected_rows += ev.pieces.size();
    ASSERT_EQ(rows.size(), expected_rows);

    std::map<std::uint64_t, std::size_t> per_group;
    std::set<std::uint32_t> covered;
    for (const auto& r : rows) {
        ASSERT_EQ(r.trial_id, 2u);
        ASSERT_GE(r.row, 1u);
        ASSERT_LE(r.row, 10u);
        ASSERT_GE(r.col, 1u);
        ASSERT_LE(r.col, 10u);
        ++per_group[r.group_id];
        covered.insert(piece_of({r.row, r.col}, t.config.grid).value);
    }
    for (const auto& ev : t.merges) ASSERT_EQ(per_group[ev.group_id], ev.pieces.size());
    // Every piece joins some merge before a 10x10 puzzle completes.
    EXPECT_EQ(covered.size(), 100u);
}

TEST(MergesCsv, TwoPieceMergeEmitsTwoRows) {
    TrialTrace t;
    t.config.grid = GridSpec(10);
    t.merges.push_back({7, 0, {PieceId{1}, PieceId{2}}});
    std::ostringstream os;
    write_merges_csv(os, t, 0);
    EXPECT_EQ(os.str(), "trial_id,iteration,group_id,row,col\n0,7,0,1,1\n0,7,0,2,1\n");
}

TEST(SummaryCsv, TwoDecimalRoundTrip) {
    std::vector<AggregateStats> rows{{10, 2, Mode::WithReplacement, 20, 0, 972.449, 128.2311, 1313.4, 113.7349},
                                     {10, 4, Mode::WithoutReplacement, 20, 0, 160.1, 26.84, 218.4, 22.94}};
    std::ostringstream os;
    write_summary_csv(os, rows, 99);
    EXPECT_EQ(os.str(),
              "n,k,mode,trials,half_mean,half_std,full_mean,full_std,master_seed\n"
              "10,2,with,20,972.45,128.23,1313.40,113.73,99\n"
              "10,4,without,20,160.10,26.84,218.40,22.94,99\n");
    std::istringstream is(os.str());
    const auto back = read_summary_csv(is);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].stats.n, rows[i].n);
        EXPECT_EQ(back[i].stats.k, rows[i].k);
        EXPECT_EQ(back[i].stats.mode, rows[i].mode);
        EXPECT_NEAR(back[i].stats.half_mean, rows[i].half_mean, 0.005);
        EXPECT_NEAR(back[i].stats.full_std, rows[i].full_std, 0.005);
        EXPECT_EQ(back[i].master_seed, 99u);
    }
}

TEST(Emit, FilesAndErrors) {
    const auto dir = temp_dir("emit");
    const auto t = sample_trace(4, 3, Mode::WithReplacement, 1);
    emit_trace(t, dir / "t.csv");
    emit_sizes(t, dir / "s.csv");
    emit_merges(t, dir / "m.csv");
    std::ostringstream expect;
    write_trace_csv(expect, t, 0);
    EXPECT_EQ(slurp(dir / "t.csv"), expect.str());

    EXPECT_THROW(emit_trace(t, dir / "missing" / "t.csv"), IoError);
    try {
        emit_trace(t, dir / "missing" / "t.csv");
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
    }
    EXPECT_THROW(emit_summary({}, 0, dir / "summary.csv"), DomainError);
}

TEST(Readers, RejectMalformedInput) {
    std::istringstream bad_header("trial,iteration\n");
    EXPECT_THROW(read_trace_csv(bad_header), DomainError);
    std::istringstream bad_field("trial_id,iteration,total_clusters,largest_size\n0,x,1,1\n");
    EXPECT_THROW(read_trace_csv(bad_field), DomainError);
    std::istringstream bad_count("trial_id,iteration,total_clusters,largest_size\n0,1,1\n");
    EXPECT_THROW(read_trace_csv(bad_count), DomainError);
}
