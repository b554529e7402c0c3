#include <gtest/gtest.h>

#include "jigsaw/jigsaw.hpp"
#include "support.hpp"

using namespace jigsaw;
namespace jt = jigsaw::testing;

// Randomised engine invariants over n in [2, 12], k in [2, n*n], both modes.
// Every state along every trial is checked for conservation, disjointness,
// connectivity and mode purity; traces for monotonicity and determinism.
TEST(EngineProperties, RandomisedCases) {
    std::mt19937_64 meta(20240601);
    int cases = 0;
    for (int rep = 0; rep < 240; ++rep) {
        const auto n = std::uniform_int_distribution<std::uint32_t>(2, 12)(meta);
        TrialConfig c;
        c.grid = GridSpec(n);
        // Bias towards small k, where trials are long.
        const auto kmax = meta() % 3 == 0 ? c.grid.piece_count() : std::min<std::uint32_t>(8, c.grid.piece_count());
        c.sample_size = std::uniform_int_distribution<std::uint32_t>(2, kmax)(meta);
        c.mode = meta() % 2 ? Mode::WithReplacement : Mode::WithoutReplacement;
        c.seed = meta();
        c.iteration_cap = TrialConfig::default_cap(c.grid);

        std::string failure;
        std::size_t last_reserve = 0;
        const auto trace = run_trial(c, [&](const PuzzleState& s, const IterationRecord&, auto) {
            if (failure.empty()) failure = jt::check_state(s);
            last_reserve = s.reserve.size();
        });
        ASSERT_EQ(failure, "") << "n=" << n << " k=" << c.sample_size << " seed=" << c.seed;
        ASSERT_TRUE(trace.completed);
        for (std::size_t i = 1; i < trace.records.size(); ++i) {
            ASSERT_LE(trace.records[i].total_clusters, trace.records[i - 1].total_clusters);
            ASSERT_GE(trace.records[i].largest_size, trace.records[i - 1].largest_size);
        }
        if (c.mode == Mode::WithReplacement) {
            ASSERT_EQ(trace.refill_count, 0u);
            ASSERT_EQ(last_reserve, 0u);
        }
        ASSERT_EQ(run_trial(c), trace);
        ++cases;
    }
    EXPECT_GE(cases, 200);
}
