#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "gridcover/grid.hpp"
#include "gridcover/rng.hpp"

using namespace gridcover;

TEST_CASE("point_to_cell: examples and boundary clamp") {
    const std::array<double, 3> origin{0.0, 0.0, 0.0};
    CHECK(point_to_cell(origin, 5) == 0);

    const std::array<double, 2> corner{1.0, 1.0};
    CHECK(point_to_cell(corner, 2) == 3); // last cell of the 2x2 grid

    const std::array<double, 2> interior{0.34, 0.72};
    CHECK(point_to_cell(interior, 3) == 7); // c = (1, 2) -> 1 + 2*3

    const std::array<double, 1> bad{1.5};
    CHECK_THROWS_AS(point_to_cell(bad, 3), invalid_params);
    const std::array<double, 1> nan_coord{std::nan("")};
    CHECK_THROWS_AS(point_to_cell(nan_coord, 3), invalid_params);
}

TEST_CASE("partition property: cell centers enumerate every index once") {
    struct Case {
        int d;
        std::uint64_t k;
    };
    for (const Case c : {Case{1, 4096}, Case{2, 64}, Case{3, 16}, Case{4, 8}}) {
        std::uint64_t cells = 1;
        for (int i = 0; i < c.d; ++i) cells *= c.k;
        std::vector<char> seen(cells, 0);
        std::vector<std::uint64_t> digits(c.d, 0);
        std::vector<double> point(c.d);
        for (std::uint64_t n = 0; n < cells; ++n) {
            std::uint64_t rest = n;
            for (int i = 0; i < c.d; ++i) {
                digits[i] = rest % c.k;
                rest /= c.k;
                point[i] = (static_cast<double>(digits[i]) + 0.5) /
                           static_cast<double>(c.k);
            }
            const CellIndex idx = point_to_cell(point, c.k);
            REQUIRE(idx < cells);
            REQUIRE(seen[idx] == 0);
            seen[idx] = 1;
        }
    }
}

TEST_CASE("uniform points induce uniform cell frequencies (chi-square 0.999)") {
    struct Case {
        int d;
        std::uint64_t k;
        double quantile; // chi2 0.999 quantile at k^d - 1 dof
    };
    // Quantiles frozen from scipy.stats.chi2.ppf(0.999, df).
    const Case cases[] = {
        {1, 7, 22.457744484825323},    // df 6
        {2, 10, 148.23035916510173},   // df 99
        {3, 4, 103.44237731987324},    // df 63
    };
    for (const Case& c : cases) {
        std::uint64_t cells = 1;
        for (int i = 0; i < c.d; ++i) cells *= c.k;

        std::vector<std::uint64_t> counts(cells, 0);
        SplitMix64 rng(0xC0FFEEULL + cells);
        std::vector<double> point(c.d);
        const std::uint64_t n = 1'000'000;
        for (std::uint64_t i = 0; i < n; ++i) {
            for (int j = 0; j < c.d; ++j) point[j] = rng.next_unit();
            ++counts[point_to_cell(point, c.k)];
        }

        const double expected = static_cast<double>(n) / static_cast<double>(cells);
        double chi_square = 0.0;
        for (const std::uint64_t observed : counts) {
            const double diff = static_cast<double>(observed) - expected;
            chi_square += diff * diff / expected;
        }
        CHECK(chi_square < c.quantile);
    }
}

TEST_CASE("CoverageState bookkeeping") {
    CoverageState state(5);
    CHECK(state.uncovered_count() == 5);
    CHECK_FALSE(state.is_fully_covered());

    CHECK(state.record_sample(0));
    CHECK(state.covered_count() == 1);
    CHECK(state.samples_drawn() == 1);

    CHECK_FALSE(state.record_sample(0)); // idempotent coverage
    CHECK(state.covered_count() == 1);
    CHECK(state.samples_drawn() == 2);

    for (CellIndex c = 1; c < 5; ++c) state.record_sample(c);
    CHECK(state.covered_count() == 5);
    CHECK(state.uncovered_count() == 0);
    CHECK(state.is_fully_covered());

    CHECK_THROWS_AS(state.record_sample(5), invalid_params);
    CHECK_THROWS_AS(CoverageState(0), invalid_params);
}

TEST_CASE("uncovered_count equals cells minus distinct recorded cells") {
    SplitMix64 rng(1234);
    const std::uint64_t cells = 257; // crosses a word boundary in the bitset
    CoverageState state(cells);
    std::set<CellIndex> distinct;
    for (int i = 0; i < 400; ++i) {
        const CellIndex cell = rng.next_below(cells);
        state.record_sample(cell);
        distinct.insert(cell);
        CHECK(state.uncovered_count() == cells - distinct.size());
        CHECK(state.covered_count() == distinct.size());
    }
    CHECK(state.samples_drawn() == 400);
}
