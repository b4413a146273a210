#include "gridcover/montecarlo.hpp"

#include <cmath>
#include <vector>

#include "gridcover/parallel.hpp"
#include "gridcover/rng.hpp"

namespace gridcover {

namespace {

void require_simulable(const GridSpec& grid) {
    if (grid.cells < 1) throw invalid_params("grid has no cells");
    if (grid.segments < 1) throw invalid_params("grid has no segments");
}

CellIndex draw_cell(SplitMix64& rng, const GridSpec& grid, SamplePath path,
                    std::vector<double>& point_buffer) {
    if (path == SamplePath::cell_index) return rng.next_below(grid.cells);
    for (auto& coordinate : point_buffer) coordinate = rng.next_unit();
    return point_to_cell(point_buffer, grid.segments);
}

} // namespace

TrialResult simulate_until_covered(const GridSpec& grid, std::uint64_t seed,
                                   std::uint64_t max_samples,
                                   std::uint64_t probe_m, SamplePath path) {
    require_simulable(grid);
    if (max_samples < 1) throw invalid_params("max_samples must be >= 1");

    CoverageState state(grid.cells);
    SplitMix64 rng(seed);
    std::vector<double> point_buffer(
        path == SamplePath::point_map ? static_cast<std::size_t>(grid.dimension) : 0);

    TrialResult result;
    while (!state.is_fully_covered() && state.samples_drawn() < max_samples) {
        state.record_sample(draw_cell(rng, grid, path, point_buffer));
        if (probe_m != 0 && state.samples_drawn() == probe_m)
            result.z_at_probe = state.uncovered_count();
    }

    if (state.is_fully_covered()) {
        result.m_actual = state.samples_drawn();
        // Coverage before the probe means Z stays 0 through it.
    } else {
        result.hit_cap = true;
        if (probe_m > state.samples_drawn())
            result.z_at_probe = state.uncovered_count();
    }
    return result;
}

std::uint64_t uncovered_after(const GridSpec& grid, std::uint64_t m,
                              std::uint64_t seed, SamplePath path) {
    require_simulable(grid);

    CoverageState state(grid.cells);
    SplitMix64 rng(seed);
    std::vector<double> point_buffer(
        path == SamplePath::point_map ? static_cast<std::size_t>(grid.dimension) : 0);

    for (std::uint64_t i = 0; i < m && !state.is_fully_covered(); ++i)
        state.record_sample(draw_cell(rng, grid, path, point_buffer));
    return state.uncovered_count();
}

double empirical_failure_rate(const GridSpec& grid, std::uint64_t trials,
                              std::uint64_t base_seed, std::uint64_t m,
                              unsigned jobs) {
    require_simulable(grid);
    if (trials < 1) throw invalid_params("trials must be >= 1");

    std::vector<char> failed(trials, 0);
    parallel_for_index(trials, jobs, [&](std::uint64_t t) {
        failed[t] = uncovered_after(grid, m, base_seed + t) >= 1 ? 1 : 0;
    });

    std::uint64_t failures = 0;
    for (const char f : failed) failures += static_cast<std::uint64_t>(f);
    return static_cast<double>(failures) / static_cast<double>(trials);
}

double empirical_failure_rate(const TrialConfig& config, std::uint64_t m) {
    return empirical_failure_rate(subcube_count(config.params), config.trials,
                                  config.base_seed, m, config.jobs);
}

double exact_coverage_failure(std::uint64_t cells, std::uint64_t m) {
    if (cells < 1) throw invalid_params("exact_coverage_failure needs cells >= 1");
    if (cells > 24)
        throw invalid_params("exact_coverage_failure is limited to cells <= 24");

    // Neumaier-compensated alternating sum of
    //   (-1)^j C(cells, j) (1 - j/cells)^m.
    double sum = 0.0;
    double compensation = 0.0;
    double binom = 1.0; // C(cells, j), exact in double for cells <= 24
    for (std::uint64_t j = 0; j <= cells; ++j) {
        if (j > 0)
            binom = binom * static_cast<double>(cells - j + 1) / static_cast<double>(j);
        double term = binom;
        if (j > 0) {
            if (j >= cells && m >= 1) {
                term = 0.0;
            } else if (m >= 1) {
                term *= std::exp(static_cast<double>(m) *
                                 std::log1p(-static_cast<double>(j) /
                                            static_cast<double>(cells)));
            }
            if (j % 2 == 1) term = -term;
        }
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            compensation += (sum - t) + term;
        else
            compensation += (term - t) + sum;
        sum = t;
    }
    const double covered = sum + compensation;
    const double failure = 1.0 - covered;
    if (failure < 0.0) return 0.0;
    if (failure > 1.0) return 1.0;
    return failure;
}

MomentEstimates empirical_moments(const GridSpec& grid, std::uint64_t trials,
                                  std::uint64_t base_seed, std::uint64_t m,
                                  unsigned jobs) {
    require_simulable(grid);
    if (trials < 2) throw invalid_params("empirical_moments needs trials >= 2");
    if (grid.cells < 2)
        throw invalid_params("empirical_moments needs at least two cells");

    struct Row {
        double z = 0.0;
        double y0 = 0.0;
        double y1 = 0.0;
    };
    std::vector<Row> rows(trials);
    parallel_for_index(trials, jobs, [&](std::uint64_t t) {
        CoverageState state(grid.cells);
        SplitMix64 rng(base_seed + t);
        for (std::uint64_t i = 0; i < m && !state.is_fully_covered(); ++i)
            state.record_sample(rng.next_below(grid.cells));
        rows[t].z = static_cast<double>(state.uncovered_count());
        rows[t].y0 = state.is_covered(0) ? 0.0 : 1.0;
        rows[t].y1 = state.is_covered(1) ? 0.0 : 1.0;
    });

    const double n = static_cast<double>(trials);
    double mean_z = 0.0, mean_y0 = 0.0, mean_y1 = 0.0;
    for (const Row& r : rows) {
        mean_z += r.z;
        mean_y0 += r.y0;
        mean_y1 += r.y1;
    }
    mean_z /= n;
    mean_y0 /= n;
    mean_y1 /= n;

    double ss_z = 0.0, ss_y = 0.0;
    for (const Row& r : rows) {
        ss_z += (r.z - mean_z) * (r.z - mean_z);
        ss_y += (r.y0 - mean_y0) * (r.y1 - mean_y1);
    }

    MomentEstimates est;
    est.mean_z = mean_z;
    est.var_z = ss_z / (n - 1.0);
    est.cov_sample = ss_y / (n - 1.0);
    return est;
}

MomentEstimates empirical_moments(const TrialConfig& config, std::uint64_t m) {
    return empirical_moments(subcube_count(config.params), config.trials,
                             config.base_seed, m, config.jobs);
}

} // namespace gridcover
