#pragma once

#include <cstdint>
#include <optional>

#include "gridcover/bounds.hpp"
#include "gridcover/grid.hpp"

namespace gridcover {

/*
Seeded trial execution for the coverage process. Trial t of a batch runs
on its own SplitMix64 stream seeded with base_seed + t, so batches are
reproducible bit-for-bit under any worker count and trials parallelize
without shared state. Aggregation happens by trial index, never in
completion order.
*/

/// How a trial draws samples. The index path draws a uniform cell index
/// directly (cell identity is all that matters under uniform sampling);
/// the point path draws a point of [0,1]^d and maps it through
/// point_to_cell, validating the discretization. Both paths must be
/// statistically indistinguishable.
enum class SamplePath { cell_index, point_map };

struct TrialConfig {
    BoundParams params{};
    std::uint64_t trials = 32;            // main-text study size
    std::uint64_t base_seed = 42;
    std::uint64_t max_samples = 1'000'000;
    unsigned jobs = 0;                    // 0 = hardware concurrency
};

struct TrialResult {
    /// Samples to full coverage; empty when the cap was hit first.
    std::optional<std::uint64_t> m_actual;
    /// Realized Z after probe_m samples (0 when no probe was requested,
    /// or when coverage completed before the probe).
    std::uint64_t z_at_probe = 0;
    bool hit_cap = false;
};

/// Draws until every cell is covered or max_samples is reached.
/// Deterministic given seed. probe_m != 0 additionally records the
/// uncovered count after exactly probe_m draws.
TrialResult simulate_until_covered(const GridSpec& grid, std::uint64_t seed,
                                   std::uint64_t max_samples,
                                   std::uint64_t probe_m = 0,
                                   SamplePath path = SamplePath::cell_index);

/// Realized Z after exactly m draws. Deterministic given seed; shares the
/// stream prefix with simulate_until_covered for the same seed.
std::uint64_t uncovered_after(const GridSpec& grid, std::uint64_t m,
                              std::uint64_t seed,
                              SamplePath path = SamplePath::cell_index);

/// Fraction of trials with Z >= 1 after m draws; trial t uses seed
/// base_seed + t.
double empirical_failure_rate(const GridSpec& grid, std::uint64_t trials,
                              std::uint64_t base_seed, std::uint64_t m,
                              unsigned jobs = 0);
double empirical_failure_rate(const TrialConfig& config, std::uint64_t m);

/// Exact P(Z >= 1) by inclusion-exclusion with compensated summation:
/// 1 - sum_j (-1)^j C(cells, j) (1 - j/cells)^m. Limited to cells <= 24;
/// beyond that the alternating sum destroys double precision. Test
/// fixture, not a production path.
double exact_coverage_failure(std::uint64_t cells, std::uint64_t m);

struct MomentEstimates {
    double mean_z = 0.0;  // sample mean of Z across trials
    double var_z = 0.0;   // unbiased sample variance of Z
    double cov_sample = 0.0; // sample covariance of (Y_0, Y_1)
};

/// Sample moments of Z over the configured trials, plus the sample
/// covariance of the uncovered indicators of cells 0 and 1.
MomentEstimates empirical_moments(const GridSpec& grid, std::uint64_t trials,
                                  std::uint64_t base_seed, std::uint64_t m,
                                  unsigned jobs = 0);
MomentEstimates empirical_moments(const TrialConfig& config, std::uint64_t m);

} // namespace gridcover
