#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridcover/bounds.hpp"

namespace gridcover {

/// Which benchmark parameter a sweep varies; all others stay fixed.
enum class SweepParam { dimension, epsilon, delta };

const char* to_string(SweepParam param);
SweepParam sweep_param_from_string(std::string_view name);

struct SweepPlan {
    SweepParam vary = SweepParam::dimension;
    std::vector<double> values;       // dimension values must be integral
    BoundParams benchmark{};          // d=2, eps=0.1, delta=0.1, L=1
    std::uint64_t trials = 32;
    std::uint64_t base_seed = 42;
    std::uint64_t max_cells = 100'000'000;   // occupancy cap for simulation
    std::uint64_t max_samples = 1'000'000;
    unsigned jobs = 0;
};

/// One simulated trial at one sweep point.
struct SweepTrial {
    std::uint64_t trial = 0;
    std::optional<std::uint64_t> m_actual; // empty when the cap was hit
    bool hit_cap = false;
    double ratio = 0.0;       // m_actual / m_approx, NaN when capped
    bool failed_at_probe = false; // coverage not reached by m_exact draws
};

/// One sweep value: parameters, bounds, per-trial results, aggregates.
struct SweepPoint {
    double sweep_value = 0.0;
    BoundParams params{};
    std::uint64_t cells = 0;
    std::uint64_t m_exact = 0;
    std::uint64_t m_approx = 0;
    std::uint64_t m_classic = 0;
    double improvement = 0.0;
    bool overflowed = false;  // k^d beyond 2^63: no bounds, no simulation
    bool skipped = false;     // cells > max_cells: bounds only
    std::vector<SweepTrial> trials;
    double mean_m_actual = 0.0;  // over uncapped trials, NaN if none
    double mean_ratio = 0.0;     // over uncapped trials, NaN if none
    double failure_rate = 0.0;   // fraction failed at the m_exact probe
};

struct SweepSummary {
    double grand_mean_ratio = 0.0;  // mean of point mean ratios
    double min_improvement = 0.0;
    double max_improvement = 0.0;
};

struct SweepReport {
    SweepPlan plan;
    std::vector<SweepPoint> points;
    SweepSummary summary;
};

/// Runs the plan: per value, derive the grid, compute the bound set, run
/// `trials` seeded simulations to full coverage (probing Z at m_exact),
/// and aggregate. Points whose cell count exceeds max_cells are recorded
/// with bounds only (skipped, not fatal). Deterministic given base_seed:
/// trial t of point p uses seed base_seed + p*trials + t.
SweepReport run_sweep(const SweepPlan& plan);

/*
CSV layout, one detail row per (sweep value, trial) followed by one
aggregate row per value with trial = -1. Columns, in order:

  sweep_param, sweep_value, d, epsilon, delta, lipschitz, cells,
  m_exact, m_approx, m_classic, trial, m_actual, hit_cap,
  ratio_actual_over_approx, improvement, empirical_failure_rate

Floats are rendered with 9 significant digits, booleans as 0/1, absent
values (capped m_actual, skipped-point aggregates) as empty fields. In
aggregate rows m_actual is the mean over uncapped trials, hit_cap is 1
when any trial capped, and empirical_failure_rate is the failed fraction.
*/
void emit_csv(const SweepReport& report, std::ostream& out);
void emit_csv(const SweepReport& report, const std::filesystem::path& destination);
std::string to_csv(const SweepReport& report);

/// JSON document { "plan": {...}, "records": [...], "summary": {...} }
/// with one record per CSV row (aggregates flagged by trial = -1).
void emit_json(const SweepReport& report, std::ostream& out);
void emit_json(const SweepReport& report, const std::filesystem::path& destination);
std::string to_json(const SweepReport& report);

/// The three preconfigured supplementary studies:
///   1. d in {2,3,4}           at eps=0.2, delta=0.05
///   2. eps in [0.03, 0.3]     at d=3, delta=0.05 (10 equispaced values)
///   3. delta in {0.01..0.10}  at d=3, eps=0.2
std::array<SweepPlan, 3> supplement_sweeps();

} // namespace gridcover
