#include "gridcover/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gridcover/montecarlo.hpp"
#include "gridcover/parallel.hpp"

namespace gridcover {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

BoundParams apply_sweep_value(const BoundParams& benchmark, SweepParam vary,
                              double value) {
    BoundParams p = benchmark;
    switch (vary) {
        case SweepParam::dimension: {
            const double rounded = std::nearbyint(value);
            if (!(std::abs(value - rounded) < 1e-9) || rounded < 1.0)
                throw invalid_params("dimension sweep values must be positive integers");
            p.dimension = static_cast<int>(rounded);
            break;
        }
        case SweepParam::epsilon:
            p.epsilon = value;
            break;
        case SweepParam::delta:
            p.delta = value;
            break;
    }
    p.validate();
    return p;
}

void aggregate_point(SweepPoint& point) {
    std::uint64_t uncapped = 0;
    std::uint64_t failed = 0;
    double sum_actual = 0.0;
    double sum_ratio = 0.0;
    for (const SweepTrial& t : point.trials) {
        if (t.failed_at_probe) ++failed;
        if (t.hit_cap) continue;
        ++uncapped;
        sum_actual += static_cast<double>(*t.m_actual);
        sum_ratio += t.ratio;
    }
    if (uncapped > 0) {
        point.mean_m_actual = sum_actual / static_cast<double>(uncapped);
        point.mean_ratio = sum_ratio / static_cast<double>(uncapped);
    } else {
        point.mean_m_actual = kNaN;
        point.mean_ratio = kNaN;
    }
    point.failure_rate = point.trials.empty()
                             ? kNaN
                             : static_cast<double>(failed) /
                                   static_cast<double>(point.trials.size());
}

} // namespace

const char* to_string(SweepParam param) {
    switch (param) {
        case SweepParam::dimension: return "dimension";
        case SweepParam::epsilon: return "epsilon";
        case SweepParam::delta: return "delta";
    }
    return "unknown";
}

SweepParam sweep_param_from_string(std::string_view name) {
    if (name == "dimension" || name == "d") return SweepParam::dimension;
    if (name == "epsilon" || name == "eps") return SweepParam::epsilon;
    if (name == "delta") return SweepParam::delta;
    throw invalid_params("unknown sweep parameter: " + std::string(name));
}

SweepReport run_sweep(const SweepPlan& plan) {
    if (plan.values.empty()) throw invalid_params("sweep plan has no values");
    if (plan.trials < 1) throw invalid_params("sweep plan needs trials >= 1");
    plan.benchmark.validate();

    SweepReport report;
    report.plan = plan;
    report.points.resize(plan.values.size());

    for (std::size_t p = 0; p < plan.values.size(); ++p) {
        SweepPoint& point = report.points[p];
        point.sweep_value = plan.values[p];
        point.params = apply_sweep_value(plan.benchmark, plan.vary, plan.values[p]);

        GridSpec grid;
        try {
            grid = subcube_count(point.params);
        } catch (const overflow_error&) {
            point.overflowed = true;
            point.skipped = true;
            point.improvement = kNaN;
            point.mean_m_actual = kNaN;
            point.mean_ratio = kNaN;
            point.failure_rate = kNaN;
            continue;
        }

        point.cells = grid.cells;
        const BoundSet bounds = compute_bounds(grid.cells, point.params.delta);
        point.m_exact = bounds.m_exact;
        point.m_approx = bounds.m_approx;
        point.m_classic = bounds.m_classic;
        point.improvement = improvement(bounds.m_approx, bounds.m_classic);

        if (grid.cells > plan.max_cells) {
            point.skipped = true;
            point.mean_m_actual = kNaN;
            point.mean_ratio = kNaN;
            point.failure_rate = kNaN;
            continue;
        }

        point.trials.resize(plan.trials);
        const std::uint64_t point_seed_base =
            plan.base_seed + static_cast<std::uint64_t>(p) * plan.trials;
        parallel_for_index(plan.trials, plan.jobs, [&](std::uint64_t t) {
            const TrialResult r = simulate_until_covered(
                grid, point_seed_base + t, plan.max_samples, point.m_exact);
            SweepTrial& row = point.trials[t];
            row.trial = t;
            row.hit_cap = r.hit_cap;
            row.m_actual = r.m_actual;
            row.ratio = r.m_actual ? static_cast<double>(*r.m_actual) /
                                         static_cast<double>(point.m_approx)
                                   : kNaN;
            row.failed_at_probe =
                r.hit_cap ? true : (*r.m_actual > point.m_exact);
        });
        aggregate_point(point);
    }

    double ratio_sum = 0.0;
    std::size_t ratio_points = 0;
    double min_improvement = std::numeric_limits<double>::infinity();
    double max_improvement = -std::numeric_limits<double>::infinity();
    for (const SweepPoint& point : report.points) {
        if (!point.overflowed) {
            min_improvement = std::min(min_improvement, point.improvement);
            max_improvement = std::max(max_improvement, point.improvement);
        }
        if (!point.skipped && std::isfinite(point.mean_ratio)) {
            ratio_sum += point.mean_ratio;
            ++ratio_points;
        }
    }
    report.summary.grand_mean_ratio =
        ratio_points > 0 ? ratio_sum / static_cast<double>(ratio_points) : kNaN;
    report.summary.min_improvement =
        std::isfinite(min_improvement) ? min_improvement : kNaN;
    report.summary.max_improvement =
        std::isfinite(max_improvement) ? max_improvement : kNaN;
    return report;
}

namespace {

struct Row {
    const SweepReport* report;
    const SweepPoint* point;
    const SweepTrial* trial; // null for the aggregate row
};

void write_csv_row(std::ostream& out, const Row& row) {
    const SweepPoint& p = *row.point;
    out << to_string(row.report->plan.vary) << ',' << format_float(p.sweep_value)
        << ',' << p.params.dimension << ',' << format_float(p.params.epsilon)
        << ',' << format_float(p.params.delta) << ','
        << format_float(p.params.lipschitz) << ',' << p.cells << ','
        << p.m_exact << ',' << p.m_approx << ',' << p.m_classic << ',';
    if (row.trial != nullptr) {
        const SweepTrial& t = *row.trial;
        out << t.trial << ',';
        if (t.m_actual) out << *t.m_actual;
        out << ',' << (t.hit_cap ? 1 : 0) << ',';
        if (t.m_actual) out << format_float(t.ratio);
        out << ',' << format_float(p.improvement) << ','
            << (t.failed_at_probe ? 1 : 0);
    } else {
        out << -1 << ',';
        if (std::isfinite(p.mean_m_actual)) out << format_float(p.mean_m_actual);
        bool any_cap = false;
        for (const SweepTrial& t : p.trials) any_cap = any_cap || t.hit_cap;
        out << ',' << (any_cap ? 1 : 0) << ',';
        if (std::isfinite(p.mean_ratio)) out << format_float(p.mean_ratio);
        out << ',';
        if (std::isfinite(p.improvement)) out << format_float(p.improvement);
        out << ',';
        if (std::isfinite(p.failure_rate)) out << format_float(p.failure_rate);
    }
    out << '\n';
}

} // namespace

void emit_csv(const SweepReport& report, std::ostream& out) {
    out << "sweep_param,sweep_value,d,epsilon,delta,lipschitz,cells,"
           "m_exact,m_approx,m_classic,trial,m_actual,hit_cap,"
           "ratio_actual_over_approx,improvement,empirical_failure_rate\n";
    for (const SweepPoint& point : report.points) {
        for (const SweepTrial& trial : point.trials)
            write_csv_row(out, Row{&report, &point, &trial});
        write_csv_row(out, Row{&report, &point, nullptr});
    }
    if (!out) throw io_error("failed while writing CSV report");
}

void emit_csv(const SweepReport& report, const std::filesystem::path& destination) {
    std::ofstream out(destination);
    if (!out) throw io_error("cannot open " + destination.string());
    emit_csv(report, out);
}

std::string to_csv(const SweepReport& report) {
    std::ostringstream out;
    emit_csv(report, out);
    return out.str();
}

namespace {

using nlohmann::json;

json json_number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

json record_json(const SweepReport& report, const SweepPoint& p,
                 const SweepTrial* t) {
    json r;
    r["sweep_param"] = to_string(report.plan.vary);
    r["sweep_value"] = p.sweep_value;
    r["d"] = p.params.dimension;
    r["epsilon"] = p.params.epsilon;
    r["delta"] = p.params.delta;
    r["lipschitz"] = p.params.lipschitz;
    r["cells"] = p.cells;
    r["m_exact"] = p.m_exact;
    r["m_approx"] = p.m_approx;
    r["m_classic"] = p.m_classic;
    if (t != nullptr) {
        r["trial"] = static_cast<std::int64_t>(t->trial);
        r["m_actual"] = t->m_actual ? json(*t->m_actual) : json(nullptr);
        r["hit_cap"] = t->hit_cap;
        r["ratio_actual_over_approx"] =
            t->m_actual ? json(t->ratio) : json(nullptr);
        r["improvement"] = json_number_or_null(p.improvement);
        r["empirical_failure_rate"] = t->failed_at_probe ? 1.0 : 0.0;
    } else {
        r["trial"] = -1;
        r["m_actual"] = json_number_or_null(p.mean_m_actual);
        bool any_cap = false;
        for (const SweepTrial& trial : p.trials) any_cap = any_cap || trial.hit_cap;
        r["hit_cap"] = any_cap;
        r["ratio_actual_over_approx"] = json_number_or_null(p.mean_ratio);
        r["improvement"] = json_number_or_null(p.improvement);
        r["empirical_failure_rate"] = json_number_or_null(p.failure_rate);
    }
    return r;
}

} // namespace

std::string to_json(const SweepReport& report) {
    json doc;
    json plan;
    plan["vary"] = to_string(report.plan.vary);
    plan["values"] = report.plan.values;
    plan["benchmark"] = {{"d", report.plan.benchmark.dimension},
                         {"epsilon", report.plan.benchmark.epsilon},
                         {"delta", report.plan.benchmark.delta},
                         {"lipschitz", report.plan.benchmark.lipschitz}};
    plan["trials"] = report.plan.trials;
    plan["base_seed"] = report.plan.base_seed;
    plan["max_cells"] = report.plan.max_cells;
    plan["max_samples"] = report.plan.max_samples;
    doc["plan"] = plan;

    json records = json::array();
    for (const SweepPoint& point : report.points) {
        for (const SweepTrial& trial : point.trials)
            records.push_back(record_json(report, point, &trial));
        records.push_back(record_json(report, point, nullptr));
    }
    doc["records"] = records;

    doc["summary"] = {
        {"grand_mean_ratio", json_number_or_null(report.summary.grand_mean_ratio)},
        {"min_improvement", json_number_or_null(report.summary.min_improvement)},
        {"max_improvement", json_number_or_null(report.summary.max_improvement)}};
    return doc.dump(2);
}

void emit_json(const SweepReport& report, std::ostream& out) {
    out << to_json(report) << '\n';
    if (!out) throw io_error("failed while writing JSON report");
}

void emit_json(const SweepReport& report, const std::filesystem::path& destination) {
    std::ofstream out(destination);
    if (!out) throw io_error("cannot open " + destination.string());
    emit_json(report, out);
}

std::array<SweepPlan, 3> supplement_sweeps() {
    // Shared knobs: 20 repeats, generous sample cap so the largest grids
    // (d=4 at eps=0.2 and eps=0.03 at d=3) reach full coverage.
    SweepPlan dimension_plan;
    dimension_plan.vary = SweepParam::dimension;
    dimension_plan.values = {2.0, 3.0, 4.0};
    dimension_plan.benchmark = BoundParams{2, 0.2, 0.05, 1.0};
    dimension_plan.trials = 20;
    dimension_plan.max_samples = 100'000'000;

    SweepPlan epsilon_plan;
    epsilon_plan.vary = SweepParam::epsilon;
    epsilon_plan.values.resize(10);
    for (int i = 0; i < 10; ++i)
        epsilon_plan.values[i] = 0.03 + 0.03 * static_cast<double>(i);
    epsilon_plan.benchmark = BoundParams{3, 0.2, 0.05, 1.0};
    epsilon_plan.trials = 20;
    epsilon_plan.max_cells = 10'000'000;
    epsilon_plan.max_samples = 100'000'000;

    SweepPlan delta_plan;
    delta_plan.vary = SweepParam::delta;
    delta_plan.values.resize(10);
    for (int i = 0; i < 10; ++i)
        delta_plan.values[i] = 0.01 * static_cast<double>(i + 1);
    delta_plan.benchmark = BoundParams{3, 0.2, 0.05, 1.0};
    delta_plan.trials = 20;
    delta_plan.max_samples = 100'000'000;

    return {dimension_plan, epsilon_plan, delta_plan};
}

} // namespace gridcover
