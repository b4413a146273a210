// gridcover: sample-complexity bounds, coverage simulation, parameter
// sweeps, and sup certification on the discretized unit hypercube.
//
// Exit codes: 0 ok, 2 usage/domain error, 3 capacity (grid too large),
// 4 verification precondition. stdout carries data only; diagnostics go
// to stderr.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridcover/bounds.hpp"
#include "gridcover/montecarlo.hpp"
#include "gridcover/parallel.hpp"
#include "gridcover/sweep.hpp"
#include "gridcover/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitPrecondition = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("COVERAGE_BOUND_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
        std::cerr << "gridcover: ignoring malformed COVERAGE_BOUND_SEED\n";
    }
    return 42;
}

// 43486 -> "43,486". Human output only; machine modes never group digits.
std::string group_digits(std::uint64_t value) {
    std::string raw = std::to_string(value);
    std::string grouped;
    int count = 0;
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
        if (count != 0 && count % 3 == 0) grouped.push_back(',');
        grouped.push_back(*it);
        ++count;
    }
    return {grouped.rbegin(), grouped.rend()};
}

std::string group_digits(double value) {
    char frac[32];
    std::snprintf(frac, sizeof(frac), "%.1f", value);
    const std::string text(frac);
    const auto dot = text.find('.');
    const auto whole = static_cast<std::uint64_t>(value);
    return group_digits(whole) + text.substr(dot);
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string item =
            csv.substr(start, comma == std::string::npos ? comma : comma - start);
        if (item.empty()) throw gridcover::invalid_params("empty sweep value");
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw gridcover::invalid_params("malformed sweep value: " + item);
        values.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

struct CommonParams {
    gridcover::BoundParams params;
    void attach(CLI::App* cmd) {
        cmd->add_option("--d", params.dimension, "dimension of the unit hypercube");
        cmd->add_option("--epsilon", params.epsilon, "precision parameter");
        cmd->add_option("--delta", params.delta, "failure probability in (0,1)");
        cmd->add_option("--lipschitz", params.lipschitz, "Lipschitz constant");
    }
};

json params_json(const gridcover::BoundParams& p) {
    return {{"d", p.dimension},
            {"epsilon", p.epsilon},
            {"delta", p.delta},
            {"lipschitz", p.lipschitz}};
}

int run_bound(const gridcover::BoundParams& params, bool as_json) {
    const gridcover::GridSpec grid = gridcover::subcube_count(params);
    const gridcover::BoundSet bounds =
        gridcover::compute_bounds(grid.cells, params.delta);
    const double gain = gridcover::improvement(bounds.m_approx, bounds.m_classic);

    if (as_json) {
        json doc;
        doc["params"] = params_json(params);
        doc["grid"] = {{"k", grid.segments},
                       {"cells", grid.cells},
                       {"cell_radius", grid.cell_radius}};
        json b;
        b["m_exact"] = bounds.m_exact;
        b["m_approx"] = bounds.m_approx;
        b["m_classic"] = bounds.m_classic;
        b["improvement"] = gain;
        if (grid.cells >= 2) {
            b["q1"] = bounds.q1;
            b["q2"] = bounds.q2;
            b["discriminant"] = bounds.discriminant;
        } else {
            b["q1"] = nullptr;
            b["q2"] = nullptr;
            b["discriminant"] = nullptr;
        }
        doc["bounds"] = b;
        std::cout << doc.dump(2) << '\n';
        return kExitOk;
    }

    std::printf("cells (C)     %s   [k = %s per axis, cell radius %g]\n",
                group_digits(grid.cells).c_str(),
                group_digits(grid.segments).c_str(), grid.cell_radius);
    if (grid.cells >= 2) {
        std::printf("q1            %.9e\n", bounds.q1);
        std::printf("q2            %.9e\n", bounds.q2);
        std::printf("discriminant  %.9e\n", bounds.discriminant);
    }
    std::printf("m_exact       %s\n", group_digits(bounds.m_exact).c_str());
    std::printf("m_approx      %s\n", group_digits(bounds.m_approx).c_str());
    std::printf("m_classic     %s\n", group_digits(bounds.m_classic).c_str());
    std::printf("improvement   %.2f%%\n", 100.0 * gain);
    return kExitOk;
}

int run_simulate(const gridcover::BoundParams& params, std::uint64_t trials,
                 std::uint64_t seed, std::uint64_t max_samples,
                 std::uint64_t max_cells, std::uint64_t probe_m, unsigned jobs,
                 bool as_json) {
    if (trials < 1) throw gridcover::invalid_params("--trials must be >= 1");
    const gridcover::GridSpec grid = gridcover::subcube_count(params);
    if (grid.cells > max_cells)
        throw gridcover::overflow_error("cell count exceeds --max-cells");
    const gridcover::BoundSet bounds =
        gridcover::compute_bounds(grid.cells, params.delta);
    if (probe_m == 0) probe_m = bounds.m_exact;

    std::vector<gridcover::TrialResult> results(trials);
    gridcover::parallel_for_index(trials, jobs, [&](std::uint64_t t) {
        results[t] =
            gridcover::simulate_until_covered(grid, seed + t, max_samples, probe_m);
    });

    std::uint64_t failures = 0;
    std::uint64_t uncapped = 0;
    double sum_actual = 0.0;
    for (const auto& r : results) {
        if (r.hit_cap || r.z_at_probe >= 1) ++failures;
        if (r.m_actual) {
            ++uncapped;
            sum_actual += static_cast<double>(*r.m_actual);
        }
    }
    const double mean_actual =
        uncapped > 0 ? sum_actual / static_cast<double>(uncapped) : 0.0;
    const double mean_ratio =
        uncapped > 0 ? mean_actual / static_cast<double>(bounds.m_approx) : 0.0;
    const double failure_rate =
        static_cast<double>(failures) / static_cast<double>(trials);

    if (as_json) {
        json doc;
        doc["params"] = params_json(params);
        doc["grid"] = {{"k", grid.segments}, {"cells", grid.cells}};
        doc["bounds"] = {{"m_exact", bounds.m_exact},
                         {"m_approx", bounds.m_approx},
                         {"m_classic", bounds.m_classic}};
        doc["probe_m"] = probe_m;
        doc["seed"] = seed;
        json rows = json::array();
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto& r = results[t];
            json row;
            row["trial"] = t;
            row["m_actual"] = r.m_actual ? json(*r.m_actual) : json(nullptr);
            row["hit_cap"] = r.hit_cap;
            row["ratio"] = r.m_actual
                               ? json(static_cast<double>(*r.m_actual) /
                                      static_cast<double>(bounds.m_approx))
                               : json(nullptr);
            rows.push_back(row);
        }
        doc["trials"] = rows;
        doc["summary"] = {{"mean_m_actual", mean_actual},
                          {"mean_ratio", mean_ratio},
                          {"failure_rate", failure_rate}};
        std::cout << doc.dump(2) << '\n';
        return kExitOk;
    }

    std::printf("cells = %s, m_exact = %s, m_approx = %s, probe m = %s\n",
                group_digits(grid.cells).c_str(),
                group_digits(bounds.m_exact).c_str(),
                group_digits(bounds.m_approx).c_str(),
                group_digits(probe_m).c_str());
    std::printf("%6s  %12s  %8s\n", "trial", "m_actual", "ratio");
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto& r = results[t];
        if (r.m_actual)
            std::printf("%6" PRIu64 "  %12s  %8.3f\n", t,
                        group_digits(*r.m_actual).c_str(),
                        static_cast<double>(*r.m_actual) /
                            static_cast<double>(bounds.m_approx));
        else
            std::printf("%6" PRIu64 "  %12s  %8s\n", t, "(cap hit)", "-");
    }
    std::printf("mean m_actual  %s\n", group_digits(mean_actual).c_str());
    std::printf("mean ratio     %.4f\n", mean_ratio);
    std::printf("failure rate   %.4f at probe m = %s\n", failure_rate,
                group_digits(probe_m).c_str());
    return kExitOk;
}

int run_sweep_cmd(const gridcover::SweepPlan& plan, const std::string& out_path,
                  const std::string& format) {
    const gridcover::SweepReport report = gridcover::run_sweep(plan);

    for (const gridcover::SweepPoint& point : report.points)
        if (point.skipped)
            std::cerr << "gridcover: skipped simulation at " << to_string(plan.vary)
                      << " = " << point.sweep_value << " ("
                      << (point.overflowed ? "cell count overflows"
                                           : "cell count exceeds --max-cells")
                      << "); bounds still reported\n";

    const bool to_file = !out_path.empty();
    if (format == "csv") {
        if (to_file)
            gridcover::emit_csv(report, std::filesystem::path(out_path));
        else
            gridcover::emit_csv(report, std::cout);
    } else if (format == "json") {
        if (to_file)
            gridcover::emit_json(report, std::filesystem::path(out_path));
        else
            gridcover::emit_json(report, std::cout);
    } else {
        throw gridcover::invalid_params("unknown format: " + format);
    }

    char summary[160];
    std::snprintf(summary, sizeof(summary),
                  "grand mean ratio %.4f, improvement min %.4f max %.4f\n",
                  report.summary.grand_mean_ratio, report.summary.min_improvement,
                  report.summary.max_improvement);
    // Keep stdout pipe-safe when it already carries the report body.
    if (to_file)
        std::cout << summary;
    else
        std::cerr << summary;
    return kExitOk;
}

int run_verify(const std::string& function_name,
               const gridcover::BoundParams& params, std::uint64_t seed,
               unsigned jobs, bool as_json) {
    const gridcover::TargetFunction f =
        gridcover::builtin_function(function_name, params.dimension);
    const gridcover::Certificate cert =
        gridcover::certify_sup(f, params, seed, jobs);

    if (as_json) {
        std::cout << gridcover::certificate_json(cert) << '\n';
        return kExitOk;
    }
    std::printf("function             %s\n", cert.function.c_str());
    std::printf("m_used               %s\n", group_digits(cert.m_used).c_str());
    std::printf("sampled max          %.12g\n", cert.sampled_max);
    std::printf("certified sup bound  %.12g\n", cert.certified_sup_bound);
    std::printf("confidence           %g\n", cert.confidence);
    std::printf("seed                 %" PRIu64 "\n", cert.seed);
    return kExitOk;
}

int run_oracle(std::uint64_t cells, std::uint64_t samples) {
    std::printf("%.12f\n", gridcover::exact_coverage_failure(cells, samples));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-coverage sample complexity toolkit"};
    app.require_subcommand(1);

    const std::uint64_t seed_default = default_seed();

    // bound
    auto* bound = app.add_subcommand("bound", "closed-form sample bounds");
    CommonParams bound_params;
    bound_params.attach(bound);
    bool bound_json = false;
    bound->add_flag("--json", bound_json, "emit JSON instead of a table");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "seeded coverage trials");
    CommonParams sim_params;
    sim_params.attach(simulate);
    std::uint64_t sim_trials = 32;
    std::uint64_t sim_seed = seed_default;
    std::uint64_t sim_max_samples = 1'000'000;
    std::uint64_t sim_max_cells = 100'000'000;
    std::uint64_t sim_probe = 0;
    unsigned sim_jobs = 0;
    bool sim_json = false;
    simulate->add_option("--trials", sim_trials, "independent trials");
    simulate->add_option("--seed", sim_seed, "base seed (trial t adds t)");
    simulate->add_option("--max-samples", sim_max_samples, "per-trial draw cap");
    simulate->add_option("--max-cells", sim_max_cells, "simulation size cap");
    simulate->add_option("--probe-m", sim_probe,
                         "sample count probed for failures (default m_exact)");
    simulate->add_option("--jobs", sim_jobs, "worker threads (0 = all cores)");
    simulate->add_flag("--json", sim_json, "emit JSON instead of a table");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "parameter study with reports");
    CommonParams sweep_params;
    sweep_params.attach(sweep);
    std::string sweep_vary = "dimension";
    std::string sweep_values = "1,2,3";
    std::string sweep_out;
    std::string sweep_format = "csv";
    std::uint64_t sweep_trials = 32;
    std::uint64_t sweep_seed = seed_default;
    std::uint64_t sweep_max_cells = 100'000'000;
    std::uint64_t sweep_max_samples = 1'000'000;
    unsigned sweep_jobs = 0;
    sweep->add_option("--vary", sweep_vary, "dimension | epsilon | delta");
    sweep->add_option("--values", sweep_values, "comma-separated sweep values");
    sweep->add_option("--trials", sweep_trials, "trials per sweep value");
    sweep->add_option("--seed", sweep_seed, "base seed");
    sweep->add_option("--out", sweep_out, "report file (default stdout)");
    sweep->add_option("--format", sweep_format, "csv | json");
    sweep->add_option("--max-cells", sweep_max_cells, "skip larger grids");
    sweep->add_option("--max-samples", sweep_max_samples, "per-trial draw cap");
    sweep->add_option("--jobs", sweep_jobs, "worker threads (0 = all cores)");

    // verify
    auto* verify = app.add_subcommand("verify", "certify a Lipschitz sup bound");
    CommonParams verify_params;
    verify_params.attach(verify);
    std::string verify_function;
    std::uint64_t verify_seed = seed_default;
    unsigned verify_jobs = 0;
    bool verify_json = false;
    verify->add_option("--function", verify_function, "builtin function name")
        ->required();
    verify->add_option("--seed", verify_seed, "sampling seed");
    verify->add_option("--jobs", verify_jobs, "worker threads (0 = all cores)");
    verify->add_flag("--json", verify_json, "emit the certificate as JSON");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact coverage failure probability");
    std::uint64_t oracle_cells = 0;
    std::uint64_t oracle_samples = 0;
    oracle->add_option("--cells", oracle_cells, "cell count (<= 24)")->required();
    oracle->add_option("--samples", oracle_samples, "sample count")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bound->parsed()) return run_bound(bound_params.params, bound_json);
        if (simulate->parsed())
            return run_simulate(sim_params.params, sim_trials, sim_seed,
                                sim_max_samples, sim_max_cells, sim_probe,
                                sim_jobs, sim_json);
        if (sweep->parsed()) {
            gridcover::SweepPlan plan;
            plan.vary = gridcover::sweep_param_from_string(sweep_vary);
            plan.values = parse_values(sweep_values);
            plan.benchmark = sweep_params.params;
            plan.trials = sweep_trials;
            plan.base_seed = sweep_seed;
            plan.max_cells = sweep_max_cells;
            plan.max_samples = sweep_max_samples;
            plan.jobs = sweep_jobs;
            return run_sweep_cmd(plan, sweep_out, sweep_format);
        }
        if (verify->parsed())
            return run_verify(verify_function, verify_params.params, verify_seed,
                              verify_jobs, verify_json);
        if (oracle->parsed()) return run_oracle(oracle_cells, oracle_samples);
    } catch (const gridcover::lipschitz_mismatch& e) {
        std::cerr << "gridcover: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const gridcover::overflow_error& e) {
        std::cerr << "gridcover: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const gridcover::invalid_params& e) {
        std::cerr << "gridcover: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "gridcover: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}
