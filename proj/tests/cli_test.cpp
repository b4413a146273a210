#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

#ifndef GRIDCOVER_CLI_PATH
#define GRIDCOVER_CLI_PATH "gridcover"
#endif

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string stdout_text;
};

CommandResult run_cli(const std::string& args) {
    const std::string command =
        std::string(GRIDCOVER_CLI_PATH) + " " + args + " 2>/dev/null";
    CommandResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.stdout_text.append(buffer.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

} // namespace

TEST_CASE("bound --json reproduces the headline study") {
    const CommandResult r =
        run_cli("bound --d 2 --epsilon 0.05 --delta 0.01 --lipschitz 1 --json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.stdout_text);
    CHECK(doc["grid"]["cells"] == 3249);
    CHECK(doc["grid"]["k"] == 57);
    CHECK(doc["bounds"]["m_approx"] == 43486);
    CHECK(doc["bounds"]["m_classic"] == 2852379);
    const double improvement = doc["bounds"]["improvement"].get<double>();
    CHECK(improvement > 0.984);
    CHECK(improvement < 0.986);
}

TEST_CASE("bound human output groups digits") {
    const CommandResult r =
        run_cli("bound --d 2 --epsilon 0.05 --delta 0.01 --lipschitz 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("43,486") != std::string::npos);
    CHECK(r.stdout_text.find("2,852,379") != std::string::npos);
    CHECK(r.stdout_text.find("3,249") != std::string::npos);
}

TEST_CASE("bound on the degenerate grid") {
    const CommandResult r =
        run_cli("bound --d 1 --epsilon 2 --delta 0.5 --lipschitz 1 --json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.stdout_text);
    CHECK(doc["grid"]["cells"] == 1);
    CHECK(doc["bounds"]["m_exact"] == 1);
    CHECK(doc["bounds"]["m_classic"] == 1);
    // sample_bound_approx keeps its formula on the degenerate grid:
    // max(1, ceil(ln(2/delta))) = 2 at delta = 0.5.
    CHECK(doc["bounds"]["m_approx"] == 2);
    CHECK(doc["bounds"]["q1"].is_null());
}

TEST_CASE("exit codes: usage, capacity, precondition") {
    CHECK(run_cli("bound --d 0").exit_code == 2);
    CHECK(run_cli("bound --delta 1.5").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("bound --d 40 --epsilon 0.001").exit_code == 3);
    CHECK(run_cli("simulate --d 3 --epsilon 0.001 --trials 1").exit_code == 3);
    CHECK(run_cli("verify --function bogus").exit_code == 2);
    CHECK(run_cli("verify --function affine --lipschitz 1").exit_code == 4);
    CHECK(run_cli("oracle --cells 30 --samples 5").exit_code == 2);
}

TEST_CASE("oracle prints exact probabilities with 12 digits") {
    CHECK(run_cli("oracle --cells 2 --samples 2").stdout_text == "0.500000000000\n");
    CHECK(run_cli("oracle --cells 3 --samples 3").stdout_text == "0.777777777778\n");
    CHECK(run_cli("oracle --cells 2 --samples 1").stdout_text == "1.000000000000\n");
}

TEST_CASE("simulate on the degenerate grid covers in one draw") {
    const CommandResult r =
        run_cli("simulate --d 1 --epsilon 2 --trials 5 --seed 9 --json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.stdout_text);
    REQUIRE(doc["trials"].size() == 5);
    for (const auto& row : doc["trials"]) CHECK(row["m_actual"] == 1);
    CHECK(doc["summary"]["failure_rate"].get<double>() == 0.0);
}

TEST_CASE("simulate defaults land in the benchmark ratio window") {
    const CommandResult r = run_cli("simulate --json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.stdout_text);
    CHECK(doc["grid"]["cells"] == 841);
    CHECK(doc["seed"] == 42);
    CHECK(doc["trials"].size() == 32);
    const double mean_ratio = doc["summary"]["mean_ratio"].get<double>();
    CHECK(mean_ratio > 0.6);
    CHECK(mean_ratio < 0.9);
    CHECK(doc["summary"]["failure_rate"].get<double>() <= 0.1);
}

TEST_CASE("machine output is byte-identical across runs") {
    const std::string args = "simulate --trials 6 --seed 1234 --json";
    CHECK(run_cli(args).stdout_text == run_cli(args).stdout_text);

    const std::string sweep_args =
        "sweep --vary epsilon --values 0.4,0.5 --trials 3 --seed 77 --format csv";
    CHECK(run_cli(sweep_args).stdout_text == run_cli(sweep_args).stdout_text);
}

TEST_CASE("COVERAGE_BOUND_SEED overrides the default seed") {
    const CommandResult r = run_cli(
        "simulate --d 1 --epsilon 0.4 --trials 2 --json");
    const std::string env_prefix = "COVERAGE_BOUND_SEED=977 ";
    const std::string command = env_prefix + std::string(GRIDCOVER_CLI_PATH) +
                                " simulate --d 1 --epsilon 0.4 --trials 2 --json"
                                " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string with_env;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        with_env.append(buffer.data(), n);
    pclose(pipe);

    const nlohmann::json doc = nlohmann::json::parse(with_env);
    CHECK(doc["seed"] == 977);
    CHECK(nlohmann::json::parse(r.stdout_text)["seed"] == 42);
}

TEST_CASE("sweep writes a parseable file and prints the summary line") {
    const std::string out = "/tmp/gridcover_cli_sweep_test.csv";
    const CommandResult r = run_cli(
        "sweep --vary epsilon --values 0.5 --trials 2 --seed 5 --out " + out);
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("grand mean ratio") != std::string::npos);

    FILE* f = fopen(out.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string contents;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), f)) > 0)
        contents.append(buffer.data(), n);
    fclose(f);
    std::remove(out.c_str());

    CHECK(contents.rfind("sweep_param,", 0) == 0);
    // 1 header + 2 detail rows + 1 aggregate row.
    std::size_t lines = 0;
    for (const char c : contents) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 4);
}

TEST_CASE("sweep points beyond the cell cap are skipped, not fatal") {
    const CommandResult r = run_cli(
        "sweep --vary dimension --values 1,3 --trials 2 --seed 4 "
        "--max-cells 1000 --format csv");
    REQUIRE(r.exit_code == 0);
    // d=1 (20 cells) simulated; d=3 (42875 cells) bounds-only aggregate.
    CHECK(r.stdout_text.find("dimension,3,3") != std::string::npos);
    CHECK(r.stdout_text.find("585749") != std::string::npos);
}

TEST_CASE("sweep json mode round-trips through a generic parser") {
    const CommandResult r = run_cli(
        "sweep --vary delta --values 0.1,0.2 --trials 2 --seed 3 --format json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.stdout_text);
    CHECK(doc["plan"]["vary"] == "delta");
    CHECK(doc["records"].size() == 2 * 2 + 2);
    CHECK(doc["summary"].contains("grand_mean_ratio"));
}

TEST_CASE("verify subcommand emits the certificate") {
    const CommandResult r = run_cli(
        "verify --function affine --d 1 --epsilon 0.2 --delta 0.1 "
        "--lipschitz 2 --seed 5 --json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.stdout_text);
    CHECK(doc["function"] == "affine");
    CHECK(doc["m_used"] == 120);
    CHECK(doc["confidence"].get<double>() == 0.95);
    const double bound = doc["certified_sup_bound"].get<double>();
    CHECK(bound == doc["sampled_max"].get<double>() + 0.1);
}
