#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "gridcover/rng.hpp"
#include "gridcover/verify.hpp"

using namespace gridcover;

TEST_CASE("certify_sup on a constant function") {
    const BoundParams params{2, 0.2, 0.1, 1.0};
    const Certificate cert = certify_sup(make_constant(0.5), params, 11);
    CHECK(cert.sampled_max == 0.5);
    CHECK(cert.certified_sup_bound == 0.5 + 0.1); // c + eps/2 >= true sup
    CHECK(cert.confidence == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(cert.m_used == 1893); // m_approx(225, 0.1)
}

TEST_CASE("certificate bookkeeping is exact") {
    const BoundParams params{2, 0.13, 0.07, 1.5};
    const Certificate cert =
        certify_sup(builtin_function("negdist", 2), params, 90210);
    CHECK(cert.certified_sup_bound - cert.sampled_max == params.epsilon / 2.0);
    CHECK(cert.confidence == 1.0 - params.delta / 2.0);
    CHECK(cert.seed == 90210);
}

TEST_CASE("m_used matches the approx bound (affine example)") {
    const BoundParams params{1, 0.2, 0.1, 2.0};
    const Certificate cert = certify_sup(make_affine(2.0, 0.0), params, 5);
    CHECK(cert.m_used == 120); // ceil(20 * ln 400)
}

TEST_CASE("failure rate of the 1-x certificate matches the closed form") {
    // f(x) = 1 - x on [0,1], eps=0.2, delta=0.1, L=1: k=10, M=53.
    // The certificate misses the sup iff no sample lands in [0, 0.1),
    // probability 0.9^53 = 0.003757; 1e4 seeds pin the rate to ~4 sigma.
    const BoundParams params{1, 0.2, 0.1, 1.0};
    const TargetFunction f = make_affine(-1.0, 1.0);
    std::uint64_t misses = 0;
    const std::uint64_t runs = 10'000;
    for (std::uint64_t s = 0; s < runs; ++s) {
        const Certificate cert = certify_sup(f, params, 1'000'000 + s, 1);
        CHECK(cert.m_used == 53);
        if (cert.certified_sup_bound < 1.0) ++misses;
    }
    const double rate = static_cast<double>(misses) / static_cast<double>(runs);
    CHECK(rate >= 0.0013);
    CHECK(rate <= 0.0062);
    CHECK(rate <= 0.05); // well under delta/2
}

TEST_CASE("negdist certificates stay above the known sup") {
    const BoundParams params{2, 0.1, 0.1, 1.0};
    const TargetFunction f = builtin_function("negdist", 2);
    for (std::uint64_t s = 0; s < 300; ++s) {
        const Certificate cert = certify_sup(f, params, 7'000'000 + s);
        CHECK(cert.certified_sup_bound >= 0.0);
    }
}

TEST_CASE("m_used never decreases when delta or epsilon shrink") {
    const TargetFunction f = builtin_function("negdist", 2);
    std::uint64_t previous = 0;
    for (const double delta : {0.5, 0.2, 0.1, 0.01, 1e-3}) {
        const Certificate cert = certify_sup(f, {2, 0.2, delta, 1.0}, 3);
        CHECK(cert.m_used >= previous);
        previous = cert.m_used;
    }
    previous = 0;
    for (const double eps : {0.8, 0.4, 0.2, 0.1}) {
        const Certificate cert = certify_sup(f, {2, eps, 0.1, 1.0}, 3);
        CHECK(cert.m_used >= previous);
        previous = cert.m_used;
    }
}

TEST_CASE("builtin registry: names, constants, spot-checked Lipschitz bound") {
    const std::vector<TargetFunction> registry = builtin_functions(3);
    REQUIRE(registry.size() >= 3);
    CHECK(registry[0].name == "constant");
    CHECK(registry[1].name == "affine");
    CHECK(registry[1].declared_lipschitz == 2.0);
    CHECK(registry[2].name == "negdist");
    CHECK(registry[2].known_sup == 0.0);
    CHECK(registry[3].name == "sinprod");
    CHECK(registry[3].known_sup ==
          doctest::Approx(0.183776298473931).epsilon(1e-12));

    // |f(x) - f(y)| <= L * |x - y| for a thousand random pairs each.
    SplitMix64 rng(64);
    for (const TargetFunction& f : registry) {
        for (int pair = 0; pair < 1000; ++pair) {
            std::vector<double> x(3), y(3);
            for (int i = 0; i < 3; ++i) {
                x[i] = rng.next_unit();
                y[i] = rng.next_unit();
            }
            double dist_sq = 0.0;
            for (int i = 0; i < 3; ++i) dist_sq += (x[i] - y[i]) * (x[i] - y[i]);
            const double bound =
                f.declared_lipschitz * std::sqrt(dist_sq) + 1e-9;
            CHECK(std::abs(f.evaluator(x) - f.evaluator(y)) <= bound);
        }
    }

    CHECK_THROWS_AS(builtin_function("bogus", 2), invalid_params);
}

TEST_CASE("sinprod certificate covers its dimension-dependent sup") {
    for (const int d : {1, 2, 3}) {
        const TargetFunction f = builtin_function("sinprod", d);
        const Certificate cert = certify_sup(f, {d, 0.2, 0.1, 1.0}, 17);
        CHECK(cert.certified_sup_bound >= f.known_sup);
    }
}

TEST_CASE("lipschitz mismatch and evaluation failures are typed errors") {
    const BoundParams weak{2, 0.2, 0.1, 1.0};
    CHECK_THROWS_AS(certify_sup(make_affine(2.0, 0.0), weak, 1),
                    lipschitz_mismatch);

    TargetFunction bad;
    bad.name = "nan_everywhere";
    bad.declared_lipschitz = 1.0;
    bad.evaluator = [](std::span<const double>) { return std::nan(""); };
    CHECK_THROWS_AS(certify_sup(bad, weak, 1), evaluation_error);
}

TEST_CASE("certificates are deterministic across job counts") {
    const BoundParams params{2, 0.1, 0.05, 1.0};
    const TargetFunction f = builtin_function("sinprod", 2);
    const Certificate serial = certify_sup(f, params, 1312, 1);
    const Certificate parallel = certify_sup(f, params, 1312, 8);
    CHECK(serial.sampled_max == parallel.sampled_max);
    CHECK(serial.m_used == parallel.m_used);

    // A function declared serial is evaluated on one worker but certifies
    // the same numbers.
    TargetFunction stateful = f;
    stateful.concurrent_safe = false;
    const Certificate guarded = certify_sup(stateful, params, 1312, 8);
    CHECK(guarded.sampled_max == serial.sampled_max);
}

TEST_CASE("certificate JSON carries the stable schema") {
    const Certificate cert =
        certify_sup(make_constant(0.25), {2, 0.2, 0.1, 1.0}, 8);
    const nlohmann::json doc = nlohmann::json::parse(certificate_json(cert));
    CHECK(doc["function"] == "constant");
    CHECK(doc["params"]["d"] == 2);
    CHECK(doc["params"]["epsilon"].get<double>() == 0.2);
    CHECK(doc["m_used"].get<std::uint64_t>() == cert.m_used);
    CHECK(doc["sampled_max"].get<double>() == 0.25);
    CHECK(doc["certified_sup_bound"].get<double>() == cert.certified_sup_bound);
    CHECK(doc["confidence"].get<double>() == 0.95);
    CHECK(doc["seed"].get<std::uint64_t>() == 8);
}
