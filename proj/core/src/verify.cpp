#include "gridcover/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "gridcover/parallel.hpp"
#include "gridcover/rng.hpp"

namespace gridcover {

Certificate certify_sup(const TargetFunction& f, const BoundParams& params,
                        std::uint64_t seed, unsigned jobs) {
    params.validate();
    if (!f.evaluator) throw invalid_params("target function has no evaluator");
    if (params.lipschitz < f.declared_lipschitz)
        throw lipschitz_mismatch(
            "params.lipschitz must be >= the function's declared constant");

    const GridSpec grid = subcube_count(params);
    const std::uint64_t m = sample_bound_approx(grid.cells, params.delta);
    const auto d = static_cast<std::uint64_t>(params.dimension);

    const unsigned workers =
        f.concurrent_safe ? effective_jobs(jobs) : 1;
    std::vector<double> chunk_max(workers, -std::numeric_limits<double>::infinity());
    std::vector<char> chunk_bad(workers, 0);

    // Point j reads stream positions j*d .. j*d+d-1, so any split over
    // workers evaluates the same sample set.
    parallel_for_index(workers, workers, [&](std::uint64_t w) {
        std::vector<double> point(d);
        double best = -std::numeric_limits<double>::infinity();
        for (std::uint64_t j = w; j < m; j += workers) {
            for (std::uint64_t c = 0; c < d; ++c)
                point[c] = SplitMix64::unit_at(seed, j * d + c);
            const double value = f.evaluator(point);
            if (!std::isfinite(value)) {
                chunk_bad[w] = 1;
                return;
            }
            best = std::max(best, value);
        }
        chunk_max[w] = best;
    });

    for (const char bad : chunk_bad)
        if (bad)
            throw evaluation_error("target function returned NaN or infinity");
    double sampled_max = -std::numeric_limits<double>::infinity();
    for (const double v : chunk_max) sampled_max = std::max(sampled_max, v);

    Certificate certificate;
    certificate.function = f.name;
    certificate.params = params;
    certificate.m_used = m;
    certificate.sampled_max = sampled_max;
    certificate.certified_sup_bound = sampled_max + params.epsilon / 2.0;
    certificate.confidence = 1.0 - params.delta / 2.0;
    certificate.seed = seed;
    return certificate;
}

TargetFunction make_constant(double value) {
    TargetFunction f;
    f.name = "constant";
    f.declared_lipschitz = 1.0;
    f.known_sup = value;
    f.evaluator = [value](std::span<const double>) { return value; };
    return f;
}

TargetFunction make_affine(double slope, double intercept) {
    TargetFunction f;
    f.name = "affine";
    f.declared_lipschitz = std::abs(slope);
    f.known_sup = std::max(intercept, intercept + slope);
    f.evaluator = [slope, intercept](std::span<const double> x) {
        return slope * x[0] + intercept;
    };
    return f;
}

std::vector<TargetFunction> builtin_functions(int dimension) {
    if (dimension < 1) throw invalid_params("dimension must be >= 1");
    std::vector<TargetFunction> registry;
    registry.push_back(make_constant(0.5));
    registry.push_back(make_affine(2.0, 0.0));

    TargetFunction negdist;
    negdist.name = "negdist";
    negdist.declared_lipschitz = 1.0;
    negdist.known_sup = 0.0;
    negdist.evaluator = [](std::span<const double> x) {
        double sq = 0.0;
        for (const double xi : x) sq += (xi - 0.5) * (xi - 0.5);
        return -std::sqrt(sq);
    };
    registry.push_back(negdist);

    // |grad| <= A*pi*sqrt(d); A = 1/(pi*sqrt(d)) normalizes it to 1.
    const double amplitude =
        1.0 / (std::numbers::pi * std::sqrt(static_cast<double>(dimension)));
    TargetFunction sinprod;
    sinprod.name = "sinprod";
    sinprod.declared_lipschitz = 1.0;
    sinprod.known_sup = amplitude;
    sinprod.evaluator = [amplitude](std::span<const double> x) {
        double product = amplitude;
        for (const double xi : x) product *= std::sin(std::numbers::pi * xi);
        return product;
    };
    registry.push_back(sinprod);
    return registry;
}

TargetFunction builtin_function(const std::string& name, int dimension) {
    for (TargetFunction& f : builtin_functions(dimension))
        if (f.name == name) return std::move(f);
    throw invalid_params("unknown builtin function: " + name);
}

std::string certificate_json(const Certificate& certificate) {
    nlohmann::json doc;
    doc["function"] = certificate.function;
    doc["params"] = {{"d", certificate.params.dimension},
                     {"epsilon", certificate.params.epsilon},
                     {"delta", certificate.params.delta},
                     {"lipschitz", certificate.params.lipschitz}};
    doc["m_used"] = certificate.m_used;
    doc["sampled_max"] = certificate.sampled_max;
    doc["certified_sup_bound"] = certificate.certified_sup_bound;
    doc["confidence"] = certificate.confidence;
    doc["seed"] = certificate.seed;
    return doc.dump(2);
}

} // namespace gridcover
