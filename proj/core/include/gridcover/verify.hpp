#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gridcover/bounds.hpp"

namespace gridcover {

/*
Sup certification for Lipschitz functions on [0,1]^d.

With k = ceil(2*L*sqrt(d)/eps) a cell of side 1/k has diameter
sqrt(d)/k <= eps/(2*L), so the function varies by at most eps/2 inside
any cell. If every cell contains a sample, every x sits in a covered cell
and f(x) <= f(x_sample) + eps/2; drawing M = m_approx(C, delta) uniform
points makes full coverage fail with probability at most delta/2, so

    sup_X f  <=  max over samples + eps/2    with confidence 1 - delta/2.

The certificate reports that 1 - delta/2: the remaining delta/2 budget
belongs to the estimation half of the original inequality, which is not
part of this toolkit.
*/

struct TargetFunction {
    std::string name;
    double declared_lipschitz = 1.0;
    /// Known supremum over [0,1]^d, for registry functions; evaluation
    /// code never reads it, soundness tests do.
    double known_sup = 0.0;
    /// Whether evaluator may be invoked from several threads at once.
    bool concurrent_safe = true;
    std::function<double(std::span<const double>)> evaluator;
};

struct Certificate {
    std::string function;
    BoundParams params{};
    std::uint64_t m_used = 0;
    double sampled_max = 0.0;
    double certified_sup_bound = 0.0; // sampled_max + eps/2, exactly
    double confidence = 0.0;          // 1 - delta/2
    std::uint64_t seed = 0;
};

/// Draws m_approx(subcube_count(params).cells, delta) uniform points and
/// returns the certificate. Requires params.lipschitz >=
/// f.declared_lipschitz (throws lipschitz_mismatch otherwise); throws
/// evaluation_error if f returns NaN or infinity. Point j's coordinates
/// come from counter positions j*d..j*d+d-1 of the seed's stream, so the
/// evaluation fans out across workers with a deterministic max.
Certificate certify_sup(const TargetFunction& f, const BoundParams& params,
                        std::uint64_t seed, unsigned jobs = 0);

/// Registry of analytic functions with known suprema and constants:
///   constant  f = 1/2                         L = 1,   sup = 1/2
///   affine    f = 2*x_0                       L = 2,   sup = 2
///   negdist   f = -|x - center|_2             L = 1,   sup = 0
///   sinprod   f = prod sin(pi x_i)/(pi sqrt(d)), L = 1, sup = 1/(pi sqrt(d))
/// The sinprod constant depends on the dimension, hence the argument.
std::vector<TargetFunction> builtin_functions(int dimension);

/// Builtin lookup by name; throws invalid_params when absent.
TargetFunction builtin_function(const std::string& name, int dimension);

TargetFunction make_constant(double value);
TargetFunction make_affine(double slope, double intercept);

/// Serializes to the stable schema
/// { "function", "params", "m_used", "sampled_max",
///   "certified_sup_bound", "confidence", "seed" }.
std::string certificate_json(const Certificate& certificate);

} // namespace gridcover
