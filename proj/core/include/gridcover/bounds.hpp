#pragma once

#include <cstdint>

#include "gridcover/errors.hpp"

namespace gridcover {

/*
Closed-form sample-complexity bounds for covering the unit hypercube.

[0,1]^d is split into k segments per axis with k = ceil(2*L*sqrt(d)/eps),
giving C = k^d cells of radius r = eps/(2*L). After M i.i.d. uniform
samples the uncovered-cell count Z has

    E[Z]   = C * (1 - 1/C)^M
    Var[Z] = sum Var[Y_i] + sum_{i != j} Cov(Y_i, Y_j)
           <= C * q * (1 - q),          q = (1 - 1/C)^M,

because Cov(Y_i, Y_j) = (1 - 2/C)^M - (1 - 1/C)^(2M) < 0. Requiring the
one-sided Chebyshev bound Var[Z]/(1 - E[Z])^2 <= delta/2 yields

    q^2 (2C + delta C^2) - 2C q (1 + delta) + delta >= 0,

whose lower root q1 gives the exact sample size

    m_exact = ceil( ln q1 / ln(1 - 1/C) )

and, since q1 ~ delta/(2C) as delta -> 0,

    m_approx = ceil( C * ln(2C/delta) ).

The classical coupon-collector comparator with linear 1/delta dependence
is instantiated as m_classic = ceil( (C/delta) * ln(2C) ).

All powers are evaluated in log space (exp(M*log1p(-1/C))): direct
powering underflows or loses precision for C > 1e4. q1 is computed with
the conjugate form 2*delta / (b + sqrt(disc)), which is algebraically
equal to the subtraction form but keeps 12+ significant digits at
delta = 1e-12 where the subtraction form cancels catastrophically.
*/

/// Problem quadruple from which every bound derives.
struct BoundParams {
    int dimension = 2;
    double epsilon = 0.1;
    double delta = 0.1;
    double lipschitz = 1.0;

    /// Throws invalid_params unless d >= 1, eps > 0, 0 < delta < 1, L > 0.
    void validate() const;
};

/// Derived discretization of the unit hypercube.
struct GridSpec {
    int dimension = 0;
    std::uint64_t segments = 0;  // k, segments per axis
    std::uint64_t cells = 0;     // C = k^d
    double cell_radius = 0.0;    // r = eps/(2*L)
};

/// Roots of the Chebyshev quadratic. The feasible regime is q <= q1,
/// and q1 < 1/C always (1/C lies strictly between the roots).
struct QRoots {
    double q1 = 0.0;
    double q2 = 0.0;
    double discriminant = 0.0;
};

/// The three sample sizes plus the quadratic intermediates.
/// For the degenerate single-cell grid the roots are NaN.
struct BoundSet {
    std::uint64_t m_exact = 0;
    std::uint64_t m_approx = 0;
    std::uint64_t m_classic = 0;
    double q1 = 0.0;
    double q2 = 0.0;
    double discriminant = 0.0;
};

/// k = ceil(2*L*sqrt(d)/eps), evaluated in long double with the ceiling
/// verified against the products (k-1)*eps < 2*L*sqrt(d) <= k*eps so the
/// division cannot round across an integer.
std::uint64_t segments_per_dim(const BoundParams& params);

/// Full discretization; throws overflow_error when k^d exceeds 2^63.
GridSpec subcube_count(const BoundParams& params);

/// ln(C) = d*ln(k); never overflows, usable when subcube_count refuses.
double log_cell_count(const BoundParams& params);

/// E[Z] = C*(1-1/C)^M. Returns C for m == 0 and 0 for the single-cell grid.
double expected_uncovered(std::uint64_t cells, std::uint64_t m);

/// Cov(Y_i, Y_j) = (1-2/C)^M - (1-1/C)^(2M); strictly negative for m >= 1.
/// cells == 2 is accepted as the documented edge (first term vanishes).
double covariance_pair(std::uint64_t cells, std::uint64_t m);

/// Var[Z] <= C*q*(1-q) with q = (1-1/C)^M.
double variance_upper_bound(std::uint64_t cells, std::uint64_t m);

/// Roots of q^2(2C + delta*C^2) - 2Cq(1+delta) + delta = 0.
QRoots q_roots(std::uint64_t cells, double delta);

/// m_exact = ceil(ln q1 / ln(1-1/C)); 1 for the single-cell grid.
std::uint64_t sample_bound_exact(std::uint64_t cells, double delta);

/// m_approx = ceil(C*ln(2C/delta)); max(1, ceil(ln(2/delta))) for cells == 1.
std::uint64_t sample_bound_approx(std::uint64_t cells, double delta);

/// m_classic = ceil((C/delta)*ln(2C)); 1 for the single-cell grid.
std::uint64_t sample_bound_classic(std::uint64_t cells, double delta);

/// 1 - m_ours/m_classic. May be negative; reports flag that case.
double improvement(std::uint64_t m_ours, std::uint64_t m_classic);

/// Evaluates C*q*(1-q)/(1 - C*q)^2 <= delta/2 at q = (1-1/C)^M.
/// False whenever E[Z] >= 1 (the Chebyshev step needs E[Z] < 1).
bool chebyshev_condition(std::uint64_t cells, std::uint64_t m, double delta);

/// Bundles the three bounds and the root intermediates for one grid.
BoundSet compute_bounds(std::uint64_t cells, double delta);

} // namespace gridcover
