#include "gridcover/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gridcover {

namespace {

constexpr double kMaxCells = 9223372036854775808.0; // 2^63

// (1 - j/C)^M without underflow; exact 0 when j == C and m >= 1.
double pow_log_space(std::uint64_t cells, std::uint64_t j, std::uint64_t m) {
    if (m == 0) return 1.0;
    if (j >= cells) return 0.0;
    const double log_base = std::log1p(-static_cast<double>(j) / static_cast<double>(cells));
    return std::exp(static_cast<double>(m) * log_base);
}

std::uint64_t ceil_to_count(double value, const char* what) {
    if (!(value > 0.0)) return 1;
    const double c = std::ceil(value);
    if (c >= kMaxCells)
        throw overflow_error(std::string(what) + " exceeds the 64-bit sample budget");
    const auto n = static_cast<std::uint64_t>(c);
    return n == 0 ? 1 : n;
}

void require_cells(std::uint64_t cells, std::uint64_t least, const char* op) {
    if (cells < least)
        throw invalid_params(std::string(op) + " requires cells >= " + std::to_string(least));
}

void require_delta(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw invalid_params("delta must lie in (0, 1)");
}

} // namespace

void BoundParams::validate() const {
    if (dimension < 1) throw invalid_params("dimension must be >= 1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw invalid_params("epsilon must be a positive finite real");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw invalid_params("delta must lie in (0, 1)");
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz))
        throw invalid_params("lipschitz must be a positive finite real");
}

std::uint64_t segments_per_dim(const BoundParams& params) {
    params.validate();
    const long double target =
        2.0L * static_cast<long double>(params.lipschitz) *
        sqrtl(static_cast<long double>(params.dimension));
    const long double eps = static_cast<long double>(params.epsilon);

    long double k = ceill(target / eps);
    // The division may round across an integer; settle the ceiling against
    // the defining products instead.
    while (k > 1.0L && (k - 1.0L) * eps >= target) k -= 1.0L;
    while (k * eps < target) k += 1.0L;
    if (k < 1.0L) k = 1.0L;

    if (k >= static_cast<long double>(kMaxCells))
        throw overflow_error("segment count k exceeds 2^63");
    return static_cast<std::uint64_t>(k);
}

GridSpec subcube_count(const BoundParams& params) {
    const std::uint64_t k = segments_per_dim(params);

    unsigned __int128 cells = 1;
    const unsigned __int128 limit = static_cast<unsigned __int128>(1) << 63;
    for (int i = 0; i < params.dimension; ++i) {
        cells *= k;
        if (cells > limit)
            throw overflow_error("cell count k^d exceeds 2^63; use log_cell_count");
    }

    GridSpec grid;
    grid.dimension = params.dimension;
    grid.segments = k;
    grid.cells = static_cast<std::uint64_t>(cells);
    grid.cell_radius = params.epsilon / (2.0 * params.lipschitz);
    return grid;
}

double log_cell_count(const BoundParams& params) {
    const std::uint64_t k = segments_per_dim(params);
    return static_cast<double>(params.dimension) * std::log(static_cast<double>(k));
}

double expected_uncovered(std::uint64_t cells, std::uint64_t m) {
    require_cells(cells, 1, "expected_uncovered");
    if (m == 0) return static_cast<double>(cells);
    if (cells == 1) return 0.0;
    const double log_ez = std::log(static_cast<double>(cells)) +
                          static_cast<double>(m) * std::log1p(-1.0 / static_cast<double>(cells));
    return std::exp(log_ez);
}

double covariance_pair(std::uint64_t cells, std::uint64_t m) {
    require_cells(cells, 2, "covariance_pair");
    if (m < 1) throw invalid_params("covariance_pair requires m >= 1");
    return pow_log_space(cells, 2, m) - pow_log_space(cells, 1, 2 * m);
}

double variance_upper_bound(std::uint64_t cells, std::uint64_t m) {
    require_cells(cells, 1, "variance_upper_bound");
    if (m < 1) throw invalid_params("variance_upper_bound requires m >= 1");
    const double q = pow_log_space(cells, 1, m);
    return static_cast<double>(cells) * q * (1.0 - q);
}

QRoots q_roots(std::uint64_t cells, double delta) {
    require_cells(cells, 2, "q_roots");
    require_delta(delta);

    const double c = static_cast<double>(cells);
    const double a = 2.0 * c + delta * c * c;
    const double b = 2.0 * c * (1.0 + delta);
    const double disc = 4.0 * c * c + 8.0 * c * delta * (c - 1.0);
    const double root = std::sqrt(disc);

    QRoots q;
    q.discriminant = disc;
    q.q1 = 2.0 * delta / (b + root); // conjugate form, no cancellation
    q.q2 = (b + root) / (2.0 * a);
    return q;
}

std::uint64_t sample_bound_exact(std::uint64_t cells, double delta) {
    require_cells(cells, 1, "sample_bound_exact");
    require_delta(delta);
    if (cells == 1) return 1; // a single sample covers the single cell
    const QRoots q = q_roots(cells, delta);
    const double m = std::log(q.q1) /
                     std::log1p(-1.0 / static_cast<double>(cells));
    return ceil_to_count(m, "m_exact");
}

std::uint64_t sample_bound_approx(std::uint64_t cells, double delta) {
    require_cells(cells, 1, "sample_bound_approx");
    require_delta(delta);
    if (cells == 1) {
        const double m = std::ceil(std::log(2.0 / delta));
        return m < 1.0 ? 1 : static_cast<std::uint64_t>(m);
    }
    const double c = static_cast<double>(cells);
    return ceil_to_count(c * std::log(2.0 * c / delta), "m_approx");
}

std::uint64_t sample_bound_classic(std::uint64_t cells, double delta) {
    require_cells(cells, 1, "sample_bound_classic");
    require_delta(delta);
    if (cells == 1) return 1;
    const double c = static_cast<double>(cells);
    return ceil_to_count((c / delta) * std::log(2.0 * c), "m_classic");
}

double improvement(std::uint64_t m_ours, std::uint64_t m_classic) {
    if (m_ours < 1 || m_classic < 1)
        throw invalid_params("improvement requires positive sample sizes");
    return 1.0 - static_cast<double>(m_ours) / static_cast<double>(m_classic);
}

bool chebyshev_condition(std::uint64_t cells, std::uint64_t m, double delta) {
    require_cells(cells, 1, "chebyshev_condition");
    require_delta(delta);
    if (cells == 1) return true; // E[Z] = 0, condition holds trivially
    if (m == 0) return false;    // E[Z] = C >= 2

    const double c = static_cast<double>(cells);
    const double log_q = static_cast<double>(m) * std::log1p(-1.0 / c);
    const double q = std::exp(log_q);
    const double mean_z = std::exp(std::log(c) + log_q);
    if (!(mean_z < 1.0)) return false;

    const double lhs = mean_z * (1.0 - q) / ((1.0 - mean_z) * (1.0 - mean_z));
    return lhs <= delta / 2.0;
}

BoundSet compute_bounds(std::uint64_t cells, double delta) {
    require_cells(cells, 1, "compute_bounds");
    require_delta(delta);

    BoundSet set;
    set.m_exact = sample_bound_exact(cells, delta);
    set.m_approx = sample_bound_approx(cells, delta);
    set.m_classic = sample_bound_classic(cells, delta);
    if (cells >= 2) {
        const QRoots q = q_roots(cells, delta);
        set.q1 = q.q1;
        set.q2 = q.q2;
        set.discriminant = q.discriminant;
    } else {
        set.q1 = std::numeric_limits<double>::quiet_NaN();
        set.q2 = std::numeric_limits<double>::quiet_NaN();
        set.discriminant = std::numeric_limits<double>::quiet_NaN();
    }
    return set;
}

} // namespace gridcover
