#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vstates {

struct CheckReport {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    int cases = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Tolerance for a named check; throws PreconditionViolated for unknown names.
double tolerance_for(std::string_view name);

CheckReport make_report(std::string name, double max_error, int cases);

/// Series against Euler integral on random (a, b, c, z) with c > b > 0 and
/// z in (0, 0.81]. Error is |series - integral| / (1 + |value|).
CheckReport check_hypergeometric(int samples, std::uint64_t seed = kDefaultSeed);

/// Four contiguous relations on a seeded sweep, each residual divided by
/// the largest term in its relation.
CheckReport check_contiguous(int samples, std::uint64_t seed = kDefaultSeed);

/// Closed form of Lambda_n against its integral representation.
CheckReport check_lambda_oracle(const std::vector<double>& b_set, int n_max);

/// Self-interaction integrals of (tau^n - w^n) against |tau - w|^-1 and
/// (tau - w)^2 |tau - w|^-3, by offset quadrature at P nodes for n = 1..n_max
/// and `samples` random points on the circle. Also reports the spread of the
/// error across the sample points (rotation invariance).
std::vector<CheckReport> check_c1_c2(int n_max, int samples, int P = 65536, std::uint64_t seed = kDefaultSeed);

/// Cross integrals between the circles of radius 1 and b against their
/// hypergeometric closed forms, for n = 1..n_max. The two combined forms use
/// random real weights.
CheckReport check_c3_c8(const std::vector<double>& b_set, int n_max, std::uint64_t seed = kDefaultSeed);

/// Monotonicity and interleaving, determinant quadratic, Delta = C^2 - D,
/// kernel residuals, threshold routes and the E_1 identity.
std::vector<CheckReport> check_spectral(const std::vector<double>& b_set, int m_hi, int random_draws = 1000,
                                        std::uint64_t seed = kDefaultSeed);

/// Finite-difference blocks at the annulus (Omega = 0) for m = N(b) + 1
/// and the given mode indices, against -nm M_{nm}.
std::vector<CheckReport> check_linearization(const std::vector<double>& b_set, const std::vector<int>& modes);

/// Residual of the annulus for several Omega at P = 2048.
CheckReport check_annulus(const std::vector<double>& b_set, const std::vector<double>& omegas);

/// Everything above at its default sizes, sorted by name.
std::vector<CheckReport> default_suite(std::uint64_t seed = kDefaultSeed);

std::string format_table(const std::vector<CheckReport>& reports);
std::string format_json(const std::vector<CheckReport>& reports);

} // namespace vstates
