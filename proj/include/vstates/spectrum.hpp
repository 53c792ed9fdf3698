#pragma once

#include "vstates/specfun.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vstates {

/// Which of the two bifurcation velocities: plus -> Omega_m^+, minus -> Omega_m^-.
enum class Branch { plus, minus };

std::string_view to_string(Branch s) noexcept;
/// Accepts "plus" / "minus"; throws PreconditionViolated otherwise.
Branch branch_from_string(std::string_view s);

/// Fourier multiplier of the linearized operator at frequency n:
///   [ Omega - S_n + b^2 L_1      -b^2 L_n              ]
///   [ b L_n                      b Omega + S_n - b L_1 ]
struct ModeMatrix {
    int n = 0;
    double b = 0.0;
    double omega = 0.0;
    double m11 = 0.0, m12 = 0.0, m21 = 0.0, m22 = 0.0;

    double det() const noexcept { return m11 * m22 - m12 * m21; }
    /// max(1, |m11 m22|, |m12 m21|); zero-determinant tests are relative to it.
    double det_scale() const noexcept;
};

ModeMatrix mode_matrix(int n, double b, double omega, const AnnulusConstants& consts);

/// det(M_n) = (b/4)(lambda^2 - 2 C_n lambda + D_n) with lambda = 1 - 2 Omega.
struct QuadraticCoeffs {
    double C = 0.0;
    double D = 0.0;
};

QuadraticCoeffs quadratic_coeffs(int n, double b, const AnnulusConstants& consts);

/// Reduced discriminant Delta_n = E_n F_n. Defined for n >= 1 (E_1 < 0 is
/// the start of the threshold scan).
struct Discriminant {
    double delta = 0.0;
    double E = 0.0;
    double F = 0.0;
};

Discriminant discriminant(int n, double b, const AnnulusConstants& consts);

/// Smallest n >= 2 with E_n(b) > 0. Throws TableExhausted if none up to n_max.
int threshold_N(double b, const AnnulusConstants& consts);

/// Smallest n >= 2 with S_n > b ((1+b^2)/(1+b) L_1 + 2b/(1+b) L_n). Same
/// number as threshold_N; kept as a separate route for cross-checking.
int threshold_remark(double b, const AnnulusConstants& consts);

struct SpectrumRow {
    int m = 0;
    double b = 0.0;
    double c_m = 0.0;
    double d_m = 0.0;
    double delta_m = 0.0;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    double omega_minus = 0.0;
    double omega_plus = 0.0;
    bool transversal = false;

    double omega(Branch s) const noexcept { return s == Branch::plus ? omega_plus : omega_minus; }
};

inline constexpr double kTransversalityFloor = 1e-12;

/// Eigenvalues of mode m. Throws NotSimple when Delta_m <= 0.
SpectrumRow bifurcation_row(int m, double b, const AnnulusConstants& consts);

/// Generator (Omega + S_m/b - L_1, -L_m) of ker M_m.
struct KernelVector {
    double v1 = 0.0;
    double v2 = 0.0;
    int m = 0;
    double omega = 0.0;
};

/// Throws NotAnEigenvalue if |M_m v| exceeds 1e-10 times the entry scale.
KernelVector kernel_vector(int m, double b, double omega, const AnnulusConstants& consts);

struct MonotonicityReport {
    double b = 0.0;
    int threshold = 0;
    int n_hi = 0;
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// For N(b) <= n < n_hi checks Delta_n and lambda_n^+ increasing, lambda_n^-
/// decreasing, and lambda_m^- < lambda_n^- < lambda_n^+ < lambda_m^+ for m > n.
MonotonicityReport eigenvalue_monotonicity_scan(double b, int n_hi, const AnnulusConstants& consts);

} // namespace vstates
