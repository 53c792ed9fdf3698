#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace vstates {

/// Parameters of the Gauss hypergeometric function F(a, b, c; z) restricted
/// to the real segment 0 <= z < 1.
struct Hyper2F1Input {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double z = 0.0;

    /// Throws PreconditionViolated when c is a non-positive integer or z is
    /// outside [0, 1).
    void validate() const;
};

/// Rising factorial (x)_n = x (x+1) ... (x+n-1), (x)_0 = 1.
/// Throws std::range_error if the product overflows.
double pochhammer(double x, unsigned n);

/// Power series for 2F1. Terms are accumulated until |term| < 1e-15 |sum|;
/// throws NonConvergence after 100000 terms.
double gauss_2f1(const Hyper2F1Input& in);
double gauss_2f1(double a, double b, double c, double z);

/// Euler integral representation of 2F1, valid for c > b > 0. Both endpoint
/// factors are removed by power substitutions and the remainder is integrated
/// adaptively. Independent of the series route.
double gauss_2f1_euler(const Hyper2F1Input& in);

/// S_n = (2/pi) sum_{k=1}^{n-1} 1/(2k+1).
double s_sum(int n);

/// Lambda_n(b) = ((1/2)_n / n!) b^{n-1} F(1/2, n+1/2, n+1; b^2).
double lambda_coeff(int n, double b);

/// Lambda_n(b) from b^{n-1}/pi * int_0^1 x^{n-1/2} (1-x)^{-1/2} (1-b^2 x)^{-1/2} dx,
/// integrated after x = 1 - u^2.
double lambda_integral_oracle(int n, double b);

/// Left-hand sides of four contiguous relations, in order:
///   c F(a,b,c) - c F(a+1,b,c) + b z F(a+1,b+1,c+1)
///   c F(a,b,c) - c F(a,b+1,c) + a z F(a+1,b+1,c+1)
///   b F(a,b+1,c) - a F(a+1,b,c) + (a-b) F(a,b,c)
///   c F(a,b,c) - (c-b) F(a,b,c+1) - b F(a,b+1,c+1)
/// Each vanishes identically.
std::array<double, 4> contiguous_residuals(const Hyper2F1Input& in);

/// Largest magnitude among the individual terms of each relation above; a
/// natural scale for judging the residuals in floating point.
std::array<double, 4> contiguous_scales(const Hyper2F1Input& in);

/// S_n and Lambda_n(b) for n = 1..n_max, built once and shared read-only.
class AnnulusConstants {
public:
    AnnulusConstants(double b, int n_max);

    /// max(200, 4 K m).
    static int default_n_max(int modes, int fold);

    double b() const noexcept { return b_; }
    int n_max() const noexcept { return n_max_; }

    /// Throw IndexOutOfTable unless 1 <= n <= n_max.
    double S(int n) const;
    double Lambda(int n) const;

private:
    double b_;
    int n_max_;
    std::vector<double> s_;
    std::vector<double> lambda_;
};

} // namespace vstates
