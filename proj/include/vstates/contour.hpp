#pragma once

#include "vstates/specfun.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace vstates {

using cplx = std::complex<double>;

/// Truncated m-fold conformal maps of the two boundaries on |w| = 1:
///   Phi_1(w) = w   + sum_{n=1}^{K} a_n w^{-(nm-1)}
///   Phi_2(w) = b w + sum_{n=1}^{K} c_n w^{-(nm-1)}
/// All coefficients are real (symmetry about the real axis).
struct PatchPair {
    double b = 0.5;
    int m = 2;
    int K = 1;
    std::vector<double> a;
    std::vector<double> c;
    double omega = 0.0;

    static PatchPair annulus(double b, int m, int K, double omega);

    /// sum (nm-1)(|a_n| + |c_n|)
    double guard_sum() const;
    /// min(b, 1-b)/2
    double guard_limit() const;
    bool within_guard() const { return guard_sum() < guard_limit(); }

    /// Shape checks; throws PreconditionViolated (bad sizes, b, m) or
    /// GuardViolation (coefficients outside the disjointness guard).
    void validate() const;
};

/// Boundary values at w = e^{i theta}; dz = d/dtheta Phi(e^{i theta}) = i w Phi'(w).
struct MapSample {
    cplx z1, z2, dz1, dz2;
};

MapSample eval_maps(const PatchPair& patch, double theta);

/// S(Phi_src, Phi_dst)(w) at w = e^{i theta} by the offset trapezoidal rule
/// with P nodes in eta, tau = w e^{i eta}. Boundaries are numbered 1 and 2.
/// Throws BoundaryCollision if a node lands within 1e-10 of the target point.
cplx stream_integral(int src, int dst, const PatchPair& patch, double theta, int P);

/// Sine coefficients of the two contour residuals at the retained m-fold
/// frequencies nm, n = 1..K.
struct ResidualSpectrum {
    int m = 0;
    int K = 0;
    std::vector<double> r1;
    std::vector<double> r2;
    /// Largest Fourier magnitude at frequencies that are not multiples of m.
    double leak = 0.0;
    /// Largest cosine coefficient (the residual of a reflection-symmetric
    /// patch is odd in theta).
    double even_part = 0.0;

    double max_abs() const;
};

/// Needs P even, P >= 64 and P a multiple of 4 K m.
void require_quadrature_size(const PatchPair& patch, int P);

/// Full evaluation at all P collocation angles theta_j = 2 pi j / P.
ResidualSpectrum residual(const PatchPair& patch, int P);

/// Residual samples G_1(theta_j), G_2(theta_j) at all P collocation angles.
struct ResidualSamples {
    std::vector<double> theta;
    std::vector<double> g1;
    std::vector<double> g2;
};

ResidualSamples residual_samples(const PatchPair& patch, int P);

/// Precomputed basis tables for a fixed (m, K, P); reused across the many
/// residual evaluations of a Newton solve.
class ContourGrid {
public:
    ContourGrid(int m, int K, int P);

    int m() const noexcept { return m_; }
    int K() const noexcept { return K_; }
    int P() const noexcept { return P_; }

    /// G_1, G_2 at collocation indices [j_begin, j_end).
    void samples(const PatchPair& patch, int j_begin, int j_end, std::vector<double>& g1,
                 std::vector<double>& g2) const;

    /// The 2K retained sine coefficients (r1 then r2), using only the
    /// collocation points of one half period 0 < theta < pi/m. Exact for
    /// m-fold, reflection-symmetric patches up to round-off.
    std::vector<double> reduced_coefficients(const PatchPair& patch) const;

private:
    struct NodeSet {
        std::vector<double> zr, zi, nr, ni;
    };
    void fill_nodes(const PatchPair& patch, NodeSet& one, NodeSet& two) const;

    int m_, K_, P_;
    // w^{-(nm-1)} at offset nodes and at collocation points, row-major [point][n]
    std::vector<cplx> node_basis_;
    std::vector<cplx> node_w_;
    std::vector<cplx> coll_basis_;
    std::vector<cplx> coll_w_;
};

/// Finite-difference linearization of the residual at the annulus, for the
/// perturbation at mode n (frequency nm), compared with -nm M_{nm}.
struct LinearizationCheck {
    int frequency = 0;
    std::array<std::array<double, 2>, 2> observed{};
    std::array<std::array<double, 2>, 2> expected{};
    /// max over entries of |observed - expected| / |expected|
    double rel_error = 0.0;
    /// largest FD response at any other frequency (sine or cosine), and the
    /// cosine part at frequency nm
    double offblock = 0.0;
};

LinearizationCheck linearization_check(int m, double b, double omega, int n, double h, int P,
                                       const AnnulusConstants& consts);

struct BoundaryPoint {
    double theta;
    double x1, y1, x2, y2;
};

/// count equally spaced samples of both boundaries, theta_k = 2 pi k / count.
std::vector<BoundaryPoint> sample_boundaries(const PatchPair& patch, int count = 512);

} // namespace vstates
