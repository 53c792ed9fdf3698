#pragma once

#include "vstates/contour.hpp"
#include "vstates/spectrum.hpp"

#include <string>
#include <vector>

namespace vstates {

struct NewtonOptions {
    int P = 4096;
    int max_iter = 25;
    double tol = 1e-10;
};

struct NewtonResult {
    PatchPair patch;
    double residual_norm = 0.0;
    int iterations = 0;
};

/// Unit vector along the kernel generator in the (a_1, c_1) plane.
struct Direction {
    double e1 = 1.0;
    double e2 = 0.0;
};

Direction kernel_direction(const KernelVector& kernel);

/// Projection of (a_1, c_1) onto the direction.
double amplitude(const PatchPair& patch, const Direction& dir);

/// Damped Newton on (a_1..a_K, c_1..c_K, Omega) for the 2K retained residual
/// coefficients plus the amplitude constraint. The residual norm is the max
/// over the 2K coefficients.
NewtonResult newton_correct(const PatchPair& guess, double s, const KernelVector& kernel,
                            const NewtonOptions& opts = {});

struct BranchPoint {
    double s = 0.0;
    PatchPair patch;
    double residual_norm = 0.0;
    int step_index = 0;
};

struct BranchResult {
    double b = 0.0;
    int m = 0;
    int K = 0;
    int P = 0;
    Branch sign = Branch::plus;
    std::vector<BranchPoint> points;
    /// empty when every requested step converged
    std::string stopped_reason;
};

/// Point 0 is the annulus at Omega_m^sign. Failures after that stop the
/// continuation and are recorded in stopped_reason.
BranchResult branch_continue(int m, double b, Branch sign, int steps, double ds, int K, int P,
                             const AnnulusConstants& consts, double tol = 1e-10, int max_iter = 25);

} // namespace vstates
