#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>

namespace vstates::quad {

inline constexpr double kAdaptiveTol = 1e-13;
inline constexpr std::size_t kMaxRefinements = 12;

/// Tanh-sinh quadrature on [lo, hi]. The integrand must be bounded on the
/// closed interval but may be non-smooth at the endpoints.
double integrate(const std::function<double(double)>& f, double lo, double hi);

/// Offset trapezoidal mean over one period: (1/P) sum f(eta_k), with the
/// nodes eta_k = 2 pi (k + 1/2) / P. The nodes are symmetric about eta = 0
/// and never touch it.
template <class F>
std::complex<double> offset_mean(F&& f, int nodes) {
    std::complex<double> sum{0.0, 0.0};
    const double h = 2.0 * std::numbers::pi / nodes;
    for (int k = 0; k < nodes; ++k) {
        sum += f(h * (k + 0.5));
    }
    return sum / static_cast<double>(nodes);
}

} // namespace vstates::quad
