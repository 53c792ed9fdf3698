#include "vstates/contour.hpp"

#include "vstates/errors.hpp"
#include "vstates/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/core.h>

namespace vstates {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCollisionDistance = 1e-10;

int mode_power(int n, int m) { return n * m - 1; }

// Sum over nodes q of (N[q] - n0) / |Z[q] - z0|, plus the smallest squared
// distance seen.
struct PairSum {
    double re = 0.0;
    double im = 0.0;
    double min_dist2 = std::numeric_limits<double>::infinity();
};

PairSum pair_sum(const double* zr, const double* zi, const double* nr, const double* ni, std::size_t count, cplx z0,
                 cplx n0) {
    const double x0 = z0.real(), y0 = z0.imag();
    const double u0 = n0.real(), v0 = n0.imag();
    double sr = 0.0, si = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
#pragma omp simd reduction(+ : sr, si) reduction(min : dmin)
    for (std::size_t q = 0; q < count; ++q) {
        const double dx = zr[q] - x0;
        const double dy = zi[q] - y0;
        const double d2 = dx * dx + dy * dy;
        const double inv = 1.0 / std::sqrt(d2);
        sr += (nr[q] - u0) * inv;
        si += (ni[q] - v0) * inv;
        dmin = d2 < dmin ? d2 : dmin;
    }
    return {sr, si, dmin};
}

void throw_collision(int src, int dst, double dist) {
    throw BoundaryCollision(fmt::format("boundary {} comes within {:.3g} of boundary {} during quadrature", src, dist,
                                        dst));
}

struct MapValue {
    cplx z;     // Phi(w)
    cplx wdphi; // w Phi'(w)
};

MapValue map_at(const PatchPair& p, int which, cplx w) {
    const auto& coef = which == 1 ? p.a : p.c;
    const double lead = which == 1 ? 1.0 : p.b;
    cplx z = lead * w;
    cplx wd = lead * w;
    for (int n = 1; n <= p.K; ++n) {
        const int pw = mode_power(n, p.m);
        const cplx basis = std::pow(w, -pw);
        z += coef[n - 1] * basis;
        wd -= static_cast<double>(pw) * coef[n - 1] * basis;
    }
    return {z, wd};
}

} // namespace

PatchPair PatchPair::annulus(double b, int m, int K, double omega) {
    PatchPair p;
    p.b = b;
    p.m = m;
    p.K = K;
    p.a.assign(static_cast<std::size_t>(std::max(K, 0)), 0.0);
    p.c.assign(static_cast<std::size_t>(std::max(K, 0)), 0.0);
    p.omega = omega;
    return p;
}

double PatchPair::guard_sum() const {
    double sum = 0.0;
    for (int n = 1; n <= K; ++n) {
        sum += mode_power(n, m) * (std::abs(a[n - 1]) + std::abs(c[n - 1]));
    }
    return sum;
}

double PatchPair::guard_limit() const { return std::min(b, 1.0 - b) / 2.0; }

void PatchPair::validate() const {
    if (!(b > 0.0 && b < 1.0)) {
        throw PreconditionViolated(fmt::format("patch: b = {} is outside (0, 1)", b));
    }
    if (m < 2) {
        throw PreconditionViolated(fmt::format("patch: fold symmetry m = {} must be at least 2", m));
    }
    if (K < 1 || a.size() != static_cast<std::size_t>(K) || c.size() != static_cast<std::size_t>(K)) {
        throw PreconditionViolated(fmt::format("patch: K = {} but {} outer and {} inner coefficients", K, a.size(),
                                               c.size()));
    }
    for (int n = 0; n < K; ++n) {
        if (!std::isfinite(a[n]) || !std::isfinite(c[n])) {
            throw PreconditionViolated("patch: non-finite coefficient");
        }
    }
    if (!std::isfinite(omega)) {
        throw PreconditionViolated("patch: non-finite angular velocity");
    }
    if (!within_guard()) {
        throw GuardViolation(fmt::format("patch: coefficient sum {:.6g} exceeds the guard {:.6g}", guard_sum(),
                                         guard_limit()));
    }
}

MapSample eval_maps(const PatchPair& patch, double theta) {
    const cplx w = std::polar(1.0, theta);
    const cplx i{0.0, 1.0};
    const auto one = map_at(patch, 1, w);
    const auto two = map_at(patch, 2, w);
    return {one.z, two.z, i * one.wdphi, i * two.wdphi};
}

cplx stream_integral(int src, int dst, const PatchPair& patch, double theta, int P) {
    if (P < 64 || P % 2 != 0) {
        throw PreconditionViolated(fmt::format("quadrature size P = {} must be even and at least 64", P));
    }
    if ((src != 1 && src != 2) || (dst != 1 && dst != 2)) {
        throw PreconditionViolated("boundaries are numbered 1 and 2");
    }
    const auto target = map_at(patch, dst, std::polar(1.0, theta));
    std::vector<double> zr(P), zi(P), nr(P), ni(P);
    const double h = kTwoPi / P;
    for (int k = 0; k < P; ++k) {
        const auto v = map_at(patch, src, std::polar(1.0, theta + h * (k + 0.5)));
        zr[k] = v.z.real();
        zi[k] = v.z.imag();
        nr[k] = v.wdphi.real();
        ni[k] = v.wdphi.imag();
    }
    const auto s = pair_sum(zr.data(), zi.data(), nr.data(), ni.data(), P, target.z, target.wdphi);
    if (s.min_dist2 < kCollisionDistance * kCollisionDistance) {
        throw_collision(src, dst, std::sqrt(s.min_dist2));
    }
    return cplx{s.re, s.im} / static_cast<double>(P);
}

double ResidualSpectrum::max_abs() const {
    double mx = 0.0;
    for (double v : r1) mx = std::max(mx, std::abs(v));
    for (double v : r2) mx = std::max(mx, std::abs(v));
    return mx;
}

void require_quadrature_size(const PatchPair& patch, int P) {
    if (P < 64 || P % 2 != 0) {
        throw PreconditionViolated(fmt::format("quadrature size P = {} must be even and at least 64", P));
    }
    const int block = 4 * patch.K * patch.m;
    if (P % block != 0) {
        throw PreconditionViolated(
            fmt::format("quadrature size P = {} must be a multiple of 4 K m = {} (K = {}, m = {})", P, block,
                        patch.K, patch.m));
    }
}

ContourGrid::ContourGrid(int m, int K, int P) : m_(m), K_(K), P_(P) {
    if (m < 2 || K < 1 || P < 64 || P % (2 * m) != 0) {
        throw PreconditionViolated(fmt::format("contour grid needs m >= 2, K >= 1, P >= 64 and 2m | P "
                                               "(m = {}, K = {}, P = {})",
                                               m, K, P));
    }
    const double h = kTwoPi / P;
    node_basis_.resize(static_cast<std::size_t>(P) * K);
    coll_basis_.resize(static_cast<std::size_t>(P) * K);
    node_w_.resize(P);
    coll_w_.resize(P);
    for (int q = 0; q < P; ++q) {
        const double eta = h * (q + 0.5);
        const double theta = h * q;
        node_w_[q] = std::polar(1.0, eta);
        coll_w_[q] = std::polar(1.0, theta);
        for (int n = 1; n <= K; ++n) {
            const int pw = mode_power(n, m);
            node_basis_[static_cast<std::size_t>(q) * K + (n - 1)] = std::polar(1.0, -pw * eta);
            coll_basis_[static_cast<std::size_t>(q) * K + (n - 1)] = std::polar(1.0, -pw * theta);
        }
    }
}

void ContourGrid::fill_nodes(const PatchPair& patch, NodeSet& one, NodeSet& two) const {
    for (NodeSet* s : {&one, &two}) {
        s->zr.resize(P_);
        s->zi.resize(P_);
        s->nr.resize(P_);
        s->ni.resize(P_);
    }
    for (int q = 0; q < P_; ++q) {
        const cplx w = node_w_[q];
        cplx z1 = w, n1 = w, z2 = patch.b * w, n2 = patch.b * w;
        const cplx* basis = &node_basis_[static_cast<std::size_t>(q) * K_];
        for (int n = 0; n < K_; ++n) {
            const double pw = mode_power(n + 1, m_);
            z1 += patch.a[n] * basis[n];
            n1 -= pw * patch.a[n] * basis[n];
            z2 += patch.c[n] * basis[n];
            n2 -= pw * patch.c[n] * basis[n];
        }
        one.zr[q] = z1.real();
        one.zi[q] = z1.imag();
        one.nr[q] = n1.real();
        one.ni[q] = n1.imag();
        two.zr[q] = z2.real();
        two.zi[q] = z2.imag();
        two.nr[q] = n2.real();
        two.ni[q] = n2.imag();
    }
}

void ContourGrid::samples(const PatchPair& patch, int j_begin, int j_end, std::vector<double>& g1,
                          std::vector<double>& g2) const {
    if (patch.m != m_ || patch.K != K_) {
        throw PreconditionViolated("patch does not match the contour grid");
    }
    NodeSet one, two;
    fill_nodes(patch, one, two);
    const auto count = static_cast<std::size_t>(P_);
    const double inv_p = 1.0 / P_;
    g1.assign(static_cast<std::size_t>(j_end - j_begin), 0.0);
    g2.assign(static_cast<std::size_t>(j_end - j_begin), 0.0);
    for (int j = j_begin; j < j_end; ++j) {
        const cplx w = coll_w_[j];
        const cplx* basis = &coll_basis_[static_cast<std::size_t>(j) * K_];
        cplx z[2] = {w, patch.b * w};
        cplx nd[2] = {w, patch.b * w};
        for (int n = 0; n < K_; ++n) {
            const double pw = mode_power(n + 1, m_);
            z[0] += patch.a[n] * basis[n];
            nd[0] -= pw * patch.a[n] * basis[n];
            z[1] += patch.c[n] * basis[n];
            nd[1] -= pw * patch.c[n] * basis[n];
        }
        for (int d = 0; d < 2; ++d) {
            const auto s1 = pair_sum(one.zr.data(), one.zi.data(), one.nr.data(), one.ni.data(), count, z[d], nd[d]);
            const auto s2 = pair_sum(two.zr.data(), two.zi.data(), two.nr.data(), two.ni.data(), count, z[d], nd[d]);
            const double dmin = std::min(s1.min_dist2, s2.min_dist2);
            if (dmin < kCollisionDistance * kCollisionDistance) {
                throw_collision(s1.min_dist2 < s2.min_dist2 ? 1 : 2, d + 1, std::sqrt(dmin));
            }
            const cplx stream1{s1.re * inv_p, s1.im * inv_p};
            const cplx stream2{s2.re * inv_p, s2.im * inv_p};
            const double g = std::imag((patch.omega * z[d] - stream1 + stream2) * std::conj(nd[d]));
            (d == 0 ? g1 : g2)[j - j_begin] = g;
        }
    }
}

std::vector<double> ContourGrid::reduced_coefficients(const PatchPair& patch) const {
    // G is odd and 2pi/m periodic: the full-circle sine sums reduce to
    // 2m times the sum over 0 < theta_j < pi/m (the endpoints carry sin = 0).
    const int half = P_ / (2 * m_);
    std::vector<double> g1, g2;
    samples(patch, 1, half, g1, g2);
    std::vector<double> out(2 * static_cast<std::size_t>(K_), 0.0);
    const double weight = 4.0 * m_ / P_;
    for (int n = 1; n <= K_; ++n) {
        double s1 = 0.0, s2 = 0.0;
        for (int j = 1; j < half; ++j) {
            const double sn = std::sin(kTwoPi * static_cast<double>((static_cast<long long>(n) * m_ * j) % P_) / P_);
            s1 += g1[j - 1] * sn;
            s2 += g2[j - 1] * sn;
        }
        out[n - 1] = weight * s1;
        out[K_ + n - 1] = weight * s2;
    }
    return out;
}

ResidualSamples residual_samples(const PatchPair& patch, int P) {
    patch.validate();
    require_quadrature_size(patch, P);
    const ContourGrid grid(patch.m, patch.K, P);
    ResidualSamples out;
    grid.samples(patch, 0, P, out.g1, out.g2);
    out.theta.resize(P);
    for (int j = 0; j < P; ++j) out.theta[j] = kTwoPi * j / P;
    return out;
}

namespace {

// Real DFT of samples on the uniform grid: sin and cos coefficients for
// p = 0..P/2, normalized so g = c_0 + sum (c_p cos + s_p sin).
struct RealSpectrum {
    std::vector<double> sin_c;
    std::vector<double> cos_c;
};

RealSpectrum real_dft(const std::vector<double>& g) {
    const int P = static_cast<int>(g.size());
    std::vector<double> sn(P), cs(P);
    for (int r = 0; r < P; ++r) {
        sn[r] = std::sin(kTwoPi * r / P);
        cs[r] = std::cos(kTwoPi * r / P);
    }
    RealSpectrum out;
    out.sin_c.assign(P / 2 + 1, 0.0);
    out.cos_c.assign(P / 2 + 1, 0.0);
    for (int p = 0; p <= P / 2; ++p) {
        double s = 0.0, c = 0.0;
        int r = 0;
        for (int j = 0; j < P; ++j) {
            s += g[j] * sn[r];
            c += g[j] * cs[r];
            r += p;
            if (r >= P) r -= P;
        }
        const double scale = (p == 0 || 2 * p == P) ? 1.0 / P : 2.0 / P;
        out.sin_c[p] = s * scale;
        out.cos_c[p] = c * scale;
    }
    return out;
}

} // namespace

ResidualSpectrum residual(const PatchPair& patch, int P) {
    const auto samples = residual_samples(patch, P);
    ResidualSpectrum out;
    out.m = patch.m;
    out.K = patch.K;
    for (int which = 0; which < 2; ++which) {
        const auto spec = real_dft(which == 0 ? samples.g1 : samples.g2);
        auto& r = which == 0 ? out.r1 : out.r2;
        r.resize(patch.K);
        for (int n = 1; n <= patch.K; ++n) {
            r[n - 1] = spec.sin_c[n * patch.m];
        }
        for (int p = 0; p <= P / 2; ++p) {
            out.even_part = std::max(out.even_part, std::abs(spec.cos_c[p]));
            if (p % patch.m != 0) {
                out.leak = std::max(out.leak, std::hypot(spec.sin_c[p], spec.cos_c[p]));
            }
        }
    }
    return out;
}

LinearizationCheck linearization_check(int m, double b, double omega, int n, double h, int P,
                                       const AnnulusConstants& consts) {
    if (n < 1 || n * m - 1 < 1) {
        throw PreconditionViolated(fmt::format("linearization check needs n >= 1 and nm - 1 >= 1 (n = {}, m = {})", n,
                                               m));
    }
    if (!(h > 0.0)) {
        throw PreconditionViolated("finite-difference step must be positive");
    }
    LinearizationCheck out;
    out.frequency = n * m;
    const auto mm = mode_matrix(out.frequency, b, omega, consts);
    const double f = -static_cast<double>(out.frequency);
    out.expected = {{{f * mm.m11, f * mm.m12}, {f * mm.m21, f * mm.m22}}};

    auto base = PatchPair::annulus(b, m, n, omega);
    for (int col = 0; col < 2; ++col) {
        auto plus = base;
        auto minus = base;
        (col == 0 ? plus.a : plus.c)[n - 1] = h;
        (col == 0 ? minus.a : minus.c)[n - 1] = -h;
        const auto gp = residual_samples(plus, P);
        const auto gm = residual_samples(minus, P);
        for (int row = 0; row < 2; ++row) {
            const auto& up = row == 0 ? gp.g1 : gp.g2;
            const auto& dn = row == 0 ? gm.g1 : gm.g2;
            std::vector<double> diff(P);
            for (int j = 0; j < P; ++j) diff[j] = (up[j] - dn[j]) / (2.0 * h);
            const auto spec = real_dft(diff);
            out.observed[row][col] = spec.sin_c[out.frequency];
            for (int p = 0; p <= P / 2; ++p) {
                out.offblock = std::max(out.offblock, std::abs(spec.cos_c[p]));
                if (p != out.frequency) {
                    out.offblock = std::max(out.offblock, std::abs(spec.sin_c[p]));
                }
            }
        }
    }
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const double err = std::abs(out.observed[r][c] - out.expected[r][c]) / std::abs(out.expected[r][c]);
            out.rel_error = std::max(out.rel_error, err);
        }
    }
    return out;
}

std::vector<BoundaryPoint> sample_boundaries(const PatchPair& patch, int count) {
    if (count < 1) {
        throw PreconditionViolated("boundary sample count must be positive");
    }
    std::vector<BoundaryPoint> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double theta = kTwoPi * k / count;
        const auto s = eval_maps(patch, theta);
        out.push_back({theta, s.z1.real(), s.z1.imag(), s.z2.real(), s.z2.imag()});
    }
    return out;
}

} // namespace vstates
