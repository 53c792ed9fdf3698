#include "vstates/spectrum.hpp"

#include "vstates/errors.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace vstates {

namespace {

void require_matching_table(double b, const AnnulusConstants& consts) {
    if (b != consts.b()) {
        throw PreconditionViolated(
            fmt::format("constants table was built for b = {}, not b = {}", consts.b(), b));
    }
}

void require_mode(int n, int lowest) {
    if (n < lowest) {
        throw PreconditionViolated(fmt::format("mode index {} is below {}", n, lowest));
    }
}

} // namespace

std::string_view to_string(Branch s) noexcept { return s == Branch::plus ? "plus" : "minus"; }

Branch branch_from_string(std::string_view s) {
    if (s == "plus") return Branch::plus;
    if (s == "minus") return Branch::minus;
    throw PreconditionViolated(fmt::format("sign must be 'plus' or 'minus', got '{}'", s));
}

double ModeMatrix::det_scale() const noexcept {
    return std::max({1.0, std::abs(m11 * m22), std::abs(m12 * m21)});
}

ModeMatrix mode_matrix(int n, double b, double omega, const AnnulusConstants& consts) {
    require_mode(n, 2);
    require_matching_table(b, consts);
    const double s = consts.S(n);
    const double l1 = consts.Lambda(1);
    const double ln = consts.Lambda(n);
    ModeMatrix mm;
    mm.n = n;
    mm.b = b;
    mm.omega = omega;
    mm.m11 = omega - s + b * b * l1;
    mm.m12 = -b * b * ln;
    mm.m21 = b * ln;
    mm.m22 = b * omega + s - b * l1;
    return mm;
}

QuadraticCoeffs quadratic_coeffs(int n, double b, const AnnulusConstants& consts) {
    require_mode(n, 2);
    require_matching_table(b, consts);
    const double s = consts.S(n);
    const double l1 = consts.Lambda(1);
    const double ln = consts.Lambda(n);
    QuadraticCoeffs q;
    q.C = 1.0 + (1.0 / b - 1.0) * s - (1.0 - b * b) * l1;
    q.D = -4.0 / b * s * s + 2.0 * (1.0 / b - 1.0 + 2.0 * (1.0 + b) * l1) * s - 4.0 * b * b * (l1 * l1 - ln * ln) -
          2.0 * (1.0 - b * b) * l1 + 1.0;
    return q;
}

Discriminant discriminant(int n, double b, const AnnulusConstants& consts) {
    require_mode(n, 1);
    require_matching_table(b, consts);
    const double s = consts.S(n);
    const double l1 = consts.Lambda(1);
    const double ln = consts.Lambda(n);
    const double core = (1.0 / b + 1.0) * s - (1.0 + b * b) * l1;
    Discriminant d;
    d.delta = core * core - 4.0 * b * b * ln * ln;
    d.E = core - 2.0 * b * ln;
    d.F = core + 2.0 * b * ln;
    return d;
}

int threshold_N(double b, const AnnulusConstants& consts) {
    require_matching_table(b, consts);
    for (int n = 2; n <= consts.n_max(); ++n) {
        if (discriminant(n, b, consts).E > 0.0) {
            return n;
        }
    }
    throw TableExhausted(fmt::format("E_n({}) stays non-positive up to n_max = {}; raise n_max", b, consts.n_max()));
}

int threshold_remark(double b, const AnnulusConstants& consts) {
    require_matching_table(b, consts);
    const double l1 = consts.Lambda(1);
    for (int n = 2; n <= consts.n_max(); ++n) {
        const double rhs = b * ((1.0 + b * b) / (1.0 + b) * l1 + 2.0 * b / (1.0 + b) * consts.Lambda(n));
        if (consts.S(n) > rhs) {
            return n;
        }
    }
    throw TableExhausted(fmt::format("threshold inequality fails up to n_max = {} at b = {}", consts.n_max(), b));
}

SpectrumRow bifurcation_row(int m, double b, const AnnulusConstants& consts) {
    require_mode(m, 2);
    const auto q = quadratic_coeffs(m, b, consts);
    const auto d = discriminant(m, b, consts);
    if (!(d.delta > 0.0)) {
        throw NotSimple(fmt::format("Delta_{}({}) = {} is not positive; no simple real eigenvalue", m, b, d.delta));
    }
    const double root = std::sqrt(d.delta);
    SpectrumRow row;
    row.m = m;
    row.b = b;
    row.c_m = q.C;
    row.d_m = q.D;
    row.delta_m = d.delta;
    row.lambda_minus = q.C - root;
    row.lambda_plus = q.C + root;
    row.omega_plus = 0.5 * (1.0 - row.lambda_minus);
    row.omega_minus = 0.5 * (1.0 - row.lambda_plus);
    row.transversal = d.delta > kTransversalityFloor;
    return row;
}

KernelVector kernel_vector(int m, double b, double omega, const AnnulusConstants& consts) {
    const auto mm = mode_matrix(m, b, omega, consts);
    KernelVector v;
    v.m = m;
    v.omega = omega;
    v.v1 = omega + consts.S(m) / b - consts.Lambda(1);
    v.v2 = -consts.Lambda(m);
    const double r1 = mm.m11 * v.v1 + mm.m12 * v.v2;
    const double r2 = mm.m21 * v.v1 + mm.m22 * v.v2;
    const double entry = std::max({std::abs(mm.m11), std::abs(mm.m12), std::abs(mm.m21), std::abs(mm.m22)});
    const double scale = std::max(1.0, entry * std::max(std::abs(v.v1), std::abs(v.v2)));
    if (std::max(std::abs(r1), std::abs(r2)) > 1e-10 * scale) {
        throw NotAnEigenvalue(fmt::format("Omega = {} is not an eigenvalue of M_{} at b = {} (|M v| = {:.3g})", omega,
                                          m, b, std::max(std::abs(r1), std::abs(r2))));
    }
    return v;
}

MonotonicityReport eigenvalue_monotonicity_scan(double b, int n_hi, const AnnulusConstants& consts) {
    MonotonicityReport rep;
    rep.b = b;
    rep.n_hi = n_hi;
    rep.threshold = threshold_N(b, consts);
    if (n_hi > consts.n_max()) {
        throw IndexOutOfTable(fmt::format("scan to n = {} exceeds table size {}", n_hi, consts.n_max()));
    }
    const int lo = rep.threshold;
    if (n_hi <= lo) {
        return rep;
    }
    std::vector<SpectrumRow> rows;
    for (int n = lo; n <= n_hi; ++n) {
        rows.push_back(bifurcation_row(n, b, consts));
    }
    auto note = [&](const std::string& what) { rep.violations.push_back(what); };
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto& cur = rows[i];
        const auto& next = rows[i + 1];
        if (!(next.delta_m > cur.delta_m)) note(fmt::format("Delta not increasing at n = {}", cur.m));
        if (!(next.lambda_plus > cur.lambda_plus)) note(fmt::format("lambda+ not increasing at n = {}", cur.m));
        if (!(next.lambda_minus < cur.lambda_minus)) note(fmt::format("lambda- not decreasing at n = {}", cur.m));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const auto& n = rows[i];
            const auto& m = rows[j];
            const bool nested = m.lambda_minus < n.lambda_minus && n.lambda_minus < n.lambda_plus &&
                                n.lambda_plus < m.lambda_plus;
            if (!nested) note(fmt::format("interleaving fails for n = {}, m = {}", n.m, m.m));
        }
    }
    return rep;
}

} // namespace vstates
