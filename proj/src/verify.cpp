#include "vstates/verify.hpp"

#include "vstates/contour.hpp"
#include "vstates/errors.hpp"
#include "vstates/quadrature.hpp"
#include "vstates/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/core.h>
#include "json.hpp"

namespace vstates {

namespace {

using cplx = std::complex<double>;

const std::map<std::string, double, std::less<>>& tolerance_table() {
    static const std::map<std::string, double, std::less<>> table{
        {"contour.annulus", 1e-8},
        {"linearization.blocks", 1e-5},
        {"linearization.offblock", 1e-7},
        {"quadrature.c1_c2", 1e-7},
        {"quadrature.c1_c2_rotation", 1e-12},
        {"quadrature.c3_c8", 1e-7},
        {"spectral.det_quadratic", 1e-12},
        {"spectral.discriminant", 1e-10},
        {"spectral.e1_identity", 1e-12},
        {"spectral.kernel", 1e-10},
        {"spectral.monotonicity", 0.0},
        {"spectral.threshold_routes", 0.0},
        {"specfun.contiguous", 1e-10},
        {"specfun.hypergeometric", 1e-10},
        {"specfun.lambda_oracle", 1e-8},
    };
    return table;
}

Hyper2F1Input random_input(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ua(-2.0, 3.0), ub(0.05, 3.0), ugap(0.05, 3.0), uz(0.0, 0.81);
    Hyper2F1Input in;
    in.a = ua(rng);
    in.b = ub(rng);
    in.c = in.b + ugap(rng);
    do {
        in.z = uz(rng);
    } while (in.z == 0.0);
    return in;
}

// (x)_n / n!
double rising_ratio(double x, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= (x + k) / (k + 1.0);
    return r;
}

int table_size(int m_hi) { return std::max(m_hi, 200); }

int smallest_multiple_at_least(int block, int floor) { return ((floor + block - 1) / block) * block; }

} // namespace

double tolerance_for(std::string_view name) {
    const auto& table = tolerance_table();
    const auto it = table.find(name);
    if (it == table.end()) {
        throw PreconditionViolated(fmt::format("no tolerance registered for check '{}'", name));
    }
    return it->second;
}

CheckReport make_report(std::string name, double max_error, int cases) {
    CheckReport r;
    r.tolerance = tolerance_for(name);
    r.name = std::move(name);
    r.max_error = max_error;
    r.cases = cases;
    r.passed = std::isfinite(max_error) && max_error <= r.tolerance;
    return r;
}

CheckReport check_hypergeometric(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const auto in = random_input(rng);
        const double series = gauss_2f1(in);
        const double euler = gauss_2f1_euler(in);
        worst = std::max(worst, std::abs(series - euler) / (1.0 + std::abs(series)));
    }
    return make_report("specfun.hypergeometric", worst, samples);
}

CheckReport check_contiguous(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const auto in = random_input(rng);
        const auto res = contiguous_residuals(in);
        const auto scale = contiguous_scales(in);
        for (int k = 0; k < 4; ++k) {
            worst = std::max(worst, std::abs(res[k]) / std::max(1.0, scale[k]));
        }
    }
    return make_report("specfun.contiguous", worst, 4 * samples);
}

CheckReport check_lambda_oracle(const std::vector<double>& b_set, int n_max) {
    double worst = 0.0;
    int cases = 0;
    for (double b : b_set) {
        for (int n = 1; n <= n_max; ++n) {
            worst = std::max(worst, std::abs(lambda_coeff(n, b) - lambda_integral_oracle(n, b)));
            ++cases;
        }
    }
    return make_report("specfun.lambda_oracle", worst, cases);
}

std::vector<CheckReport> check_c1_c2(int n_max, int samples, int P, std::uint64_t seed) {
    if (P < 64 || P % 2 != 0) {
        throw PreconditionViolated(fmt::format("quadrature size P = {} must be even and at least 64", P));
    }
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * std::numbers::pi);
    std::vector<double> thetas(samples);
    for (auto& t : thetas) t = ut(rng);

    double worst = 0.0;
    double spread = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        double odd_sum = 0.0;
        for (int k = 0; k < n; ++k) odd_sum += 1.0 / (2.0 * k + 1.0);
        const double c1_coef = -2.0 / std::numbers::pi * odd_sum;
        const double c2_coef = 2.0 / std::numbers::pi * (odd_sum - 1.0 + 1.0 / (2.0 * n + 1.0));
        constexpr double inf = std::numeric_limits<double>::infinity();
        double lo1 = inf, hi1 = 0.0, lo2 = inf, hi2 = 0.0;
        for (double theta : thetas) {
            const cplx w = std::polar(1.0, theta);
            const cplx wn = std::polar(1.0, n * theta);
            const auto q1 = quad::offset_mean(
                [&](double eta) {
                    const cplx tau = w * std::polar(1.0, eta);
                    return (std::polar(1.0, n * (theta + eta)) - wn) / std::abs(w - tau);
                },
                P);
            const auto q2 = quad::offset_mean(
                [&](double eta) {
                    const cplx tau = w * std::polar(1.0, eta);
                    const double d = std::abs(w - tau);
                    return (tau - w) * (tau - w) * (std::polar(1.0, n * (theta + eta)) - wn) / (d * d * d);
                },
                P);
            const double e1 = std::abs(q1 - c1_coef * wn);
            const double e2 = std::abs(q2 - c2_coef * wn * w * w);
            worst = std::max({worst, e1, e2});
            lo1 = std::min(lo1, e1);
            hi1 = std::max(hi1, e1);
            lo2 = std::min(lo2, e2);
            hi2 = std::max(hi2, e2);
        }
        spread = std::max({spread, hi1 - lo1, hi2 - lo2});
    }
    const int cases = 2 * n_max * samples;
    return {make_report("quadrature.c1_c2", worst, cases), make_report("quadrature.c1_c2_rotation", spread, cases)};
}

CheckReport check_c3_c8(const std::vector<double>& b_set, int n_max, std::uint64_t seed) {
    constexpr int P = 2048;
    std::mt19937_64 rng(seed + 2);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * std::numbers::pi), uw(-1.0, 1.0);
    double worst = 0.0;
    int cases = 0;
    auto note = [&](cplx lhs, cplx rhs) {
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        ++cases;
    };
    // (1 / 2 pi i) times the contour integral of f(tau) d tau
    auto contour_mean = [](auto&& f) {
        cplx sum{0.0, 0.0};
        for (int k = 0; k < P; ++k) {
            const cplx tau = std::polar(1.0, 2.0 * std::numbers::pi * k / P);
            sum += f(tau) * tau;
        }
        return sum / static_cast<double>(P);
    };
    for (double b : b_set) {
        if (!(b > 0.0 && b < 1.0)) {
            throw PreconditionViolated(fmt::format("b = {} is outside (0, 1)", b));
        }
        const double b2 = b * b;
        for (int n = 1; n <= n_max; ++n) {
            const cplx w = std::polar(1.0, ut(rng));
            const cplx wn = std::pow(w, n);
            const double wa = uw(rng);
            const double wc = uw(rng);
            const double bn = std::pow(b, n);

            const double half = bn * rising_ratio(0.5, n) * gauss_2f1(0.5, n + 0.5, n + 1.0, b2);
            const double three_half = bn * rising_ratio(1.5, n) * gauss_2f1(1.5, n + 1.5, n + 1.0, b2);

            note(contour_mean([&](cplx t) { return std::pow(t, n - 1) / std::abs(b * t - w); }), wn * half);
            note(contour_mean([&](cplx t) { return std::pow(std::conj(t), n + 1) / std::abs(b * t - w); }),
                 std::conj(wn) * half);
            note(contour_mean([&](cplx t) { return std::pow(std::conj(t), n + 1) / std::pow(std::abs(w - b * t), 3); }),
                 std::conj(wn) * three_half);
            note(contour_mean([&](cplx t) { return std::pow(t, n - 1) / std::pow(std::abs(w - b * t), 3); }),
                 wn * three_half);

            const cplx c7 = contour_mean([&](cplx t) {
                return (b * t - w) * (wa * wn - wc * std::pow(t, n)) / std::pow(std::abs(w - b * t), 3);
            });
            const cplx r7 = -wn * w * w * b *
                            (1.5 * wa * gauss_2f1(0.5, 2.5, 2.0, b2) -
                             wc * bn * rising_ratio(1.5, n + 1) * gauss_2f1(0.5, n + 2.5, n + 2.0, b2));
            note(c7, r7);

            const cplx c8 = contour_mean([&](cplx t) {
                return (b * w - t) * (wc * wn - wa * std::pow(t, n)) / std::pow(std::abs(w - b * t), 3);
            });
            const cplx r8 = -wn * w * w * b2 *
                            (0.375 * wc * gauss_2f1(1.5, 2.5, 3.0, b2) -
                             wa * bn * rising_ratio(0.5, n + 2) * gauss_2f1(1.5, n + 2.5, n + 3.0, b2));
            note(c8, r8);
        }
    }
    return make_report("quadrature.c3_c8", worst, cases);
}

std::vector<CheckReport> check_spectral(const std::vector<double>& b_set, int m_hi, int random_draws,
                                        std::uint64_t seed) {
    std::vector<double> bs = b_set;
    std::sort(bs.begin(), bs.end());
    std::vector<AnnulusConstants> tables;
    tables.reserve(bs.size());
    for (double b : bs) tables.emplace_back(b, table_size(m_hi));

    int violations = 0;
    int mono_cases = 0;
    double kernel_worst = 0.0;
    int kernel_cases = 0;
    int route_mismatch = 0;
    double e1_worst = 0.0;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const double b = bs[i];
        const auto& k = tables[i];
        for (int n = 1; n < m_hi; ++n) {
            ++mono_cases;
            if (!(k.S(n + 1) > k.S(n))) ++violations;
            if (!(k.Lambda(n + 1) < k.Lambda(n))) ++violations;
            if (i + 1 < bs.size() && !(k.Lambda(n) < tables[i + 1].Lambda(n))) ++violations;
        }
        const auto scan = eigenvalue_monotonicity_scan(b, m_hi, k);
        violations += static_cast<int>(scan.violations.size());

        const int n0 = threshold_N(b, k);
        if (threshold_remark(b, k) != n0) ++route_mismatch;
        const double e1 = discriminant(1, b, k).E;
        const double e1_closed = -(1.0 + b) * (1.0 + b) * k.Lambda(1);
        e1_worst = std::max(e1_worst, std::abs(e1 - e1_closed) / std::abs(e1_closed));

        for (int m = n0; m <= m_hi; ++m) {
            const auto row = bifurcation_row(m, b, k);
            for (double om : {row.omega_plus, row.omega_minus}) {
                const auto mm = mode_matrix(m, b, om, k);
                const double v1 = om + k.S(m) / b - k.Lambda(1);
                const double v2 = -k.Lambda(m);
                const double r = std::max(std::abs(mm.m11 * v1 + mm.m12 * v2), std::abs(mm.m21 * v1 + mm.m22 * v2));
                const double entry = std::max({std::abs(mm.m11), std::abs(mm.m12), std::abs(mm.m21), std::abs(mm.m22)});
                kernel_worst = std::max(kernel_worst, r / std::max(1.0, entry * std::max(std::abs(v1), std::abs(v2))));
                ++kernel_cases;
            }
        }
    }

    std::mt19937_64 rng(seed + 3);
    std::uniform_int_distribution<int> un(2, std::max(2, m_hi));
    std::uniform_real_distribution<double> ub(0.05, 0.95), uo(-2.0, 2.0);
    double det_worst = 0.0;
    double delta_worst = 0.0;
    for (int i = 0; i < random_draws; ++i) {
        const int n = un(rng);
        const double b = ub(rng);
        const double omega = uo(rng);
        const AnnulusConstants k(b, n);
        const auto mm = mode_matrix(n, b, omega, k);
        const auto q = quadratic_coeffs(n, b, k);
        const double lambda = 1.0 - 2.0 * omega;
        const double quad_form = b / 4.0 * (lambda * lambda - 2.0 * q.C * lambda + q.D);
        const double scale =
            std::max(mm.det_scale(), b / 4.0 * std::max({lambda * lambda, std::abs(2.0 * q.C * lambda), std::abs(q.D)}));
        det_worst = std::max(det_worst, std::abs(mm.det() - quad_form) / scale);
        const double delta = discriminant(n, b, k).delta;
        const double dscale = std::max({1.0, q.C * q.C, std::abs(q.D)});
        delta_worst = std::max(delta_worst, std::abs(delta - (q.C * q.C - q.D)) / dscale);
    }

    const int nb = static_cast<int>(bs.size());
    return {
        make_report("spectral.det_quadratic", det_worst, random_draws),
        make_report("spectral.discriminant", delta_worst, random_draws),
        make_report("spectral.e1_identity", e1_worst, nb),
        make_report("spectral.kernel", kernel_worst, kernel_cases),
        make_report("spectral.monotonicity", violations, mono_cases),
        make_report("spectral.threshold_routes", route_mismatch, nb),
    };
}

std::vector<CheckReport> check_linearization(const std::vector<double>& b_set, const std::vector<int>& modes) {
    double worst = 0.0;
    double off = 0.0;
    int cases = 0;
    for (double b : b_set) {
        const AnnulusConstants k(b, 400);
        const int m = threshold_N(b, k) + 1;
        int block = 1;
        for (int n : modes) block = std::lcm(block, 4 * n * m);
        const int P = smallest_multiple_at_least(block, 4096);
        for (int n : modes) {
            const auto lc = linearization_check(m, b, 0.0, n, 1e-6, P, k);
            worst = std::max(worst, lc.rel_error);
            off = std::max(off, lc.offblock);
            ++cases;
        }
    }
    return {make_report("linearization.blocks", worst, cases), make_report("linearization.offblock", off, cases)};
}

CheckReport check_annulus(const std::vector<double>& b_set, const std::vector<double>& omegas) {
    double worst = 0.0;
    int cases = 0;
    for (double b : b_set) {
        for (double om : omegas) {
            const auto r = residual(PatchPair::annulus(b, 2, 4, om), 2048);
            worst = std::max({worst, r.max_abs(), r.leak, r.even_part});
            ++cases;
        }
    }
    return make_report("contour.annulus", worst, cases);
}

std::vector<CheckReport> default_suite(std::uint64_t seed) {
    std::vector<CheckReport> out;
    auto add = [&](std::vector<CheckReport> more) { out.insert(out.end(), more.begin(), more.end()); };
    out.push_back(check_hypergeometric(100, seed));
    out.push_back(check_contiguous(100, seed));
    out.push_back(check_lambda_oracle({0.2, 0.5, 0.8}, 50));
    add(check_c1_c2(20, 8, 65536, seed));
    out.push_back(check_c3_c8({0.3, 0.6}, 10, seed));
    add(check_spectral({0.2, 0.5, 0.8}, 200, 1000, seed));
    add(check_linearization({0.5, 0.7}, {1, 2}));
    out.push_back(check_annulus({0.3, 0.5, 0.7}, {-1.0, 0.0, 0.5, 1.0}));
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
    return out;
}

std::string format_table(const std::vector<CheckReport>& reports) {
    std::string out = fmt::format("{:<28} {:>12} {:>12} {:>7} {}\n", "check", "max_error", "tolerance", "cases",
                                  "status");
    for (const auto& r : reports) {
        out += fmt::format("{:<28} {:>12.3e} {:>12.3e} {:>7} {}\n", r.name, r.max_error, r.tolerance, r.cases,
                           r.passed ? "PASS" : "FAIL");
    }
    return out;
}

std::string format_json(const std::vector<CheckReport>& reports) {
    auto arr = nlohmann::json::array();
    for (const auto& r : reports) {
        arr.push_back({{"name", r.name},
                       {"max_error", r.max_error},
                       {"tolerance", r.tolerance},
                       {"passed", r.passed},
                       {"cases", r.cases}});
    }
    return arr.dump(2) + "\n";
}

} // namespace vstates
