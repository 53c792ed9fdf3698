#include "vstates/continuation.hpp"
#include "vstates/errors.hpp"
#include "vstates/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

using namespace vstates;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

const CheckReport& find(const std::vector<CheckReport>& reps, const std::string& name) {
    for (const auto& r : reps) {
        if (r.name == name) return r;
    }
    throw std::runtime_error("missing report " + name);
}

std::string describe(const CheckReport& r) {
    return fmt::format("{} max_error={:.3e} tol={:.1e} cases={}", r.name, r.max_error, r.tolerance, r.cases);
}

Outcome from_reports(std::initializer_list<CheckReport> reps) {
    Outcome out{true, ""};
    for (const auto& r : reps) {
        out.passed = out.passed && r.passed;
        if (!out.detail.empty()) out.detail += "; ";
        out.detail += describe(r);
    }
    return out;
}

const std::vector<double> kThreeRadii{0.2, 0.5, 0.8};

std::vector<CheckReport>& spectral_reports() {
    static auto reps = check_spectral(kThreeRadii, 200, 1000);
    return reps;
}

Outcome criterion1() { return from_reports({check_hypergeometric(100)}); }

Outcome criterion2() { return from_reports({check_contiguous(100)}); }

Outcome criterion3() { return from_reports({check_lambda_oracle(kThreeRadii, 50)}); }

Outcome criterion4() {
    const auto& reps = spectral_reports();
    return from_reports({find(reps, "spectral.det_quadratic"), find(reps, "spectral.discriminant")});
}

Outcome criterion5() { return from_reports({find(spectral_reports(), "spectral.monotonicity")}); }

Outcome criterion6() {
    std::vector<double> nine;
    for (int i = 1; i <= 9; ++i) nine.push_back(0.1 * i);
    const auto reps = check_spectral(nine, 200, 0);
    return from_reports({find(reps, "spectral.threshold_routes"), find(reps, "spectral.e1_identity")});
}

Outcome criterion7() { return from_reports({check_annulus({0.3, 0.5, 0.7}, {-1.0, 0.0, 0.5, 1.0})}); }

Outcome criterion8() {
    const auto reps = check_linearization({0.5, 0.7}, {1, 2});
    return from_reports({reps[0], reps[1]});
}

Outcome criterion9() {
    const auto c12 = check_c1_c2(20, 8, 65536);
    return from_reports({c12[0], c12[1], check_c3_c8({0.3, 0.6}, 10)});
}

Outcome criterion10() {
    constexpr double b = 0.6;
    constexpr int K = 8;
    constexpr int P = 8000;
    constexpr double tol = 1e-10;
    const AnnulusConstants consts(b, AnnulusConstants::default_n_max(K, 10));
    const int m = threshold_N(b, consts) + 1;
    const auto row = bifurcation_row(m, b, consts);

    bool ok = true;
    std::string detail = fmt::format("b={} m={} K={} P={}", b, m, K, P);
    for (auto sign : {Branch::plus, Branch::minus}) {
        const double omega_m = row.omega(sign);
        const auto branch = branch_continue(m, b, sign, 10, 1e-3, K, P, consts, tol);
        double worst = 0.0;
        for (const auto& pt : branch.points) worst = std::max(worst, pt.residual_norm);
        const bool complete = branch.points.size() == 11 && branch.stopped_reason.empty();

        // Omega(s) - Omega_m at s = ds for ds = 1e-3, 5e-4, 2.5e-4; each halving
        // must at least halve the gap.
        std::vector<double> gaps{std::abs(branch.points.at(1).patch.omega - omega_m)};
        BranchPoint smallest = branch.points.at(1);
        for (double ds : {5e-4, 2.5e-4}) {
            const auto one = branch_continue(m, b, sign, 1, ds, K, P, consts, tol);
            if (one.points.size() != 2) {
                ok = false;
                detail += fmt::format("; {}: ds={} failed ({})", to_string(sign), ds, one.stopped_reason);
                break;
            }
            gaps.push_back(std::abs(one.points[1].patch.omega - omega_m));
            smallest = one.points[1];
            worst = std::max(worst, one.points[1].residual_norm);
        }
        bool first_order = gaps.size() == 3;
        for (std::size_t i = 1; i < gaps.size(); ++i) first_order = first_order && gaps[i] <= 0.5 * gaps[i - 1];

        const auto kv = kernel_vector(m, b, omega_m, consts);
        const double kernel_ratio = kv.v2 / kv.v1;
        const double ratio = smallest.patch.c[0] / smallest.patch.a[0];
        const double ratio_err = std::abs(ratio - kernel_ratio) / std::abs(kernel_ratio);

        const bool sign_ok = complete && worst <= tol && first_order && ratio_err <= 0.05;
        ok = ok && sign_ok;
        detail += fmt::format("; {}: points={} max_residual={:.2e} gaps=[", to_string(sign), branch.points.size(), worst);
        for (std::size_t i = 0; i < gaps.size(); ++i) detail += fmt::format("{}{:.3e}", i ? "," : "", gaps[i]);
        detail += fmt::format("] c1/a1={:.6g} kernel={:.6g} rel={:.2e}", ratio, kernel_ratio, ratio_err);
        if (!branch.stopped_reason.empty()) detail += " stopped: " + branch.stopped_reason;
    }
    return {ok, detail};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"2F1 series vs Euler integral", criterion1},
        {"contiguous relations", criterion2},
        {"Lambda_n closed form vs integral", criterion3},
        {"determinant identity and discriminant", criterion4},
        {"monotonicity and interleaving", criterion5},
        {"threshold routes and E_1", criterion6},
        {"annulus is a solution", criterion7},
        {"linearized operator blocks", criterion8},
        {"singular integral identities", criterion9},
        {"branch continuation", criterion10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome res{false, ""};
        try {
            res = criteria[i].second();
        } catch (const std::exception& e) {
            res = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!res.passed) ++failures;
        std::printf("%s %zu %s (%.1fs) %s\n", res.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    res.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
