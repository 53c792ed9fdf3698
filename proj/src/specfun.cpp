#include "vstates/specfun.hpp"

#include "vstates/errors.hpp"
#include "vstates/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fmt/core.h>

namespace vstates {

namespace {

constexpr double kSeriesTol = 1e-15;
constexpr int kSeriesMaxTerms = 100000;

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

void require_radius(double b, const char* who) {
    if (!(b > 0.0 && b < 1.0)) {
        throw PreconditionViolated(fmt::format("{}: b = {} is outside (0, 1)", who, b));
    }
}

} // namespace

void Hyper2F1Input::validate() const {
    if (is_nonpositive_integer(c)) {
        throw PreconditionViolated(fmt::format("2F1: c = {} is a non-positive integer", c));
    }
    if (!(z >= 0.0 && z < 1.0)) {
        throw PreconditionViolated(fmt::format("2F1: z = {} is outside [0, 1)", z));
    }
}

double pochhammer(double x, unsigned n) {
    double p = 1.0;
    for (unsigned k = 0; k < n; ++k) {
        p *= x + k;
    }
    if (!std::isfinite(p)) {
        throw std::range_error(fmt::format("pochhammer({}, {}) overflows", x, n));
    }
    return p;
}

double gauss_2f1(const Hyper2F1Input& in) {
    in.validate();
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < kSeriesMaxTerms; ++k) {
        term *= (in.a + k) * (in.b + k) / ((in.c + k) * (k + 1.0)) * in.z;
        sum += term;
        if (std::abs(term) < kSeriesTol * std::abs(sum)) {
            return sum;
        }
    }
    throw NonConvergence(fmt::format("2F1({}, {}, {}; {}): series not converged after {} terms", in.a,
                                     in.b, in.c, in.z, kSeriesMaxTerms));
}

double gauss_2f1(double a, double b, double c, double z) { return gauss_2f1(Hyper2F1Input{a, b, c, z}); }

double gauss_2f1_euler(const Hyper2F1Input& in) {
    in.validate();
    if (!(in.b > 0.0) || !(in.c > in.b)) {
        throw PreconditionViolated(
            fmt::format("Euler integral needs c > b > 0, got b = {}, c = {}", in.b, in.c));
    }
    const double beta = in.b;
    const double gamma = in.c - in.b;
    auto g = [&](double x) { return std::pow(1.0 - in.z * x, -in.a); };

    // [0, 1/2]: x = u^{1/beta} absorbs x^{beta-1} dx = du / beta.
    auto left = [&](double u) {
        const double x = std::pow(u, 1.0 / beta);
        return std::pow(1.0 - x, gamma - 1.0) * g(x) / beta;
    };
    // [1/2, 1]: 1 - x = v^{1/gamma} absorbs (1-x)^{gamma-1} dx = dv / gamma.
    auto right = [&](double v) {
        const double x = 1.0 - std::pow(v, 1.0 / gamma);
        return std::pow(x, beta - 1.0) * g(x) / gamma;
    };
    const double integral =
        quad::integrate(left, 0.0, std::pow(0.5, beta)) + quad::integrate(right, 0.0, std::pow(0.5, gamma));
    const double log_norm = std::lgamma(in.c) - std::lgamma(beta) - std::lgamma(gamma);
    return std::exp(log_norm) * integral;
}

double s_sum(int n) {
    if (n < 1) {
        throw PreconditionViolated(fmt::format("S_n needs n >= 1, got {}", n));
    }
    double sum = 0.0;
    for (int k = 1; k < n; ++k) {
        sum += 1.0 / (2.0 * k + 1.0);
    }
    return 2.0 / std::numbers::pi * sum;
}

double lambda_coeff(int n, double b) {
    if (n < 1) {
        throw PreconditionViolated(fmt::format("Lambda_n needs n >= 1, got {}", n));
    }
    require_radius(b, "Lambda_n");
    // (1/2)_n / n! accumulated as a product of ratios so nothing overflows.
    double prefactor = 1.0;
    for (int k = 0; k < n; ++k) {
        prefactor *= (0.5 + k) / (k + 1.0);
    }
    prefactor *= std::pow(b, n - 1);
    return prefactor * gauss_2f1(0.5, n + 0.5, n + 1.0, b * b);
}

double lambda_integral_oracle(int n, double b) {
    if (n < 1) {
        throw PreconditionViolated(fmt::format("Lambda_n needs n >= 1, got {}", n));
    }
    require_radius(b, "Lambda_n oracle");
    const double b2 = b * b;
    auto integrand = [&](double u) {
        const double x = 1.0 - u * u;
        return 2.0 * std::pow(x, n - 0.5) / std::sqrt(1.0 - b2 * x);
    };
    return std::pow(b, n - 1) / std::numbers::pi * quad::integrate(integrand, 0.0, 1.0);
}

std::array<double, 4> contiguous_residuals(const Hyper2F1Input& in) {
    const auto [a, b, c, z] = in;
    const double f = gauss_2f1(a, b, c, z);
    const double fa1 = gauss_2f1(a + 1, b, c, z);
    const double fb1 = gauss_2f1(a, b + 1, c, z);
    const double fabc1 = gauss_2f1(a + 1, b + 1, c + 1, z);
    const double fc1 = gauss_2f1(a, b, c + 1, z);
    const double fbc1 = gauss_2f1(a, b + 1, c + 1, z);
    return {
        c * f - c * fa1 + b * z * fabc1,
        c * f - c * fb1 + a * z * fabc1,
        b * fb1 - a * fa1 + (a - b) * f,
        c * f - (c - b) * fc1 - b * fbc1,
    };
}

std::array<double, 4> contiguous_scales(const Hyper2F1Input& in) {
    const auto [a, b, c, z] = in;
    const double f = gauss_2f1(a, b, c, z);
    const double fa1 = gauss_2f1(a + 1, b, c, z);
    const double fb1 = gauss_2f1(a, b + 1, c, z);
    const double fabc1 = gauss_2f1(a + 1, b + 1, c + 1, z);
    const double fc1 = gauss_2f1(a, b, c + 1, z);
    const double fbc1 = gauss_2f1(a, b + 1, c + 1, z);
    auto mx = [](std::initializer_list<double> v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    return {
        mx({c * f, c * fa1, b * z * fabc1}),
        mx({c * f, c * fb1, a * z * fabc1}),
        mx({b * fb1, a * fa1, (a - b) * f}),
        mx({c * f, (c - b) * fc1, b * fbc1}),
    };
}

AnnulusConstants::AnnulusConstants(double b, int n_max) : b_(b), n_max_(n_max) {
    require_radius(b, "AnnulusConstants");
    if (n_max < 1) {
        throw PreconditionViolated(fmt::format("AnnulusConstants: n_max = {} must be positive", n_max));
    }
    s_.resize(static_cast<std::size_t>(n_max));
    lambda_.resize(static_cast<std::size_t>(n_max));
    double partial = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        s_[n - 1] = 2.0 / std::numbers::pi * partial;
        partial += 1.0 / (2.0 * n + 1.0);
        lambda_[n - 1] = lambda_coeff(n, b);
    }
}

int AnnulusConstants::default_n_max(int modes, int fold) { return std::max(200, 4 * modes * fold); }

double AnnulusConstants::S(int n) const {
    if (n < 1 || n > n_max_) {
        throw IndexOutOfTable(fmt::format("S_{} requested but the table holds n = 1..{}", n, n_max_));
    }
    return s_[n - 1];
}

double AnnulusConstants::Lambda(int n) const {
    if (n < 1 || n > n_max_) {
        throw IndexOutOfTable(fmt::format("Lambda_{} requested but the table holds n = 1..{}", n, n_max_));
    }
    return lambda_[n - 1];
}

} // namespace vstates
