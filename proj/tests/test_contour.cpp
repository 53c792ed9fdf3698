#include "doctest.h"

#include "vstates/contour.hpp"
#include "vstates/errors.hpp"
#include "vstates/spectrum.hpp"

#include <cmath>
#include <numbers>

using namespace vstates;

namespace {

constexpr double kPi = std::numbers::pi;

PatchPair perturbed(double b, int m, int K) {
    auto p = PatchPair::annulus(b, m, K, 0.3);
    p.a[0] = 0.01;
    p.c[0] = 0.005;
    if (K > 1) {
        p.a[1] = -0.002;
        p.c[1] = 0.001;
    }
    return p;
}

double max_diff(const ResidualSpectrum& x, const ResidualSpectrum& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.r1.size(); ++i) {
        d = std::max({d, std::abs(x.r1[i] - y.r1[i]), std::abs(x.r2[i] - y.r2[i])});
    }
    return d;
}

} // namespace

TEST_CASE("patch validation and guard") {
    auto p = PatchPair::annulus(0.5, 3, 2, 0.1);
    CHECK_NOTHROW(p.validate());
    CHECK(p.guard_limit() == doctest::Approx(0.25));
    p.a[1] = 0.05;
    CHECK(p.guard_sum() == doctest::Approx(0.25));
    CHECK_THROWS_AS(p.validate(), GuardViolation);
    auto q = PatchPair::annulus(0.5, 1, 2, 0.1);
    CHECK_THROWS_AS(q.validate(), PreconditionViolated);
    auto r = PatchPair::annulus(0.5, 3, 2, 0.1);
    r.c.pop_back();
    CHECK_THROWS_AS(r.validate(), PreconditionViolated);
}

TEST_CASE("eval_maps") {
    const auto annulus = PatchPair::annulus(0.4, 3, 2, 0.0);
    for (double t : {0.0, 0.7, 2.5}) {
        const auto s = eval_maps(annulus, t);
        const cplx w = std::polar(1.0, t);
        const cplx i{0.0, 1.0};
        CHECK(std::abs(s.z1 - w) < 1e-15);
        CHECK(std::abs(s.z2 - 0.4 * w) < 1e-15);
        CHECK(std::abs(s.dz1 - i * w) < 1e-15);
        CHECK(std::abs(s.dz2 - 0.4 * i * w) < 1e-15);
    }
    auto one = PatchPair::annulus(0.4, 3, 1, 0.0);
    one.a[0] = 0.02;
    const double t = 1.1;
    CHECK(std::abs(eval_maps(one, t).z1 - (std::polar(1.0, t) + 0.02 * std::polar(1.0, -2.0 * t))) < 1e-15);

    const auto p = perturbed(0.5, 4, 2);
    const double h = 1e-5;
    for (double th : {0.3, 1.9, 4.0}) {
        const auto s = eval_maps(p, th);
        const auto up = eval_maps(p, th + h);
        const auto dn = eval_maps(p, th - h);
        CHECK(std::abs((up.z1 - dn.z1) / (2 * h) - s.dz1) < 1e-8);
        CHECK(std::abs((up.z2 - dn.z2) / (2 * h) - s.dz2) < 1e-8);
    }
}

TEST_CASE("stream_integral on the annulus") {
    const double b = 0.5;
    const auto p = PatchPair::annulus(b, 3, 1, 0.0);
    for (double t : {0.0, 0.7, 3.0}) {
        const cplx w = std::polar(1.0, t);
        CHECK(std::abs(stream_integral(1, 1, p, t, 4096) + 2.0 / kPi * w) <= 1e-7);
        CHECK(std::abs(stream_integral(2, 2, p, t, 4096) + 2.0 / kPi * w) <= 1e-7);
        const double b2 = b * b;
        const cplx cross = w * (b2 / 2 * gauss_2f1(0.5, 1.5, 2.0, b2) - gauss_2f1(0.5, 0.5, 1.0, b2));
        CHECK(std::abs(stream_integral(2, 1, p, t, 256) - cross) <= 1e-12);
    }
    CHECK_THROWS_AS(stream_integral(1, 1, p, 0.0, 63), PreconditionViolated);
    CHECK_THROWS_AS(stream_integral(1, 1, p, 0.0, 32), PreconditionViolated);
    CHECK_THROWS_AS(stream_integral(3, 1, p, 0.0, 64), PreconditionViolated);
}

TEST_CASE("stream_integral detects colliding boundaries") {
    // With c_1 = b and m = 2 the inner curve is the segment 2b cos(eta); the
    // outer point at theta = 0 is placed exactly on its first node.
    const int P = 64;
    auto p = PatchPair::annulus(0.5, 2, 1, 0.0);
    p.c[0] = 0.5;
    p.a[0] = std::cos(kPi / P) - 1.0;
    CHECK_THROWS_AS(stream_integral(2, 1, p, 0.0, P), BoundaryCollision);
}

TEST_CASE("annulus residual vanishes") {
    for (double b : {0.3, 0.5, 0.7}) {
        for (double om : {-1.0, 0.0, 0.5, 1.0}) {
            const auto r = residual(PatchPair::annulus(b, 2, 4, om), 2048);
            CHECK(r.max_abs() <= 1e-8);
            CHECK(r.leak <= 1e-8);
            CHECK(r.r1.size() == 4);
        }
    }
}

TEST_CASE("residual of an m-fold patch") {
    const auto p = perturbed(0.5, 4, 2);
    const auto r = residual(p, 2048);
    CHECK(r.leak <= 1e-8);
    CHECK(r.even_part <= 1e-12);
    CHECK(r.max_abs() > 1e-5);

    const ContourGrid grid(4, 2, 2048);
    const auto reduced = grid.reduced_coefficients(p);
    REQUIRE(reduced.size() == 4);
    for (int n = 0; n < 2; ++n) {
        CHECK(std::abs(reduced[n] - r.r1[n]) <= 1e-13);
        CHECK(std::abs(reduced[2 + n] - r.r2[n]) <= 1e-13);
    }

    CHECK(max_diff(residual(p, 1024), residual(p, 2048)) <= 1e-6);

    CHECK_THROWS_AS(residual(p, 2040), PreconditionViolated);
    auto big = p;
    big.a[0] = 0.2;
    CHECK_THROWS_AS(residual(big, 2048), GuardViolation);
}

TEST_CASE("linearization at the annulus") {
    const double b = 0.5;
    const AnnulusConstants k(b, 400);
    const int m = threshold_N(b, k) + 2;
    const auto lc = linearization_check(m, b, 0.0, 1, 1e-6, 4100, k);
    CHECK(lc.frequency == m);
    CHECK(lc.rel_error <= 1e-5);
    CHECK(lc.offblock <= 1e-7);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            CHECK(std::abs(lc.observed[r][c] - lc.expected[r][c]) <= 1e-5 * std::abs(lc.expected[r][c]));
        }
    }

    // The finite-difference error itself is second order: shrinking h by 10
    // shrinks the change in the observed block by about 100.
    const auto h3 = linearization_check(m, b, 0.0, 1, 1e-3, 1280, k);
    const auto h4 = linearization_check(m, b, 0.0, 1, 1e-4, 1280, k);
    const auto h5 = linearization_check(m, b, 0.0, 1, 1e-5, 1280, k);
    const double d34 = std::abs(h3.observed[0][0] - h4.observed[0][0]);
    const double d45 = std::abs(h4.observed[0][0] - h5.observed[0][0]);
    CHECK(d34 / d45 > 30.0);
    CHECK(d34 / d45 < 300.0);

    CHECK_THROWS_AS(linearization_check(m, b, 0.0, 1, 1e-6, 4096, k), PreconditionViolated);
    CHECK_THROWS_AS(linearization_check(m, b, 0.0, 0, 1e-6, 4100, k), PreconditionViolated);
}

TEST_CASE("sample_boundaries") {
    const auto annulus = sample_boundaries(PatchPair::annulus(0.3, 3, 2, 0.0));
    REQUIRE(annulus.size() == 512);
    for (const auto& p : annulus) {
        CHECK(std::hypot(p.x1, p.y1) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::hypot(p.x2, p.y2) == doctest::Approx(0.3).epsilon(1e-15));
    }
    const int m = 4;
    const auto pts = sample_boundaries(perturbed(0.5, m, 2), 512);
    const int shift = 512 / m;
    const double c = std::cos(2 * kPi / m), s = std::sin(2 * kPi / m);
    for (int k = 0; k < 512; ++k) {
        const auto& p = pts[k];
        const auto& q = pts[(k + shift) % 512];
        CHECK(std::abs(c * p.x1 - s * p.y1 - q.x1) <= 1e-9);
        CHECK(std::abs(s * p.x1 + c * p.y1 - q.y1) <= 1e-9);
        CHECK(std::abs(c * p.x2 - s * p.y2 - q.x2) <= 1e-9);
        CHECK(std::abs(s * p.x2 + c * p.y2 - q.y2) <= 1e-9);
    }
    CHECK_THROWS_AS(sample_boundaries(PatchPair::annulus(0.3, 3, 2, 0.0), 0), PreconditionViolated);
}
