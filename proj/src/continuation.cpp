#include "vstates/continuation.hpp"

#include "vstates/errors.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/core.h>

namespace vstates {

namespace {

constexpr double kMaxCondition = 1e14;
constexpr int kMaxHalvings = 10;

class AugmentedSystem {
public:
    AugmentedSystem(const PatchPair& shape, const Direction& dir, double s, int P)
        : shape_(shape), dir_(dir), s_(s), grid_(shape.m, shape.K, P) {}

    int size() const { return 2 * shape_.K + 1; }

    Eigen::VectorXd pack(const PatchPair& p) const {
        Eigen::VectorXd x(size());
        for (int n = 0; n < shape_.K; ++n) {
            x[n] = p.a[n];
            x[shape_.K + n] = p.c[n];
        }
        x[2 * shape_.K] = p.omega;
        return x;
    }

    PatchPair unpack(const Eigen::VectorXd& x) const {
        PatchPair p = shape_;
        for (int n = 0; n < shape_.K; ++n) {
            p.a[n] = x[n];
            p.c[n] = x[shape_.K + n];
        }
        p.omega = x[2 * shape_.K];
        return p;
    }

    Eigen::VectorXd eval(const Eigen::VectorXd& x) const {
        const auto p = unpack(x);
        const auto r = grid_.reduced_coefficients(p);
        Eigen::VectorXd f(size());
        for (int i = 0; i < 2 * shape_.K; ++i) f[i] = r[i];
        f[2 * shape_.K] = amplitude(p, dir_) - s_;
        return f;
    }

    bool admissible(const Eigen::VectorXd& x) const { return unpack(x).within_guard(); }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
        const int N = size();
        Eigen::MatrixXd J(N, N);
        for (int k = 0; k < N; ++k) {
            const double h = 1e-7 * std::max(1.0, std::abs(x[k]));
            Eigen::VectorXd up = x, dn = x;
            up[k] += h;
            dn[k] -= h;
            J.col(k) = (eval(up) - eval(dn)) / (2.0 * h);
        }
        return J;
    }

private:
    PatchPair shape_;
    Direction dir_;
    double s_;
    ContourGrid grid_;
};

double sup_norm(const Eigen::VectorXd& v) { return v.lpNorm<Eigen::Infinity>(); }

} // namespace

Direction kernel_direction(const KernelVector& kernel) {
    const double len = std::hypot(kernel.v1, kernel.v2);
    if (!(len > 0.0)) {
        throw PreconditionViolated("kernel vector is zero");
    }
    return {kernel.v1 / len, kernel.v2 / len};
}

double amplitude(const PatchPair& patch, const Direction& dir) { return dir.e1 * patch.a[0] + dir.e2 * patch.c[0]; }

NewtonResult newton_correct(const PatchPair& guess, double s, const KernelVector& kernel, const NewtonOptions& opts) {
    guess.validate();
    require_quadrature_size(guess, opts.P);
    if (kernel.m != guess.m) {
        throw PreconditionViolated(fmt::format("kernel is for m = {} but the patch has m = {}", kernel.m, guess.m));
    }
    const auto dir = kernel_direction(kernel);
    const AugmentedSystem sys(guess, dir, s, opts.P);

    Eigen::VectorXd x = sys.pack(guess);
    Eigen::VectorXd f = sys.eval(x);
    double norm = sup_norm(f);
    int iter = 0;
    while (norm > opts.tol) {
        if (iter == opts.max_iter) {
            throw NoConvergence(fmt::format("Newton did not reach {:.1e} in {} iterations (residual {:.3e})", opts.tol,
                                            opts.max_iter, norm));
        }
        ++iter;
        const Eigen::MatrixXd J = sys.jacobian(x);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double smax = sv[0];
        const double smin = sv[sv.size() - 1];
        if (!(smin > 0.0) || smax / smin > kMaxCondition) {
            throw SingularJacobian(fmt::format("Jacobian condition estimate {:.3e} exceeds {:.0e}", smax / smin,
                                               kMaxCondition));
        }
        const Eigen::VectorXd dx = svd.solve(f);

        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= kMaxHalvings; ++halving, alpha *= 0.5) {
            const Eigen::VectorXd trial = x - alpha * dx;
            if (!sys.admissible(trial)) continue;
            const Eigen::VectorXd ft = sys.eval(trial);
            const double nt = sup_norm(ft);
            if (nt < norm) {
                x = trial;
                f = ft;
                norm = nt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            throw NoConvergence(
                fmt::format("line search stalled at iteration {} with residual {:.3e}", iter, norm));
        }
    }
    return {sys.unpack(x), norm, iter};
}

BranchResult branch_continue(int m, double b, Branch sign, int steps, double ds, int K, int P,
                             const AnnulusConstants& consts, double tol, int max_iter) {
    if (steps < 0) {
        throw PreconditionViolated("number of steps must be non-negative");
    }
    if (!(ds > 0.0) || !std::isfinite(ds)) {
        throw PreconditionViolated("step ds must be positive");
    }
    const int threshold = threshold_N(b, consts);
    if (m < threshold) {
        throw NotSimple(fmt::format("m = {} is below threshold N({}) = {}", m, b, threshold));
    }
    const auto row = bifurcation_row(m, b, consts);
    const double omega0 = row.omega(sign);
    const auto kernel = kernel_vector(m, b, omega0, consts);
    const auto dir = kernel_direction(kernel);

    BranchResult out;
    out.b = b;
    out.m = m;
    out.K = K;
    out.P = P;
    out.sign = sign;

    auto annulus = PatchPair::annulus(b, m, K, omega0);
    annulus.validate();
    require_quadrature_size(annulus, P);
    const ContourGrid grid(m, K, P);
    double norm0 = 0.0;
    for (double v : grid.reduced_coefficients(annulus)) norm0 = std::max(norm0, std::abs(v));
    out.points.push_back({0.0, annulus, norm0, 0});

    const NewtonOptions opts{P, max_iter, tol};
    for (int step = 1; step <= steps; ++step) {
        const auto& prev = out.points.back();
        PatchPair guess = prev.patch;
        guess.a[0] += ds * dir.e1;
        guess.c[0] += ds * dir.e2;
        const double s = prev.s + ds;
        if (!guess.within_guard()) {
            out.stopped_reason = fmt::format("guard: predictor for step {} leaves the guard region (sum {:.6g} >= {:.6g})",
                                             step, guess.guard_sum(), guess.guard_limit());
            break;
        }
        try {
            const auto res = newton_correct(guess, s, kernel, opts);
            out.points.push_back({s, res.patch, res.residual_norm, step});
        } catch (const GuardError& e) {
            out.stopped_reason = fmt::format("guard at step {}: {}", step, e.what());
            break;
        } catch (const NumericalError& e) {
            out.stopped_reason = fmt::format("numerical failure at step {}: {}", step, e.what());
            break;
        }
    }
    return out;
}

} // namespace vstates
