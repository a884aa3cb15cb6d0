#include "pearcey/fredholm.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "pearcey/errors.hpp"
#include "pearcey/kernel.hpp"
#include "pearcey/parallel.hpp"

namespace pearcey {

namespace {

constexpr double kPi = std::numbers::pi;

void check_s(double s) {
    if (!(s > 0.0 && s <= 12.0)) fail(ErrorKind::Domain, "interval half-length s must lie in (0, 12]");
}

void check_order(int n) {
    if (n < 1 || n > 2048) fail(ErrorKind::Domain, "quadrature order must lie in [1, 2048]");
}

// Balanced, symmetrically weighted Nystrom matrix
//   A_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j) * exp(b(x_i) - b(x_j)),
// a diagonal similarity of W^{1/2} K W^{1/2}: determinant and diagonal of the
// resolvent are unchanged, but entries stay O(1) for s up to 12.
struct Nystrom {
    std::vector<double> x, w, sw, b;
    Eigen::MatrixXd a;
};

Nystrom assemble(double s, double rho, int n, KernelSession& ks) {
    check_s(s);
    check_order(n);
    const auto& rule = gauss_legendre(n);
    Nystrom ny;
    ny.x.resize(n);
    ny.w.resize(n);
    ny.sw.resize(n);
    ny.b.resize(n);
    for (int i = 0; i < n; ++i) {
        ny.x[i] = s * rule.nodes[i];
        ny.w[i] = s * rule.weights[i];
        ny.sw[i] = std::sqrt(ny.w[i]);
        ny.b[i] = kernel_balance_log(ny.x[i], rho);
    }
    ks.warm(ny.x);
    ny.a.resize(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        for (int j = 0; j < n; ++j)
            ny.a(i, j) = ny.sw[i] * ks(ny.x[i], ny.x[j]) * ny.sw[j] * std::exp(ny.b[i] - ny.b[j]);
    });
    return ny;
}

DetResult logdet_of(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, int n) {
    const auto& u = lu.matrixLU();
    double f = 0.0;
    int sign = static_cast<int>(std::lround(lu.permutationP().determinant()));
    for (int k = 0; k < n; ++k) {
        const double d = u(k, k);
        if (d == 0.0) fail(ErrorKind::Sign, "Fredholm determinant vanished numerically");
        if (d < 0) sign = -sign;
        f += std::log(std::fabs(d));
    }
    DetResult r;
    r.f = checked(f, "fredholm_logdet");
    r.order = n;
    r.sign_ok = sign > 0;
    if (!r.sign_ok) fail(ErrorKind::Sign, "Fredholm determinant is negative: numerical breakdown");
    return r;
}

DetResult logdet_impl(double s, double gamma, double rho, int n) {
    if (!(gamma <= 1.0)) fail(ErrorKind::Domain, "gamma must be <= 1");
    check_s(s);
    check_order(n);
    if (gamma == 0.0) return {0.0, n, 0.0, true};
    KernelSession ks(rho);
    Nystrom ny = assemble(s, rho, n, ks);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - gamma * ny.a;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    return logdet_of(lu, n);
}

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) fail(ErrorKind::Domain, "gamma must lie in [0, 1]");
}

}  // namespace

DetResult fredholm_logdet(double s, const ModelParams& params, int n) {
    check_gamma(params.gamma);
    return logdet_impl(s, params.gamma, params.rho, n);
}

DetResult fredholm_logdet_general(double s, double gamma, double rho, int n) {
    return logdet_impl(s, gamma, rho, n);
}

DetResult logdet_converged_general(double s, double gamma, double rho, double tol) {
    if (!(tol >= 1e-12)) fail(ErrorKind::Domain, "logdet_converged: tol must be >= 1e-12");
    DetResult prev = logdet_impl(s, gamma, rho, 16);
    if (gamma == 0.0) return prev;
    for (int n = 32; n <= 2048; n *= 2) {
        DetResult cur = logdet_impl(s, gamma, rho, n);
        cur.err_est = std::fabs(cur.f - prev.f);
        if (cur.err_est < tol) return cur;
        prev = cur;
    }
    fail(ErrorKind::Convergence, "logdet_converged: no convergence with n <= 2048");
}

DetResult logdet_converged(double s, const ModelParams& params, double tol) {
    check_gamma(params.gamma);
    return logdet_converged_general(s, params.gamma, params.rho, tol);
}

double resolvent_boundary_trace(double s, const ModelParams& params, int n) {
    check_gamma(params.gamma);
    check_s(s);
    check_order(n);
    const double gamma = params.gamma, rho = params.rho;
    if (gamma == 0.0) return 0.0;
    KernelSession ks(rho);
    Nystrom ny = assemble(s, rho, n, ks);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - gamma * ny.a;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    // Nystrom extension in the balanced frame, Kb(u, v) = K(u, v) g(u)/g(v):
    //   (I - gamma A) rhat = gamma W^{1/2} Kb(x, v),  rhat_i = sqrt(w_i) Rb(x_i, v),
    //   R(v, v) = gamma K(v, v) + gamma sum_i sqrt(w_i) Kb(v, x_i) rhat_i.
    double total = 0.0;
    for (double v : {s, -s}) {
        const double bv = kernel_balance_log(v, rho);
        Eigen::VectorXd rhs(n), row(n);
        for (int i = 0; i < n; ++i) {
            rhs(i) = gamma * ny.sw[i] * ks(ny.x[i], v) * std::exp(ny.b[i] - bv);
            row(i) = ny.sw[i] * ks(v, ny.x[i]) * std::exp(bv - ny.b[i]);
        }
        Eigen::VectorXd rhat = lu.solve(rhs);
        total += gamma * ks(v, v) + gamma * row.dot(rhat);
    }
    return checked(-total, "resolvent_boundary_trace");
}

Moments moments_trace(double s, double rho, int n) {
    KernelSession ks(rho);
    Nystrom ny = assemble(s, rho, n, ks);
    double tr1 = ny.a.trace();
    double tr2 = ny.a.cwiseProduct(ny.a.transpose()).sum();
    return {checked(tr1, "moments_trace"), checked(tr1 - tr2, "moments_trace")};
}

Moments moments_mgf(double s, double rho, int n) {
    check_s(s);
    // One assembly shared by all nu values.
    KernelSession ks(rho);
    Nystrom ny = assemble(s, rho, n, ks);
    auto F = [&](double nu) {
        const double gamma = -std::expm1(-2.0 * kPi * nu);
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - gamma * ny.a;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
        return logdet_of(lu, n).f;
    };
    auto derivs = [&](double h) {
        const double fp = F(h), fm = F(-h);
        return std::pair{(fp - fm) / (2 * h), (fp + fm) / (h * h)};  // F(0) = 0
    };
    auto [d1a, d2a] = derivs(1e-3);
    auto [d1b, d2b] = derivs(5e-4);
    const double d1 = d1b + (d1b - d1a) / 3.0, d2 = d2b + (d2b - d2a) / 3.0;
    return {-d1 / (2 * kPi), d2 / (4 * kPi * kPi)};
}

}  // namespace pearcey
