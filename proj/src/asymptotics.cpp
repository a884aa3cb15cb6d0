#include "pearcey/asymptotics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "pearcey/errors.hpp"

namespace pearcey {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);
const double kLn92 = std::log(4.5);
const cplx I(0.0, 1.0);

double real_checked(cplx v, const char* what) {
    if (std::fabs(v.imag()) > kRealnessTol)
        fail(ErrorKind::Numerical, std::string(what) + ": imaginary part exceeds 1e-12");
    return v.real();
}

void check_gamma_lt1(double gamma, const char* what) {
    if (!(gamma >= 0.0 && gamma < 1.0)) fail(ErrorKind::Domain, std::string(what) + ": gamma must lie in [0, 1)");
}

}  // namespace

cplx beta_of_gamma(double gamma) {
    check_gamma_lt1(gamma, "beta_of_gamma");
    return cplx(0.0, -std::log1p(-gamma) / (2.0 * kPi));
}

GapAsymptotics f_large_gap(double s, const ModelParams& params) {
    if (params.gamma == 1.0) fail(ErrorKind::Domain, "f_large_gap: gamma = 1, use f_gamma1");
    if (!(s > 0.0)) fail(ErrorKind::Domain, "f_large_gap: s must be positive");
    const cplx beta = beta_of_gamma(params.gamma);
    const cplx bi = beta * I, b2 = beta * beta;
    const double rho = params.rho;
    GapAsymptotics g;
    g.leading = real_checked(1.5 * kSqrt3 * bi * std::pow(s, 4.0 / 3.0), "f_large_gap leading");
    g.subleading = real_checked(-kSqrt3 * rho * bi * std::pow(s, 2.0 / 3.0), "f_large_gap subleading");
    g.log_term = real_checked(-(8.0 / 3.0) * b2 * std::log(s), "f_large_gap log term");
    g.constant = real_checked(-2.0 * b2 * kLn92 + 2.0 * (barnes_ln_g(1.0 + beta) + barnes_ln_g(1.0 - beta)),
                              "f_large_gap constant");
    g.total = g.leading + g.subleading + g.log_term + g.constant;
    return g;
}

double f_gamma1(double s, double rho, double C) {
    if (!(s > 0.0)) fail(ErrorKind::Domain, "f_gamma1: s must be positive");
    return -9.0 * std::pow(s, 8.0 / 3.0) / std::pow(2.0, 17.0 / 3.0) + rho * s * s / 4.0 -
           rho * rho * std::pow(s, 4.0 / 3.0) / std::pow(2.0, 10.0 / 3.0) - (2.0 / 9.0) * std::log(s) +
           std::pow(rho, 4) / 216.0 + C;
}

ConstantFit fit_gamma1_constant(const std::vector<double>& s, const std::vector<double>& f_num, double rho) {
    const int n = static_cast<int>(s.size());
    if (n < 3 || f_num.size() != s.size()) fail(ErrorKind::Domain, "fit_gamma1_constant: need >= 3 matching samples");
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = std::pow(s[i], -2.0 / 3.0);
        y(i) = f_num[i] - f_gamma1(s[i], rho, 0.0);
    }
    Eigen::Matrix2d xtx = X.transpose() * X;
    Eigen::Vector2d coef = xtx.ldlt().solve(X.transpose() * y);
    Eigen::VectorXd res = y - X * coef;
    const double rss = res.squaredNorm();
    const double sigma2 = n > 2 ? rss / (n - 2) : 0.0;
    Eigen::Matrix2d cov = sigma2 * xtx.inverse();
    ConstantFit f;
    f.C = coef(0);
    f.slope = coef(1);
    f.C_err = std::sqrt(cov(0, 0));
    f.slope_err = std::sqrt(cov(1, 1));
    f.rms = std::sqrt(rss / n);
    return f;
}

double theta3(double s, double rho) {
    if (!(s > 0.0)) fail(ErrorKind::Domain, "theta3: s must be positive");
    return 0.75 * std::pow(s, 4.0 / 3.0) + 0.5 * rho * std::pow(s, 2.0 / 3.0);
}

double vartheta(double s, const ModelParams& params) {
    if (!(s > 0.0)) fail(ErrorKind::Domain, "vartheta: s must be positive");
    const cplx beta = beta_of_gamma(params.gamma);
    const double arg = gamma_bundle(1.0 - beta).arg;
    cplx v = -3.0 * kSqrt3 / 8.0 * std::pow(s, 4.0 / 3.0) + kSqrt3 * params.rho / 4.0 * std::pow(s, 2.0 / 3.0) + arg -
             beta * I * ((4.0 / 3.0) * std::log(s) + kLn92);
    return real_checked(v, "vartheta");
}

double h_large_s(double s, const ModelParams& params, bool with_oscillation) {
    if (!(s >= 2.0)) fail(ErrorKind::Domain, "h_large_s: requires s >= 2");
    const cplx beta = beta_of_gamma(params.gamma);
    const cplx bi = beta * I;
    const double c = std::cbrt(s);
    cplx h = kSqrt3 * bi * c - params.rho * bi / (kSqrt3 * c) - 4.0 * beta * beta / (3.0 * s);
    if (with_oscillation) h -= 2.0 * kSqrt3 * bi / (9.0 * s) * std::cos(2.0 * vartheta(s, params));
    return real_checked(h, "h_large_s");
}

double h_gamma1(double s, double rho) {
    if (!(s >= 2.0)) fail(ErrorKind::Domain, "h_gamma1: requires s >= 2");
    return -3.0 * std::pow(s, 5.0 / 3.0) / std::pow(2.0, 11.0 / 3.0) + rho * s / 4.0 -
           rho * rho * std::cbrt(s) / (3.0 * std::pow(2.0, 7.0 / 3.0)) - 1.0 / (9.0 * s);
}

CountingStats counting_stats(double s, double rho) {
    if (!(s >= 1.0)) fail(ErrorKind::Domain, "counting_stats: requires s >= 1");
    CountingStats c;
    c.mu = 3.0 * kSqrt3 / (4.0 * kPi) * std::pow(s, 4.0 / 3.0) - kSqrt3 * rho / (2.0 * kPi) * std::pow(s, 2.0 / 3.0);
    c.sigma2 = 4.0 / (3.0 * kPi * kPi) * std::log(s);
    c.var_const = (1.0 + kLn92 + kEulerGamma) / (kPi * kPi);
    return c;
}

double mgf_prefactor(double nu, double s, double rho) {
    if (!(std::fabs(nu) <= 0.5)) fail(ErrorKind::Domain, "mgf_prefactor: requires |nu| <= 0.5");
    if (!(s >= 2.0)) fail(ErrorKind::Domain, "mgf_prefactor: requires s >= 2");
    const CountingStats c = counting_stats(s, rho);
    cplx lg = 2.0 * (barnes_ln_g(cplx(1.0, nu)) + barnes_ln_g(cplx(1.0, -nu)));
    const double log_val = 2.0 * nu * nu * kLn92 + real_checked(lg, "mgf_prefactor") - 2.0 * kPi * c.mu * nu +
                           2.0 * kPi * kPi * c.sigma2 * nu * nu;
    return std::exp(log_val);
}

std::vector<double> default_clt_grid() {
    std::vector<double> t(21);
    for (int i = 0; i < 21; ++i) t[i] = -1.0 + 0.1 * i;
    return t;
}

double clt_distance(double s, double rho, const std::vector<double>& t_grid, double tol) {
    if (!(s >= 4.0)) fail(ErrorKind::Domain, "clt_distance: requires s >= 4");
    const CountingStats c = counting_stats(s, rho);
    const double sigma = std::sqrt(c.sigma2);
    double worst = 0.0;
    for (double t : t_grid) {
        if (t == 0.0) continue;  // both sides equal 1
        const double gamma = -std::expm1(t / sigma);  // 1 - e^{-2 pi nu}, nu = -t/(2 pi sigma)
        const double F = logdet_converged_general(s, gamma, rho, tol).f;
        const double lhs = std::exp(F - t * c.mu / sigma);
        worst = std::max(worst, std::fabs(lhs - std::exp(0.5 * t * t)));
    }
    return checked(worst, "clt_distance");
}

}  // namespace pearcey
