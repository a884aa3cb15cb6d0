#include "pearcey/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pearcey/errors.hpp"
#include "pearcey/parallel.hpp"
#include "pearcey/quadrature.hpp"

namespace pearcey {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

double real_part(cplx v, double scale, const char* where) {
    if (std::fabs(v.imag()) > 1e-10 * (1.0 + scale))
        fail(ErrorKind::Numerical, std::string(where) + ": imaginary residue exceeds 1e-10");
    return checked(v.real(), where);
}

double numerator_from(const PearceyValues& p, const PearceyValues& q, double rho) {
    cplx n = p.v0 * q.v2 - p.v1 * q.v1 + p.v2 * q.v0 - rho * p.v0 * q.v0;
    double scale = std::abs(p.v0 * q.v2) + std::abs(p.v1 * q.v1) + std::abs(p.v2 * q.v0) +
                   std::abs(rho * p.v0 * q.v0);
    return real_part(n, scale, "kernel numerator");
}

double rational_from(const PearceyValues& p, const PearceyValues& q, double x, double y, double rho) {
    return numerator_from(p, q, rho) / (x - y);
}

// Three-term Taylor expansion in d = y - x of N(x, y)/(x - y); P and Q both at x.
double band_from(const PearceyValues& p, const PearceyValues& q, double x, double y, double rho) {
    const double d = y - x;
    const cplx P = p.v0, P1 = p.v1, P2 = p.v2;
    const cplx Q = q.v0, Q1 = q.v1, Q2 = q.v2;
    const cplx Q3 = -x * Q + rho * Q1;
    const cplx Q4 = -Q - x * Q1 + rho * Q2;
    const cplx d1 = -x * P * Q - P1 * Q2 + P2 * Q1;
    const cplx d2 = -P * Q - x * P * Q1 - P1 * Q3 + P2 * Q2;
    const cplx d3 = -2.0 * P * Q1 - x * P * Q2 - P1 * Q4 + P2 * Q3;
    cplx k = -d1 - 0.5 * d2 * d - d3 * d * d / 6.0;
    double scale = std::abs(x * P * Q) + std::abs(P1 * Q2) + std::abs(P2 * Q1);
    return real_part(k, scale, "kernel_diagonal_band");
}

}  // namespace

double kernel_numerator(double x, double y, double rho) {
    return numerator_from(pearcey_p(x, rho), pearcey_q(y, rho), rho);
}

double kernel_rational(double x, double y, double rho) {
    if (std::fabs(x - y) < kDiagonalBand)
        fail(ErrorKind::Domain, "kernel_rational: |x-y| < 1e-3, use kernel_diagonal_band");
    return rational_from(pearcey_p(x, rho), pearcey_q(y, rho), x, y, rho);
}

double kernel_diagonal_band(double x, double y, double rho) {
    if (!(std::fabs(x - y) < kDiagonalBand))
        fail(ErrorKind::Domain, "kernel_diagonal_band: requires |x-y| < 1e-3");
    return band_from(pearcey_p(x, rho), pearcey_q(x, rho), x, y, rho);
}

double kernel_diagonal(double x, double rho) { return kernel_diagonal_band(x, x, rho); }

double kernel_integral(double x, double y, double rho, PanelOptions opt) {
    if (!(std::fabs(x) <= 12.0 && std::fabs(y) <= 12.0))
        fail(ErrorKind::Domain, "kernel_integral: requires |x|, |y| <= 12");
    if (opt.refine < 1 || opt.refine > 16) fail(ErrorKind::Domain, "kernel_integral: refine must lie in [1, 16]");
    // Polar coordinates (u, r) = R (cos phi, sin phi) for s = sigma u, t = e^{i theta} r:
    // the factor R from the area element cancels the 1/R of the denominator.
    // Radial cutoff: |integrand| <= exp(-R^4/8 + |rho| R^2/2 + |y| R/sqrt 2).
    auto bound = [&](double R) { return -std::pow(R, 4) / 8 + std::fabs(rho) * R * R / 2 + std::fabs(y) * R / std::sqrt(2.0); };
    double peak = 0.0, Rmax = 4.8;
    for (double R = 0; R < 20; R += 0.01) peak = std::max(peak, bound(R));
    while (bound(Rmax) > peak - 50.0) Rmax += 0.2;

    const auto& g = gauss_legendre(12);
    const int nr = static_cast<int>(std::ceil(Rmax / 0.2)) * opt.refine;
    const int nphi = 40 * opt.refine;
    const double hr = Rmax / nr, hphi = 0.5 * kPi / nphi;
    std::vector<double> R, wR, phi, wphi;
    for (int p = 0; p < nr; ++p)
        for (int i = 0; i < 12; ++i) {
            R.push_back((p + 0.5 + 0.5 * g.nodes[i]) * hr);
            wR.push_back(0.5 * hr * g.weights[i]);
        }
    for (int p = 0; p < nphi; ++p)
        for (int i = 0; i < 12; ++i) {
            phi.push_back((p + 0.5 + 0.5 * g.nodes[i]) * hphi);
            wphi.push_back(0.5 * hphi * g.weights[i]);
        }

    // Sigma: rays at pi/4, 5pi/4 inward and 3pi/4, 7pi/4 outward.
    const double ang[4] = {0.25 * kPi, 0.75 * kPi, 1.25 * kPi, 1.75 * kPi};
    const double orient[4] = {-1.0, 1.0, -1.0, 1.0};
    auto f = [rho](cplx s) { cplx s2 = s * s; return -0.25 * s2 * s2 - 0.5 * rho * s2; };

    cplx total = 0.0;
    for (int ray = 0; ray < 4; ++ray) {
        const cplx e = std::polar(1.0, ang[ray]);
        for (double sigma : {1.0, -1.0}) {
            cplx acc = 0.0;
            for (std::size_t a = 0; a < phi.size(); ++a) {
                const double c = std::cos(phi[a]), sn = std::sin(phi[a]);
                const cplx denom = sigma * c + e * sn;
                cplx inner = 0.0;
                for (std::size_t b = 0; b < R.size(); ++b) {
                    const cplx s = sigma * R[b] * c, t = e * (R[b] * sn);
                    inner += wR[b] * std::exp(f(s) - f(t) + I * (s * x + t * y));
                }
                acc += wphi[a] * inner / denom;
            }
            total += orient[ray] * e * acc;
        }
    }
    cplx k = -I / (4.0 * kPi * kPi) * total;
    return real_part(k, std::abs(k), "kernel_integral");
}

cplx kernel_rh_complex(double x, double y, double rho) {
    if (x == y) fail(ErrorKind::Domain, "kernel_rh: requires x != y");
    if (!(std::fabs(x) <= 12.0 && std::fabs(y) <= 12.0)) fail(ErrorKind::Domain, "kernel_rh: requires |x|, |y| <= 12");
    const PsiTilde px = tilde_psi(x, rho), py = tilde_psi(y, rho);
    Eigen::PartialPivLU<Eigen::Matrix3cd> lu(py.m);
    if (std::abs(lu.determinant()) == 0.0) fail(ErrorKind::Singular, "kernel_rh: PsiTilde(y) is singular");
    Eigen::Vector3cd u = lu.solve(px.m.col(0));
    return (u(1) + u(2)) / (2.0 * kPi * I * (x - y));
}

double kernel_rh(double x, double y, double rho) {
    cplx k = kernel_rh_complex(x, y, rho);
    if (std::fabs(k.imag()) > 1e-9 * (1.0 + std::abs(k)))
        fail(ErrorKind::Numerical, "kernel_rh: imaginary residue exceeds 1e-9");
    return k.real();
}

double kernel_balance_log(double x, double rho) {
    const double a = std::fabs(x);
    return 0.375 * std::pow(a, 4.0 / 3.0) + 0.25 * rho * std::pow(a, 2.0 / 3.0);
}

double KernelSession::operator()(double x, double y) {
    const PearceyValues p = cache_.p(x, rho_);
    if (std::fabs(x - y) < kDiagonalBand) return band_from(p, cache_.q(x, rho_), x, y, rho_);
    return rational_from(p, cache_.q(y, rho_), x, y, rho_);
}

void KernelSession::warm(const std::vector<double>& pts) {
    parallel_for(pts.size(), [&](std::size_t i) {
        cache_.p(pts[i], rho_);
        cache_.q(pts[i], rho_);
    });
}

}  // namespace pearcey
