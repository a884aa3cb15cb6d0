#include "pearcey/chf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pearcey/errors.hpp"

namespace pearcey {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);
using Mat = Eigen::Matrix2cd;

Mat make(cplx a, cplx b, cplx c, cplx d) {
    Mat m;
    m << a, b, c, d;
    return m;
}

void check_beta(cplx beta, double max_abs) {
    if (beta.real() != 0.0) fail(ErrorKind::Domain, "chf: beta must be purely imaginary");
    if (!(std::abs(beta) <= max_abs)) fail(ErrorKind::Domain, "chf: |beta| exceeds " + std::to_string(max_abs));
}

void check_ray(int ray) {
    if (ray < 1 || ray > 6) fail(ErrorKind::Domain, "chf: ray index must lie in 1..6");
}

// Argument in [0, 2 pi).
double ccw_arg(cplx z) {
    double a = std::arg(z);
    return a < 0.0 ? a + 2.0 * kPi : a;
}

// Right factor taking the first-sector matrix to sector k along the counterclockwise path.
Mat sector_factor(int k, cplx beta) {
    Mat s = Mat::Identity();
    if (k >= 2) s = s * chf_jump(2, beta);
    if (k >= 3) s = s * chf_jump(3, beta).inverse();
    if (k >= 4) s = s * chf_jump(4, beta).inverse();
    if (k >= 5) s = s * chf_jump(5, beta).inverse();
    if (k >= 6) s = s * chf_jump(6, beta);
    return s;
}

// First-sector Kummer matrix at |z| = r with arg z = theta continued freely.
Mat first_sector(double r, double theta, cplx beta) {
    const cplx z = std::polar(r, theta);
    const double lr = std::log(r);
    const cplx zp = I * z, zm = -I * z;
    const cplx lp(lr, theta + 0.5 * kPi), lm(lr, theta - 0.5 * kPi);
    const cplx em = std::exp(-0.5 * I * z), ep = std::exp(0.5 * I * z);
    const cplx ebp = std::exp(beta * kPi * I);
    const cplx c12 = -gamma_fn(1.0 - beta) * rgamma(beta);
    const cplx c21 = -gamma_fn(1.0 + beta) * rgamma(-beta);
    const cplx a11 = kummer_psi_b1_log(beta, zp, lp) * ebp * ebp * em;
    const cplx a12 = c12 == 0.0 ? cplx(0.0) : c12 * kummer_psi_b1_log(1.0 - beta, zm, lm) * ebp * ep;
    const cplx a21 = c21 == 0.0 ? cplx(0.0) : c21 * kummer_psi_b1_log(1.0 + beta, zp, lp) * ebp * em;
    const cplx a22 = kummer_psi_b1_log(-beta, zm, lm) * ep;
    const cplx c1 = std::exp(-1.5 * beta * kPi * I), c2 = std::exp(0.5 * beta * kPi * I);
    return make(c1 * a11, c1 * a12, c2 * a21, c2 * a22);
}

Mat sector_matrix(double r, double theta, int k, cplx beta) { return first_sector(r, theta, beta) * sector_factor(k, beta); }

double inf_norm(const Mat& m) {
    return std::max(std::abs(m(0, 0)) + std::abs(m(0, 1)), std::abs(m(1, 0)) + std::abs(m(1, 1)));
}

double max_entry(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Phi e^{-beta pi i sigma3/2} U^{-1}, U the unipotent log factor; entire in z.
Mat analytic_factor(double r, double theta, cplx beta) {
    const cplx gamma = 1.0 - std::exp(2.0 * beta * kPi * I);
    const cplx L(std::log(r), theta - 0.5 * kPi);
    const Mat phi = sector_matrix(r, theta, 2, beta);
    const Mat d = make(std::exp(-0.5 * beta * kPi * I), 0.0, 0.0, std::exp(0.5 * beta * kPi * I));
    const Mat uinv = make(1.0, gamma / (2.0 * kPi * I) * L, 0.0, 1.0);
    return phi * d * uinv;
}

}  // namespace

int chf_sector_of(cplx z) {
    if (z == 0.0) fail(ErrorKind::Domain, "chf: z = 0 lies on every ray");
    const double a = ccw_arg(z);
    for (int k = 0; k < 6; ++k) {
        const double lo = kChfRayAngle[k], hi = k == 5 ? 2.0 * kPi : kChfRayAngle[k + 1];
        if (std::fabs(a - lo) < 1e-12 || std::fabs(a - hi) < 1e-12)
            fail(ErrorKind::Domain, "chf: z lies on a jump ray");
        if (a > lo && a < hi) return k + 1;
    }
    fail(ErrorKind::Domain, "chf: z lies on a jump ray");
}

SectorPoint chf_point(cplx z) { return {z, chf_sector_of(z)}; }

Mat chf_jump(int ray, cplx beta) {
    check_ray(ray);
    const cplx e = std::exp(beta * kPi * I), ei = 1.0 / e;
    switch (ray) {
        case 1: return make(0.0, ei, -e, 0.0);
        case 2: return make(1.0, 0.0, e, 1.0);
        case 3: return make(1.0, 0.0, ei, 1.0);
        case 4: return make(0.0, e, -ei, 0.0);
        case 5: return make(1.0, 0.0, ei, 1.0);
        default: return make(1.0, 0.0, e, 1.0);
    }
}

Mat phi_chf(const SectorPoint& pt, cplx beta) {
    check_beta(beta, 0.5);
    const double r = std::abs(pt.z);
    if (!(r >= 1e-3 && r <= 25.0)) fail(ErrorKind::Domain, "phi_chf: requires 1e-3 <= |z| <= 25");
    if (pt.sector < 1 || pt.sector > 6 || chf_sector_of(pt.z) != pt.sector)
        fail(ErrorKind::Domain, "phi_chf: sector does not match z");
    return sector_matrix(r, ccw_arg(pt.z), pt.sector, beta);
}

double chf_jump_residual(int ray, double r, cplx beta) {
    check_ray(ray);
    check_beta(beta, 0.5);
    if (!(r >= 0.1 && r <= 10.0)) fail(ErrorKind::Domain, "chf_jump_residual: requires 0.1 <= r <= 10");
    const double ang = kChfRayAngle[ray - 1];
    // Sectors on the counterclockwise and clockwise sides of the ray.
    const int ccw = ray, cw = ray == 1 ? 6 : ray - 1;
    const Mat m_ccw = sector_matrix(r, ang, ccw, beta);
    const Mat m_cw = sector_matrix(r, ray == 1 ? 2.0 * kPi : ang, cw, beta);
    const bool outward = ray == 1 || ray == 2 || ray == 6;  // + side is counterclockwise
    const Mat& plus = outward ? m_ccw : m_cw;
    const Mat& minus = outward ? m_cw : m_ccw;
    return checked(inf_norm(plus - minus * chf_jump(ray, beta)), "chf_jump_residual");
}

double chf_infinity_error(double r, double arg, cplx beta) {
    check_beta(beta, 0.5);
    if (!(r >= 1.0 && r <= 25.0)) fail(ErrorKind::Domain, "chf_infinity_error: requires 1 <= |z| <= 25");
    const cplx z = std::polar(r, arg);
    const Mat phi = phi_chf(chf_point(z), beta);
    double a = std::arg(z);  // normalize to (-pi/2, 3pi/2)
    if (a <= -0.5 * kPi) a += 2.0 * kPi;
    const cplx e = std::exp(beta * kPi * I);
    Mat n = Mat::Identity();
    if (a > kPi) n = make(0.0, -e, 1.0 / e, 0.0);
    else if (a < 0.0) n = make(0.0, -1.0 / e, e, 0.0);
    const cplx lz(std::log(r), a);
    const Mat right = make(std::exp(0.5 * I * z + beta * lz), 0.0, 0.0, std::exp(-0.5 * I * z - beta * lz));
    return max_entry(phi * n.inverse() * right - Mat::Identity());
}

ChfExpansion chf_origin_expansion(cplx beta) {
    check_beta(beta, 0.5);
    if (beta == 0.0) fail(ErrorKind::Domain, "chf_origin_expansion: degenerate at beta = 0");
    const cplx e = std::exp(beta * kPi * I);
    ChfExpansion x;
    x.upsilon0 = make(gamma_fn(1.0 - beta) / e, rgamma(beta) * (digamma(1.0 - beta) + 2.0 * kEulerGamma),
                      gamma_fn(1.0 + beta), -e * rgamma(-beta) * (digamma(-beta) + 2.0 * kEulerGamma));
    x.upsilon1_21 = beta * kPi * I / e / std::sin(beta * kPi);
    return x;
}

ChfOriginCheck chf_origin_check(cplx beta) {
    ChfOriginCheck c;
    c.closed = chf_origin_expansion(beta);
    const Mat u0 = c.closed.upsilon0;
    const Mat u0inv = u0.inverse();

    // Mean and first Fourier coefficient of the entire factor on |z| = 1/2.
    constexpr int n = 64;
    constexpr double rc = 0.5;
    Mat m0 = Mat::Zero(), m1 = Mat::Zero();
    for (int k = 0; k < n; ++k) {
        const double th = 0.75 * kPi + 2.0 * kPi * (k + 0.5) / n - kPi;
        const Mat m = analytic_factor(rc, th, beta);
        m0 += m / double(n);
        m1 += m / (double(n) * std::polar(rc, th));
    }
    c.upsilon0_numeric = m0;
    c.upsilon0_err = max_entry(m0 - u0);
    c.upsilon1_21_numeric = (m0.inverse() * m1)(1, 0);
    c.upsilon1_21_err = std::abs(c.upsilon1_21_numeric - c.closed.upsilon1_21);

    auto first_order = [&](double r) {
        const cplx z = std::polar(r, 0.75 * kPi);
        return Mat((u0inv * analytic_factor(r, 0.75 * kPi, beta) - Mat::Identity()) / z);
    };
    const Mat e1 = first_order(1e-2), e2 = first_order(5e-3);
    const Mat u1 = 2.0 * e2 - e1;
    c.sample_upsilon1_21_err = std::abs(u1(1, 0) - c.closed.upsilon1_21);
    const cplx z2 = std::polar(5e-3, 0.75 * kPi);
    c.sample_remainder = max_entry(u0inv * analytic_factor(5e-3, 0.75 * kPi, beta) - Mat::Identity() - u1 * z2);

    const cplx gamma = 1.0 - std::exp(2.0 * beta * kPi * I);
    c.gamma_identity_err = std::abs(std::sin(beta * kPi) * std::exp(beta * kPi * I) / kPi + gamma / (2.0 * kPi * I));
    return c;
}

ChfReport chf_verify(cplx beta) {
    check_beta(beta, 0.5);
    ChfReport rep;
    rep.beta = beta;
    for (int ray = 1; ray <= 6; ++ray)
        for (double r : {0.5, 1.0, 2.0, 5.0}) {
            const double res = chf_jump_residual(ray, r, beta);
            rep.rays.push_back({ray, r, res});
            rep.max_ray_residual = std::max(rep.max_ray_residual, res);
        }
    for (int k = 0; k < 6; ++k) {
        const double hi = k == 5 ? 2.0 * kPi : kChfRayAngle[k + 1];
        const double mid = 0.5 * (kChfRayAngle[k] + hi);
        const cplx d1 = phi_chf(chf_point(std::polar(1.0, mid)), beta).determinant();
        const cplx d2 = phi_chf(chf_point(std::polar(2.0, mid)), beta).determinant();
        rep.det_variation = std::max(rep.det_variation, std::abs(d1 - d2));
    }
    rep.infinity_upper = chf_infinity_error(25.0, 0.5 * kPi, beta);
    // Below the real axis the continued Kummer series cancel like e^{|z|}; stay at |z| = 12.5.
    rep.infinity_lower = std::max(chf_infinity_error(12.5, 4.0 * kPi / 3.0, beta), chf_infinity_error(12.5, -0.25 * kPi, beta));
    if (beta != 0.0) rep.origin = chf_origin_check(beta);
    return rep;
}

}  // namespace pearcey
