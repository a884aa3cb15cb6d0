#include "pearcey/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "pearcey/errors.hpp"
#include "pearcey/quadrature.hpp"

namespace pearcey {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

void check_finite(cplx v, const char* where) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        fail(ErrorKind::Numerical, std::string("non-finite result in ") + where);
}

// Lanczos, g = 7, nine coefficients; valid for Re z >= 0.5.
cplx lanczos_ln_gamma(cplx z) {
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    z -= 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    cplx t = z + g + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx ln_gamma(cplx z) {
    if (is_nonpositive_integer(z)) fail(ErrorKind::Pole, "ln_gamma: pole at nonpositive integer");
    // Upward recurrence instead of reflection keeps the principal branch continuous
    // everywhere off the negative real axis.
    cplx shift = 0.0;
    while (z.real() < 0.5) {
        shift += std::log(z);
        z += 1.0;
    }
    cplx r = lanczos_ln_gamma(z) - shift;
    check_finite(r, "ln_gamma");
    return r;
}

GammaBundle gamma_bundle(cplx z) {
    cplx lg = ln_gamma(z);
    return {lg, lg.imag()};
}

cplx gamma_fn(cplx z) { return std::exp(ln_gamma(z)); }

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-ln_gamma(z));
}

cplx digamma(cplx z) {
    if (is_nonpositive_integer(z)) fail(ErrorKind::Pole, "digamma: pole at nonpositive integer");
    cplx acc = 0.0;
    while (std::abs(z) < 12.0 || z.real() < 10.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // Bernoulli tail: B2k / (2k z^2k)
    static constexpr std::array<double, 8> b = {1.0 / 6,   -1.0 / 30,   1.0 / 42,       -1.0 / 30,
                                                5.0 / 66,  -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
    cplx z2 = 1.0 / (z * z), zp = z2, tail = 0.0;
    for (int k = 1; k <= 8; ++k) {
        tail += b[k - 1] / (2.0 * k) * zp;
        zp *= z2;
    }
    cplx r = acc + std::log(z) - 0.5 / z - tail;
    check_finite(r, "digamma");
    return r;
}

cplx barnes_ln_g(cplx one_plus_z) {
    cplx z = one_plus_z - 1.0;
    if (!(z.real() > -1.0)) fail(ErrorKind::Domain, "barnes_ln_g: requires Re z > -1");
    if (z == 0.0) return 0.0;
    // int_0^z lnGamma(1+x) dx along x = z t
    std::function<cplx(double)> f = [z](double t) { return ln_gamma(1.0 + z * t); };
    cplx integral = z * adaptive_gl<cplx>(f, 0.0, 1.0, 1e-14);
    cplx r = 0.5 * z * std::log(2.0 * kPi) - 0.5 * z * (z + 1.0) + z * ln_gamma(1.0 + z) - integral;
    check_finite(r, "barnes_ln_g");
    return r;
}

cplx kummer_phi(cplx a, cplx b, cplx z) {
    if (is_nonpositive_integer(b)) fail(ErrorKind::Pole, "kummer_phi: b is a nonpositive integer");
    cplx term = 1.0, sum = 1.0;
    const double zabs = std::abs(z);
    for (int k = 0; k < 10000; ++k) {
        term *= (a + double(k)) / (b + double(k)) * z / double(k + 1);
        sum += term;
        if (k > zabs && std::abs(term) < 1e-17 * std::abs(sum)) {
            check_finite(sum, "kummer_phi");
            return sum;
        }
        if (term == 0.0) return sum;  // terminating series
    }
    fail(ErrorKind::Convergence, "kummer_phi: series did not converge within 10000 terms");
}

cplx kummer_psi_b1_log(cplx a, cplx z, cplx log_z) {
    if (a == 0.0) return 1.0;
    if (is_nonpositive_integer(a)) fail(ErrorKind::Pole, "kummer_psi_b1: a is a nonpositive integer");
    if (z == 0.0) fail(ErrorKind::Domain, "kummer_psi_b1: z = 0");
    if (std::abs(z) > 30.0) fail(ErrorKind::Domain, "kummer_psi_b1: |z| > 30");
    // sum_k (a)_k/(k!)^2 z^k [ln z + digamma(a+k) - 2 digamma(1+k)]
    cplx coef = 1.0, psi_a = digamma(a), sum = 0.0;
    double psi_1 = -kEulerGamma;
    const double zabs = std::abs(z);
    for (int k = 0; k < 10000; ++k) {
        cplx term = coef * (log_z + psi_a - 2.0 * psi_1);
        sum += term;
        if (k > zabs && std::abs(term) < 1e-17 * std::abs(sum)) {
            cplx r = -rgamma(a) * sum;
            check_finite(r, "kummer_psi_b1");
            return r;
        }
        coef *= (a + double(k)) * z / (double(k + 1) * double(k + 1));
        psi_a += 1.0 / (a + double(k));
        psi_1 += 1.0 / double(k + 1);
    }
    fail(ErrorKind::Convergence, "kummer_psi_b1: series did not converge within 10000 terms");
}

cplx kummer_psi_b1(cplx a, cplx z) {
    if (z.imag() == 0.0 && z.real() < 0.0) warn("kummer_psi_b1: z on the branch cut (negative real axis)");
    return kummer_psi_b1_log(a, z, std::log(z));
}

}  // namespace pearcey
