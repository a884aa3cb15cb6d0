#pragma once

#include <complex>

namespace pearcey {

using cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286;

struct GammaBundle {
    cplx ln_gamma;  // principal branch, continuous off (-inf, 0]
    double arg;     // Im ln_gamma, i.e. the continuous argument of Gamma
};

// Principal-branch log Gamma. Throws Pole at nonpositive integers.
cplx ln_gamma(cplx z);
GammaBundle gamma_bundle(cplx z);
cplx gamma_fn(cplx z);
// 1/Gamma(z); exactly zero at the nonpositive integers.
cplx rgamma(cplx z);
// Gamma'(z)/Gamma(z).
cplx digamma(cplx z);

// ln G(1+z) for Re z > -1, from the log-Gamma integral along the segment 0 -> z.
cplx barnes_ln_g(cplx one_plus_z);

// Kummer's series phi(a, b, z) = sum (a)_k/(b)_k z^k/k!.
cplx kummer_phi(cplx a, cplx b, cplx z);

// Tricomi psi(a, 1, z) from the logarithmic series, principal branch of ln z.
cplx kummer_psi_b1(cplx a, cplx z);
// Same series with the caller choosing the branch: log_z must satisfy exp(log_z) = z.
cplx kummer_psi_b1_log(cplx a, cplx z, cplx log_z);

}  // namespace pearcey
