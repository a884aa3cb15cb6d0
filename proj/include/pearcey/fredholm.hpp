#pragma once

#include "pearcey/quadrature.hpp"

namespace pearcey {

struct ModelParams {
    double gamma = 0.0;  // thinning parameter in [0, 1]
    double rho = 0.0;
};

struct DetResult {
    double f = 0.0;        // ln det(I - gamma K) on (-s, s)
    int order = 0;         // Gauss-Legendre order used
    double err_est = 0.0;  // |F_n - F_{n/2}| when available, else 0
    bool sign_ok = true;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// Nystrom log-determinant with n nodes; gamma in [0, 1], 0 < s <= 12.
DetResult fredholm_logdet(double s, const ModelParams& params, int n);
// Same discretization for any real gamma <= 1 (gamma < 0 arises from the MGF at
// negative nu). Throws Sign if the determinant is not positive.
DetResult fredholm_logdet_general(double s, double gamma, double rho, int n);

// Doubles n from 16 until |F_{2n} - F_n| < tol (tol >= 1e-12) or n would exceed 2048.
DetResult logdet_converged(double s, const ModelParams& params, double tol);
DetResult logdet_converged_general(double s, double gamma, double rho, double tol);

// -R(s,s) - R(-s,-s) for the resolvent R = gamma K (I - gamma K)^{-1}, i.e. dF/ds.
double resolvent_boundary_trace(double s, const ModelParams& params, int n);

// E N(s) = tr(WK), Var N(s) = tr(WK) - tr((WK)^2).
Moments moments_trace(double s, double rho, int n);
// Same moments from central differences in nu of F(s; 1 - e^{-2 pi nu}, rho),
// steps 1e-3 and 5e-4 combined by Richardson extrapolation.
Moments moments_mgf(double s, double rho, int n);

}  // namespace pearcey
