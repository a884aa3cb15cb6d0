#pragma once

#include <vector>

#include "pearcey/fredholm.hpp"
#include "pearcey/specfun.hpp"

namespace pearcey {

// beta = ln(1 - gamma)/(2 pi i), purely imaginary with Im beta >= 0; 0 <= gamma < 1.
cplx beta_of_gamma(double gamma);

struct GapAsymptotics {
    double leading = 0.0;     // (3 sqrt3/2) beta i s^{4/3}
    double subleading = 0.0;  // -sqrt3 rho beta i s^{2/3}
    double log_term = 0.0;    // -(8 beta^2/3) ln s
    double constant = 0.0;    // -2 beta^2 ln(9/2) + 2 ln(G(1+beta) G(1-beta))
    double total = 0.0;
};

// Large-gap expansion of F(s; gamma, rho) for gamma < 1.
GapAsymptotics f_large_gap(double s, const ModelParams& params);
// Undeformed case gamma = 1 with caller-supplied constant C.
double f_gamma1(double s, double rho, double C);

struct ConstantFit {
    double C = 0.0;        // fitted constant
    double C_err = 0.0;    // one standard error
    double slope = 0.0;    // coefficient of s^{-2/3} in the residual model
    double slope_err = 0.0;
    double rms = 0.0;      // residual root mean square of the two-parameter model
};
// Least squares of F_num(s) - f_gamma1(s, rho, 0) against C + a s^{-2/3}.
ConstantFit fit_gamma1_constant(const std::vector<double>& s, const std::vector<double>& f_num, double rho);

// Large-s Hamiltonian; with_oscillation = false drops the cos(2 theta) term.
double h_large_s(double s, const ModelParams& params, bool with_oscillation = true);
double h_gamma1(double s, double rho);

double theta3(double s, double rho);
double vartheta(double s, const ModelParams& params);

struct CountingStats {
    double mu = 0.0;
    double sigma2 = 0.0;
    double var_const = 0.0;
};
CountingStats counting_stats(double s, double rho);

// (9/2)^{2nu^2} G(1+i nu)^2 G(1-i nu)^2 exp(-2 pi mu nu + 2 pi^2 sigma^2 nu^2).
double mgf_prefactor(double nu, double s, double rho);

// sup_t |E exp(t (N - mu)/sigma) - exp(t^2/2)| with the expectation from the
// Fredholm determinant at gamma = 1 - exp(-2 pi nu), nu = -t/(2 pi sigma).
double clt_distance(double s, double rho, const std::vector<double>& t_grid, double tol = 1e-11);
// 21 equally spaced points on [-1, 1].
std::vector<double> default_clt_grid();

// Imaginary parts above this threshold raise instead of being discarded.
inline constexpr double kRealnessTol = 1e-12;

}  // namespace pearcey
