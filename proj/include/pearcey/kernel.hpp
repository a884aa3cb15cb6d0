#pragma once

#include "pearcey/pearcey_fn.hpp"

namespace pearcey {

inline constexpr double kDiagonalBand = 1e-3;

// Numerator P(x)Q''(y) - P'(x)Q'(y) + P''(x)Q(y) - rho P(x)Q(y) of the rational form.
double kernel_numerator(double x, double y, double rho);

// Rational form, |x - y| >= 1e-3.
double kernel_rational(double x, double y, double rho);
// Taylor expansion of the rational form about y = x, |x - y| < 1e-3.
double kernel_diagonal_band(double x, double y, double rho);
// K(x, x) = x P Q + P' Q'' - P'' Q'.
double kernel_diagonal(double x, double rho);

// Oracle: the half-line integral of P(x+z)Q(y+z) with the z-integration done in
// closed form, leaving an absolutely convergent double contour integral
//   K = (-i/4pi^2) int_R ds int_Sigma dt exp(f(s) - f(t) + isx + ity)/(s + t),
// f(s) = -s^4/4 - rho s^2/2. |x|, |y| <= 12.
double kernel_integral(double x, double y, double rho, PanelOptions opt = {});

// Oracle: (1/(2 pi i (x-y))) (0 1 1) PsiTilde(y)^{-1} PsiTilde(x) (1 0 0)^T.
// Returns the complex value; the imaginary part is a realness diagnostic.
cplx kernel_rh_complex(double x, double y, double rho);
double kernel_rh(double x, double y, double rho);

// Scale g(x) with K(x,y) g(x)/g(y) = O(1): |P| decays and |Q| grows like
// exp(3/8 |x|^{4/3} + rho/4 |x|^{2/3}). Used as a diagonal similarity, which
// leaves determinants and diagonal resolvent values unchanged.
double kernel_balance_log(double x, double rho);

// Production evaluator with per-point memoization of P and Q.
class KernelSession {
public:
    explicit KernelSession(double rho) : rho_(rho) {}
    double rho() const { return rho_; }
    // Dispatches to the rational form or the diagonal band.
    double operator()(double x, double y);
    // Precompute P, Q at the given points (parallel).
    void warm(const std::vector<double>& pts);
    PearceyCache& cache() { return cache_; }

private:
    double rho_;
    PearceyCache cache_;
};

}  // namespace pearcey
