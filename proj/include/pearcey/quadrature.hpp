#pragma once

#include <functional>
#include <vector>

namespace pearcey {

struct QuadratureRule {
    std::vector<double> nodes;    // increasing, on (-1, 1)
    std::vector<double> weights;  // positive, sum 2
    int order = 0;
};

// Gauss-Legendre rule of order n (1 <= n <= 2048). Cached per n; thread safe.
const QuadratureRule& gauss_legendre(int n);

// Adaptive Gauss-Legendre on [a, b] for a complex-valued smooth integrand.
// Bisects until the 10- and 20-point estimates on a panel agree to tol.
template <class T>
T adaptive_gl(const std::function<T(double)>& f, double a, double b, double tol, int max_depth = 40);

}  // namespace pearcey
