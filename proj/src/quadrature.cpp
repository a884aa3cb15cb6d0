#include "pearcey/quadrature.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "pearcey/errors.hpp"

namespace pearcey {

namespace {

// Newton iteration on P_n evaluated by the three-term recurrence, in long double.
QuadratureRule build_rule(int n) {
    QuadratureRule r;
    r.order = n;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    const long double pi = std::numbers::pi_v<long double>;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-19L) break;
        }
        // one more derivative evaluation at the converged node
        long double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        long double w = 2 / ((1 - x * x) * dp * dp);
        r.nodes[n - 1 - i] = static_cast<double>(x);
        r.nodes[i] = static_cast<double>(-x);
        r.weights[i] = r.weights[n - 1 - i] = static_cast<double>(w);
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1 || n > 2048) fail(ErrorKind::Domain, "gauss_legendre: order must lie in [1, 2048]");
    static std::mutex m;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<QuadratureRule>(build_rule(n));
    return *slot;
}

template <class T>
T adaptive_gl(const std::function<T(double)>& f, double a, double b, double tol, int max_depth) {
    const auto& g10 = gauss_legendre(10);
    const auto& g20 = gauss_legendre(20);
    auto panel = [&](const QuadratureRule& g, double lo, double hi) {
        T acc{};
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int i = 0; i < g.order; ++i) acc += g.weights[i] * f(c + h * g.nodes[i]);
        return acc * h;
    };
    std::function<T(double, double, T, int)> rec = [&](double lo, double hi, T whole, int depth) -> T {
        T fine = panel(g20, lo, hi);
        if (std::abs(fine - whole) <= tol) return fine;
        if (depth >= max_depth) fail(ErrorKind::Convergence, "adaptive quadrature did not converge");
        double mid = 0.5 * (lo + hi);
        return rec(lo, mid, panel(g10, lo, mid), depth + 1) + rec(mid, hi, panel(g10, mid, hi), depth + 1);
    };
    return rec(a, b, panel(g10, a, b), 0);
}

template double adaptive_gl<double>(const std::function<double(double)>&, double, double, double, int);
template std::complex<double> adaptive_gl<std::complex<double>>(
    const std::function<std::complex<double>(double)>&, double, double, double, int);

}  // namespace pearcey
