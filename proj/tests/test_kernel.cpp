#include <cmath>

#include "doctest.h"
#include "pearcey/errors.hpp"
#include "pearcey/kernel.hpp"
#include "pearcey/quadrature.hpp"

using namespace pearcey;

TEST_CASE("numerator vanishes on the diagonal") {
    for (double x : {0.0, 1.0, -2.0}) CHECK(std::fabs(kernel_numerator(x, x, 0.0)) < 1e-10);
}

TEST_CASE("rational form against the two oracles") {
    CHECK(std::fabs(kernel_rational(1.0, -1.0, 0.0) - kernel_integral(1.0, -1.0, 0.0)) < 1e-8);
    CHECK(std::fabs(kernel_rational(2.0, 0.5, 1.0) - kernel_rh(2.0, 0.5, 1.0)) < 1e-8);
    CHECK(std::fabs(kernel_integral(1.3, -0.4, 0.5) - kernel_rational(1.3, -0.4, 0.5)) < 1e-8);
    CHECK(std::fabs(kernel_integral(0.8, 0.8, 0.0) - kernel_diagonal(0.8, 0.0)) < 1e-8);
    CHECK(std::fabs(kernel_rh_complex(-1.0, 3.0, 0.0).imag()) < 1e-9);
}

TEST_CASE("rational form refuses the diagonal band") {
    CHECK_THROWS_AS(kernel_rational(1.0, 1.0 + 5e-4, 0.0), Error);
    CHECK_THROWS_AS(kernel_rh(1.0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(kernel_integral(13.0, 0.0, 0.0), Error);
}

TEST_CASE("K(0,0) against the half-line integral of P Q") {
    // A truncated real half-line integral of P Q is not usable at double precision;
    // the double-contour form is checked under panel refinement instead.
    const double a = kernel_integral(0.0, 0.0, 0.0), b = kernel_integral(0.0, 0.0, 0.0, {2});
    CHECK(std::fabs(a - b) < 1e-10);
    CHECK(std::fabs(a - kernel_diagonal(0.0, 0.0)) < 1e-8);
}

TEST_CASE("diagonal band joins the rational form smoothly") {
    const double x = 1.0;
    // second difference across the switch on a 0.75e-3 grid
    const double f0 = kernel_diagonal_band(x, x + 0.5e-3, 0.0);
    const double f1 = kernel_rational(x, x + 1.25e-3, 0.0);
    const double f2 = kernel_rational(x, x + 2.0e-3, 0.0);
    CHECK(std::fabs(f0 - 2.0 * f1 + f2) < 1e-6);
    CHECK(std::fabs(kernel_diagonal_band(x, x, 0.0) - kernel_diagonal(x, 0.0)) < 1e-12);
}

TEST_CASE("diagonal limit of the rational form is first order") {
    const double x = 0.6, k = kernel_diagonal(x, 1.0);
    const double e2 = std::fabs(kernel_rational(x, x + 1e-2, 1.0) - k);
    const double e3 = std::fabs(kernel_rational(x, x + 1.5e-3, 1.0) - k);
    CHECK(e3 < e2);
    CHECK(e2 / e3 > 5.0);
    CHECK(e2 / e3 < 20.0);
}

TEST_CASE("one-point density is positive on [-5, 5]") {
    for (double rho : {-1.0, 0.0, 1.0})
        for (int i = 0; i <= 40; ++i) CHECK(kernel_diagonal(-5.0 + 0.25 * i, rho) > 0.0);
}

TEST_CASE("session dispatch matches the branch functions") {
    KernelSession ks(0.5);
    ks.warm({-1.0, 0.25, 2.0});
    CHECK(ks(-1.0, 2.0) == doctest::Approx(kernel_rational(-1.0, 2.0, 0.5)).epsilon(1e-14));
    CHECK(ks(0.25, 0.25) == doctest::Approx(kernel_diagonal(0.25, 0.5)).epsilon(1e-14));
}

TEST_CASE("balancing scale is even and grows like |x|^{4/3}") {
    CHECK(kernel_balance_log(2.0, 1.0) == kernel_balance_log(-2.0, 1.0));
    CHECK(kernel_balance_log(0.0, 0.0) == 0.0);
    CHECK(kernel_balance_log(8.0, 0.0) == doctest::Approx(0.375 * 16.0));
}

TEST_CASE("Gauss-Legendre rules") {
    const QuadratureRule& r1 = gauss_legendre(1);
    CHECK(r1.nodes[0] == 0.0);
    CHECK(r1.weights[0] == doctest::Approx(2.0));
    const QuadratureRule& r2 = gauss_legendre(2);
    CHECK(std::fabs(r2.nodes[1] - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::fabs(r2.weights[0] - 1.0) < 1e-15);
    const QuadratureRule& r3 = gauss_legendre(3);
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += r3.weights[i] * std::pow(r3.nodes[i], 4);
    CHECK(std::fabs(s - 0.4) < 1e-14);
    const QuadratureRule& r = gauss_legendre(257);
    double w = 0.0;
    for (double x : r.weights) w += x;
    CHECK(std::fabs(w - 2.0) < 1e-14);
    for (std::size_t i = 1; i < r.nodes.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
}
