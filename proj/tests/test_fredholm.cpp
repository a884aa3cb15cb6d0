#include <cmath>

#include "doctest.h"
#include "pearcey/errors.hpp"
#include "pearcey/fredholm.hpp"
#include "pearcey/kernel.hpp"
#include "pearcey/quadrature.hpp"

using namespace pearcey;

TEST_CASE("gamma = 0 gives F = 0 exactly") {
    for (double rho : {-1.0, 0.0, 2.0}) CHECK(fredholm_logdet(2.0, {0.0, rho}, 32).f == 0.0);
    const DetResult d = logdet_converged(3.0, {0.0, 1.0}, 1e-10);
    CHECK(d.f == 0.0);
    CHECK(d.order == 16);
}

TEST_CASE("order doubling at small s") {
    const double a = fredholm_logdet(0.5, {0.5, 0.0}, 32).f, b = fredholm_logdet(0.5, {0.5, 0.0}, 64).f;
    CHECK(std::fabs(a - b) < 1e-10);
}

TEST_CASE("F is negative and decreasing in s and gamma") {
    const double f2 = fredholm_logdet(2.0, {0.5, 0.0}, 96).f, f4 = fredholm_logdet(4.0, {0.5, 0.0}, 96).f;
    CHECK(f4 < f2);
    CHECK(f2 < 0.0);
    CHECK(fredholm_logdet(3.0, {0.9, 1.0}, 96).f < fredholm_logdet(3.0, {0.4, 1.0}, 96).f);
}

TEST_CASE("convergence driver") {
    const DetResult d = logdet_converged(6.0, {0.5, 0.0}, 1e-10);
    CHECK(d.order <= 256);
    CHECK(d.err_est < 1e-10);
    CHECK(d.sign_ok);
    // Spectral convergence: successive differences shrink until they reach roundoff.
    double prev = 1.0;
    for (int n : {8, 16, 32}) {
        const double e = std::fabs(fredholm_logdet(4.0, {0.9, 1.0}, 2 * n).f - fredholm_logdet(4.0, {0.9, 1.0}, n).f);
        CHECK(e < prev);
        prev = e;
    }
    CHECK_THROWS_AS(logdet_converged(2.0, {0.5, 0.0}, 1e-13), Error);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(fredholm_logdet(13.0, {0.5, 0.0}, 32), Error);
    CHECK_THROWS_AS(fredholm_logdet(-1.0, {0.5, 0.0}, 32), Error);
    CHECK_THROWS_AS(fredholm_logdet(2.0, {1.5, 0.0}, 32), Error);
    CHECK_THROWS_AS(fredholm_logdet(2.0, {0.5, 0.0}, 4096), Error);
}

TEST_CASE("negative gamma is admitted by the general entry point") {
    const double f = fredholm_logdet_general(2.0, -0.5, 0.0, 64).f;
    CHECK(f > 0.0);
}

TEST_CASE("resolvent boundary trace is dF/ds") {
    const ModelParams p{0.5, 0.0};
    const double h = 1e-3;
    const double fd = (fredholm_logdet(3.0 + h, p, 128).f - fredholm_logdet(3.0 - h, p, 128).f) / (2.0 * h);
    CHECK(std::fabs(resolvent_boundary_trace(3.0, p, 128) - fd) < 1e-6);
    CHECK(resolvent_boundary_trace(3.0, {0.0, 0.0}, 64) == 0.0);
}

TEST_CASE("moments") {
    // mean against direct quadrature of K(x, x)
    const QuadratureRule& g = gauss_legendre(80);
    double mean = 0.0;
    for (int i = 0; i < 80; ++i) mean += 2.0 * g.weights[i] * kernel_diagonal(2.0 * g.nodes[i], 0.0);
    CHECK(std::fabs(moments_trace(2.0, 0.0, 96).mean - mean) < 1e-8);

    const Moments a = moments_trace(3.0, 0.0, 96), b = moments_mgf(3.0, 0.0, 96);
    CHECK(std::fabs(a.mean - b.mean) < 1e-6);
    CHECK(std::fabs(a.variance - b.variance) < 1e-5);
    CHECK(a.variance > 0.0);

    const double s = 0.05;
    CHECK(std::fabs(moments_trace(s, 0.0, 16).mean - 2.0 * s * kernel_diagonal(0.0, 0.0)) < 1e-4);
}
