#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pearcey/errors.hpp"
#include "pearcey/pearcey_fn.hpp"

using namespace pearcey;
constexpr double kPi = std::numbers::pi;

TEST_CASE("P at the origin") {
    const PearceyValues p = pearcey_p(0.0, 0.0);
    const double exact = std::tgamma(0.25) / (kPi * std::pow(4.0, 0.75));
    CHECK(std::fabs(p.v0.real() - exact) < 1e-12);
    CHECK(std::abs(p.v1) < 1e-15);
}

TEST_CASE("Q is real on the real axis; even moments cancel at the origin") {
    CHECK(std::fabs(pearcey_q(0.7, 0.0).v0.imag()) < 1e-10);
    // t -> -t maps the contour onto itself with its orientation, so Q(0) = 0
    // while Q'(0) reduces to Gaussian integrals: 1/sqrt(pi)
    const PearceyValues q0 = pearcey_q(0.0, 0.0);
    CHECK(std::abs(q0.v0) < 1e-12);
    CHECK(std::abs(q0.v1 - 1.0 / std::sqrt(kPi)) < 1e-12);
    for (double y : {-8.0, -1.0, 3.0, 9.5}) {
        const PearceyValues q = pearcey_q(y, 0.5);
        CHECK(std::fabs(q.v0.imag()) <= 1e-10 * (1.0 + std::fabs(q.v0.real())));
    }
}

TEST_CASE("third derivatives by quadrature satisfy the Pearcey ODEs") {
    const PearceyValues p = pearcey_p(1.5, 1.0);
    CHECK(std::abs(pearcey_p_derivative(1.5, 1.0, 3) - p_third(p, 1.5, 1.0)) < 1e-7);
    const PearceyValues q = pearcey_q(-1.0, 0.5);
    CHECK(std::abs(pearcey_q_derivative(-1.0, 0.5, 3) - q_third(q, -1.0, 0.5)) < 1e-7);
}

TEST_CASE("panel refinement leaves values unchanged") {
    for (double x : {-7.0, 0.3, 12.0}) {
        const cplx a = pearcey_p(x, 1.0).v0, b = pearcey_p(x, 1.0, {2}).v0;
        CHECK(std::abs(a - b) <= 1e-11 * std::abs(a) + 1e-16);
        const cplx c = pearcey_q(x, -1.0).v0, d = pearcey_q(x, -1.0, {2}).v0;
        CHECK(std::abs(c - d) <= 1e-11 * std::abs(c));
    }
}

TEST_CASE("domain limits") {
    CHECK_THROWS_AS(pearcey_p(61.0, 0.0), Error);
    CHECK_THROWS_AS(pearcey_q(-61.0, 0.0), Error);
    CHECK_THROWS_AS(pearcey_pj(cplx(41.0, 0.0), 0.0, 0), Error);
    CHECK_THROWS_AS(pearcey_pj(cplx(0.0), 0.0, 6), Error);
}

TEST_CASE("contour additivity of the P_j") {
    const cplx z1(0.3), z2(0.0, -0.2);
    CHECK(std::abs(pearcey_pj(z1, 1.0, 0).v0 - (pearcey_pj(z1, 1.0, 1).v0 - pearcey_pj(z1, 1.0, 2).v0)) < 1e-9);
    CHECK(std::abs(pearcey_pj(z2, 0.0, 5).v0 - (pearcey_pj(z2, 0.0, 4).v0 - pearcey_pj(z2, 0.0, 1).v0)) < 1e-9);
    const cplx pts[] = {cplx(1.2, -0.7), cplx(-3.1, 2.2), cplx(0.4, 4.1), cplx(-2.0, -2.5)};
    for (cplx z : pts) {
        const PearceyValues p0 = pearcey_pj(z, 0.5, 0), p1 = pearcey_pj(z, 0.5, 1), p2 = pearcey_pj(z, 0.5, 2);
        CHECK(std::abs(p0.v1 - (p1.v1 - p2.v1)) < 1e-9 * (1.0 + std::abs(p0.v1)));
    }
}

TEST_CASE("derivatives of P_j at the origin") {
    CHECK(std::abs(pearcey_pj(0.0, 1.0, 0).v1) < 1e-12);
    CHECK(std::abs(pearcey_pj(0.0, 1.0, 1).v1 - pearcey_pj(0.0, 1.0, 4).v1) < 1e-12);
}

TEST_CASE("tilde Psi") {
    const PsiTilde t = tilde_psi(1.0, 0.0);
    const PearceyValues p = pearcey_p(1.0, 0.0);
    CHECK(std::abs(t.m(0, 0) - 2.0 * kPi * p.v0) < 1e-9);
    CHECK(std::abs(t.m(1, 0) - 2.0 * kPi * p.v1) < 1e-9);
    CHECK(std::abs(t.m(2, 0) - 2.0 * kPi * p.v2) < 1e-9);
    const PsiTilde t0 = tilde_psi(0.0, 0.0);
    CHECK(std::abs(t0.m(1, 1) - t0.m(1, 2)) < 1e-12);
    CHECK(std::abs(t0.m.determinant()) > 1e-6);
}

TEST_CASE("cache returns the direct values") {
    PearceyCache cache;
    const PearceyValues a = cache.p(0.37, 1.0), b = pearcey_p(0.37, 1.0);
    CHECK(a.v0 == b.v0);
    cache.p(0.37, 1.0);
    cache.q(0.37, 1.0);
    CHECK(cache.size() == 2);
}
