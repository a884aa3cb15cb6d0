#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pearcey/chf.hpp"
#include "pearcey/errors.hpp"

using namespace pearcey;
constexpr double kPi = std::numbers::pi;

TEST_CASE("sectors") {
    CHECK(chf_sector_of(cplx(1.0, 0.1)) == 1);
    CHECK(chf_sector_of(cplx(0.0, 1.0)) == 2);
    CHECK(chf_sector_of(cplx(-1.0, 0.1)) == 3);
    CHECK(chf_sector_of(cplx(-1.0, -0.1)) == 4);
    CHECK(chf_sector_of(cplx(0.0, -1.0)) == 5);
    CHECK(chf_sector_of(cplx(1.0, -0.1)) == 6);
    CHECK_THROWS_AS(chf_sector_of(cplx(2.0, 0.0)), Error);
    CHECK_THROWS_AS(chf_sector_of(cplx(0.0)), Error);
    CHECK_THROWS_AS(phi_chf({cplx(0.0, 1.0), 3}, cplx(0.0, 0.1)), Error);
    CHECK_THROWS_AS(phi_chf(chf_point(cplx(0.0, 30.0)), cplx(0.0, 0.1)), Error);
    CHECK_THROWS_AS(phi_chf(chf_point(cplx(0.0, 1.0)), cplx(0.1, 0.1)), Error);
}

TEST_CASE("beta = 0 reduces to exponentials in the first sector") {
    for (cplx z : {cplx(2.0, 0.5), cplx(5.0, 0.1), cplx(0.8, 0.3)}) {
        const Eigen::Matrix2cd m = phi_chf(chf_point(z), 0.0);
        CHECK(std::abs(m(0, 0) - std::exp(-0.5 * cplx(0, 1) * z)) < 1e-13);
        CHECK(std::abs(m(1, 1) - std::exp(0.5 * cplx(0, 1) * z)) < 1e-13);
        CHECK(std::abs(m(0, 1)) + std::abs(m(1, 0)) < 1e-13);
    }
    for (int ray : {2, 3, 5, 6}) CHECK(chf_jump_residual(ray, 1.0, 0.0) < 1e-14);
    // elsewhere the unipotent jumps survive: sector 2 is sector 1 times [[1,0],[1,1]]
    const cplx z(1.0, 1.0);
    const Eigen::Matrix2cd m2 = phi_chf(chf_point(z), 0.0);
    CHECK(std::abs(m2(1, 0) - std::exp(0.5 * cplx(0, 1) * z)) < 1e-13);
    CHECK(std::abs(m2(0, 1)) < 1e-13);
}

TEST_CASE("jump residuals") {
    CHECK(chf_jump_residual(1, 2.0, cplx(0.0, 0.11)) <= 1e-9);
    CHECK(chf_jump_residual(4, 1.0, cplx(0.0, 0.2)) <= 1e-9);
    for (double b : {0.05, 0.11, 0.3})
        for (int ray = 1; ray <= 6; ++ray)
            for (double r : {0.5, 1.0, 2.0, 5.0}) CHECK(chf_jump_residual(ray, r, cplx(0.0, b)) <= 1e-9);
    CHECK_THROWS_AS(chf_jump_residual(7, 1.0, cplx(0.0, 0.1)), Error);
    CHECK_THROWS_AS(chf_jump_residual(1, 20.0, cplx(0.0, 0.1)), Error);
}

TEST_CASE("determinant is constant in each sector") {
    const cplx beta(0.0, 0.11);
    const cplx d1 = phi_chf(chf_point(cplx(1.0, 1.0)), beta).determinant();
    const cplx d2 = phi_chf(chf_point(cplx(2.0, 2.0)), beta).determinant();
    CHECK(std::abs(d1 - d2) < 1e-9);
    CHECK(chf_verify(beta).det_variation < 1e-9);
}

TEST_CASE("normalization at infinity") {
    CHECK(chf_infinity_error(25.0, 0.5 * kPi, cplx(0.0, 0.05)) < 5e-3);
    // The remainder is O(1/z): halving |z| roughly doubles it, in both half planes.
    const cplx beta(0.0, 0.11);
    for (double arg : {0.5 * kPi, 4.0 * kPi / 3.0, -0.25 * kPi}) {
        const double a = chf_infinity_error(8.0, arg, beta), b = chf_infinity_error(16.0, arg, beta);
        CHECK(a / b > 1.6);
        CHECK(a / b < 2.5);
    }
}

TEST_CASE("origin expansion") {
    const cplx b11(0.0, 0.11);
    const ChfExpansion x = chf_origin_expansion(b11);
    CHECK(std::abs(x.upsilon0(0, 0) - gamma_fn(1.0 - b11) * std::exp(-b11 * kPi * cplx(0, 1))) < 1e-15);
    CHECK(std::abs(x.upsilon0.determinant()) > 0.1);
    const ChfOriginCheck c = chf_origin_check(b11);
    CHECK(c.upsilon0_err < 1e-12);
    CHECK(c.sample_remainder <= 1e-4);
    CHECK(c.gamma_identity_err < 1e-12);
    const cplx b3(0.0, 0.3);
    const ChfOriginCheck c3 = chf_origin_check(b3);
    CHECK(std::abs(c3.upsilon1_21_numeric - b3 * kPi * cplx(0, 1) * std::exp(-b3 * kPi * cplx(0, 1)) / std::sin(b3 * kPi)) <
          1e-10);
    CHECK(c3.sample_upsilon1_21_err < 1e-4);
    CHECK_THROWS_AS(chf_origin_expansion(0.0), Error);
}

TEST_CASE("verification report") {
    const ChfReport r = chf_verify(cplx(0.0, 0.3));
    CHECK(r.rays.size() == 24);
    CHECK(r.max_ray_residual <= 1e-9);
    CHECK(r.origin.upsilon1_21_err <= 1e-10);
}
