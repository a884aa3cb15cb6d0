#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "pearcey/specfun.hpp"

namespace pearcey {

// Confluent hypergeometric parametrix Phi(z; beta) for purely imaginary beta.
//
// Rays: Sigma_1..Sigma_6 at arguments 0, pi/6, 5pi/6, pi, 7pi/6, 11pi/6; rays 1, 2
// and 6 point away from the origin, rays 3, 4, 5 toward it. Sector k lies
// counterclockwise between Sigma_k and Sigma_{k+1} (sector 6 closes at Sigma_1).
// sigma_3 is the Pauli matrix diag(1, -1).

inline constexpr std::array<double, 6> kChfRayAngle = {0.0,
                                                       0.52359877559829887,   // pi/6
                                                       2.6179938779914944,    // 5pi/6
                                                       3.1415926535897932,    // pi
                                                       3.6651914291880923,    // 7pi/6
                                                       5.7595865315812871};   // 11pi/6

struct SectorPoint {
    cplx z;
    int sector = 1;  // 1..6
};

// Sector containing z; Domain error on a ray (within 1e-12 in angle) or at 0.
int chf_sector_of(cplx z);
SectorPoint chf_point(cplx z);

// Jump matrix on ray 1..6.
Eigen::Matrix2cd chf_jump(int ray, cplx beta);

// Phi in the sector of pt: the Kummer-psi matrix of the first sector continued
// counterclockwise, times the jump products. Requires 1e-3 <= |z| <= 25,
// beta purely imaginary with |beta| <= 0.5, and pt.sector matching z.
Eigen::Matrix2cd phi_chf(const SectorPoint& pt, cplx beta);

// ||Phi_+ - Phi_- J||_inf at r e^{i angle_ray}, 0.1 <= r <= 10. Boundary values are
// the sector formulas evaluated on the ray with the argument continued from each side.
double chf_jump_residual(int ray, double r, cplx beta);

// max entry of |Phi N^{-1} e^{(iz/2) sigma3} z^{beta sigma3} - I| at z = r e^{i arg},
// N the normalizing constant at infinity (I in the upper half plane), z^beta with
// -pi/2 < arg z < 3pi/2.
double chf_infinity_error(double r, double arg, cplx beta);

struct ChfExpansion {
    Eigen::Matrix2cd upsilon0;  // closed form
    cplx upsilon1_21;           // closed form beta pi i e^{-beta pi i}/sin(beta pi)
};
ChfExpansion chf_origin_expansion(cplx beta);

struct ChfOriginCheck {
    ChfExpansion closed;
    Eigen::Matrix2cd upsilon0_numeric;  // from a contour average of the analytic factor
    cplx upsilon1_21_numeric;
    double upsilon0_err = 0.0;       // max entry difference
    double upsilon1_21_err = 0.0;
    double sample_upsilon1_21_err = 0.0;  // from z in {1e-2, 5e-3} e^{3 pi i/4}, Richardson
    double sample_remainder = 0.0;        // first-order remainder at 5e-3 e^{3 pi i/4}
    double gamma_identity_err = 0.0;      // |sin(beta pi) e^{beta pi i}/pi + gamma/(2 pi i)|
};
ChfOriginCheck chf_origin_check(cplx beta);

struct ChfRayRow {
    int ray = 0;
    double r = 0.0;
    double residual = 0.0;
};
struct ChfReport {
    cplx beta;
    std::vector<ChfRayRow> rays;
    double max_ray_residual = 0.0;
    double det_variation = 0.0;       // max over sectors of |det Phi(z1) - det Phi(z2)|
    double infinity_upper = 0.0;      // |z| = 25, arg pi/2
    double infinity_lower = 0.0;      // |z| = 12.5, arg 4pi/3 and -pi/4
    ChfOriginCheck origin;
};
// Ray residuals at r in {0.5, 1, 2, 5}, determinant constancy, normalization and origin expansion.
ChfReport chf_verify(cplx beta);

}  // namespace pearcey
