#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pearcey/fredholm.hpp"
#include "pearcey/specfun.hpp"

namespace pearcey {

// The eight unknowns p_0..p_3, q_0..q_3 at abscissa s > 0.
struct HamState {
    std::array<cplx, 4> p{};
    std::array<cplx, 4> q{};
    double s = 1.0;
};

struct HamDerivative {
    std::array<cplx, 4> dp{};
    std::array<cplx, 4> dq{};
};

// Right-hand side of the eight-function system. Pole error at s = 0.
HamDerivative system_rhs(const HamState& st);
cplx hamiltonian_value(const HamState& st);

// sum_{k=1}^3 p_k q_k (zero on admissible data).
cplx constraint_sum(const HamState& st);
// p_3 q_1 + (p_0 + q_0 - rho/sqrt2)/sqrt2.
cplx first_integral_residual(const HamState& st, double rho);

// Exact s-derivatives of p_0, q_0 (orders 0..3) and H (orders 0..1) along the flow,
// by Taylor-mode composition of the right-hand side.
struct FlowDerivatives {
    std::array<cplx, 4> p0{}, q0{};
    std::array<cplx, 2> h{};
};
FlowDerivatives flow_derivatives(const HamState& st);

// Large-s boundary data: the leading terms of the special solution at s >= 4, gamma < 1.
// With project = true, p_0 and q_0 are shifted by a common O(s^{-2/3}) amount so the
// first integral p_3 q_1 + (p_0 + q_0 - rho/sqrt2)/sqrt2 = 0 holds exactly.
HamState asymptotic_state(double s, const ModelParams& params, bool project = true);

// max over groups of |d/ds closed form - rhs| / (s^{1/3} |group|), the derivative
// taken by central differences of the unprojected closed forms.
double asymptotic_system_residual(double s, const ModelParams& params);

struct TrajectorySample {
    double s = 0.0;
    HamState state;
    cplx h;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool backward = true;
    std::string ic_source;
    double max_constraint_drift = 0.0;  // max |sum p_k q_k| over accepted steps
    int steps = 0;
    int rejected = 0;
    int sweep_iterations = 0;  // special_trajectory only
    std::vector<double> breakpoints;  // sample abscissae closing each uniform piece
};

struct IntegrateOptions {
    double tol = 1e-9;       // relative
    double abs_floor = 1e-12;
    double max_step = 0.05;
    int min_samples = 200;
    std::string ic_source = "asymptotic";
};

// Embedded Dormand-Prince 5(4). Samples land exactly on a uniform grid of spacing
// at most 0.025 with an even number of intervals. Convergence error on step
// failure; Numerical error if |sum p_k q_k| > 1e-3 or a component overflows.
// Backward over long ranges this initial-value problem is exponentially
// unstable: the subdominant p-mode ~ exp(-theta_3) relative to the physical one
// grows by about exp((9/8)(s_from^{4/3} - s^{4/3})), so use special_trajectory for
// the special solution and this for short arcs.
Trajectory integrate(double s_from, double s_to, const HamState& init, const ModelParams& params,
                     const IntegrateOptions& opt = {});

struct SweepOptions {
    double step = 0.0025;   // RK4 step bound on the internal grid
    double tol = 1e-13;     // fixed-point tolerance on the coefficients p0, q0, 2 p2 q2/s
    int max_iter = 200;
    int min_samples = 200;
    std::vector<double> also_sample;  // extra abscissae in (s_end, s0) that must be samples
};

// The special solution on [s_end, s0], s0 in [4, 12], by a decoupled sweep:
//  - q solves the linear q-system backward from the asymptotic data at s0 (stable
//    direction), combined over two independent starts so that q_2(0) = 0;
//  - p solves the adjoint system forward from the regular start (0, 1, 0) at s = 0;
//  - p0 + q0 from the first integral, p0 - q0 by quadrature from the exact s = 0 values;
//  - the one free scale p -> lambda p is fixed by H(s0) = h_large_s(s0).
// Coefficients are iterated to self-consistency. Samples run from s0 down to s_end
// on a piecewise-uniform grid (spacing <= 0.025, even count per piece).
Trajectory special_trajectory(double s0, double s_end, const ModelParams& params, const SweepOptions& opt = {});

struct IdentityRow {
    double s = 0.0;
    double dh_form1 = 0.0;      // |H' - (p3 q1 - 2 p2^2 q2^2 / s^2)|
    double dh_form2 = 0.0;      // |H' - form in p0, q0 and derivatives|
    double dh_forms_gap = 0.0;  // |form1 - form2|
    double action = 0.0;        // action-differential identity
    double first_integral = 0.0;
    double pq2 = 0.0;           // |p2 q2 - p0' q0' / (sqrt2 D)|
    double zero_curvature = 0.0;  // relative
    double constraint = 0.0;    // |sum_{k>=1} p_k q_k|
};
// Absolute residuals except zero_curvature, which is scaled by the size of its terms.
// Terms with the denominator D = p0 + q0 - rho/sqrt2 are reported as 0 when all
// p_k, q_k (k >= 1) vanish, where both sides are identically zero.
std::vector<IdentityRow> identity_report(const Trajectory& traj, double rho);
IdentityRow identity_row(const HamState& st, double rho);

struct CoupledResidual {
    double third_order = 0.0;   // relative residual of the p0''' equation
    double second_order = 0.0;  // relative residual of the q0'' equation
};
// Degeneracy error when |D| < 1e-8, except on the trivial solution (all p_k, q_k
// with k >= 1 zero), where both residuals are exactly 0.
CoupledResidual coupled_p0q0_residual(const HamState& st, double rho);
// Maximum over the samples nearest to each requested abscissa.
CoupledResidual coupled_p0q0_residual(const Trajectory& traj, double rho, const std::vector<double>& at);

struct IntegralCheck {
    double f_diff = 0.0;      // F(s_hi) - F(s_lo) from the Fredholm determinant
    double h_integral = 0.0;  // 2 int_{s_lo}^{s_hi} H by Simpson's rule
    double discrepancy = 0.0;
};
// 0.5 <= s_lo < s_hi <= 10; special_trajectory anchored at s0, s_hi <= s0 <= 12.
IntegralCheck integral_representation_check(double s_lo, double s_hi, const ModelParams& params, double s0 = 10.0);

// CSV: s, Re/Im of p0..p3, q0..q3, Re H, Im H, then the identity residual columns.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double rho);

}  // namespace pearcey
