#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pearcey/asymptotics.hpp"
#include "pearcey/errors.hpp"
#include "pearcey/fredholm.hpp"
#include "pearcey/hamiltonian.hpp"

using namespace pearcey;

namespace {

const double kR2 = std::sqrt(2.0);

HamState trivial_state(double s, double rho) {
    HamState st;
    st.s = s;
    st.p[0] = kR2 / 2.0 * (rho * rho * rho / 54.0 + rho / 2.0);
    st.q[0] = kR2 / 2.0 * (-rho * rho * rho / 54.0 + rho / 2.0);
    return st;
}

HamState generic_state() {
    HamState st;
    st.s = 1.7;
    st.p = {cplx(0.3, 0.1), cplx(-0.4, 0.2), cplx(0.7, -0.3), cplx(0.2, 0.5)};
    st.q = {cplx(-0.1, 0.4), cplx(0.6, -0.2), cplx(-0.3, 0.1), cplx(0.0)};
    st.q[3] = -(st.p[1] * st.q[1] + st.p[2] * st.q[2]) / st.p[3];  // enforce sum p_k q_k = 0
    return st;
}

}  // namespace

TEST_CASE("trivial solution is stationary with H = 0") {
    const HamState st = trivial_state(3.0, 1.0);
    const HamDerivative d = system_rhs(st);
    for (int k = 0; k < 4; ++k) {
        CHECK(d.dp[k] == 0.0);
        CHECK(d.dq[k] == 0.0);
    }
    CHECK(hamiltonian_value(st) == 0.0);
    HamState z = st;
    z.s = 0.0;
    CHECK_THROWS_AS(system_rhs(z), Error);
}

TEST_CASE("right-hand side is Hamiltonian") {
    const HamState st = generic_state();
    const HamDerivative d = system_rhs(st);
    const double h = 1e-6;
    for (int k = 1; k < 4; ++k) {
        HamState a = st, b = st;
        a.p[k] += h, b.p[k] -= h;
        const cplx dh_dp = (hamiltonian_value(a) - hamiltonian_value(b)) / (2.0 * h);
        CHECK(std::abs(dh_dp - d.dq[k]) < 1e-7);
        a = st, b = st;
        a.q[k] += h, b.q[k] -= h;
        const cplx dh_dq = (hamiltonian_value(a) - hamiltonian_value(b)) / (2.0 * h);
        CHECK(std::abs(-dh_dq - d.dp[k]) < 1e-7);
    }
}

TEST_CASE("constraint is preserved by the flow") {
    const HamState st = generic_state();
    CHECK(std::abs(constraint_sum(st)) < 1e-15);
    const HamDerivative d = system_rhs(st);
    cplx dsum = 0.0;
    for (int k = 1; k < 4; ++k) dsum += d.dp[k] * st.q[k] + st.p[k] * d.dq[k];
    CHECK(std::abs(dsum) < 1e-10);
}

TEST_CASE("flow derivatives agree with the right-hand side") {
    const HamState st = generic_state();
    const FlowDerivatives f = flow_derivatives(st);
    const HamDerivative d = system_rhs(st);
    CHECK(f.p0[0] == st.p[0]);
    CHECK(std::abs(f.p0[1] - d.dp[0]) < 1e-15);
    CHECK(std::abs(f.q0[1] - d.dq[0]) < 1e-15);
    CHECK(std::abs(f.h[0] - hamiltonian_value(st)) < 1e-15);
}

TEST_CASE("asymptotic data") {
    const HamState z = asymptotic_state(5.0, {0.0, 1.0});
    for (int k = 1; k < 4; ++k) CHECK(std::abs(z.p[k]) + std::abs(z.q[k]) == 0.0);
    CHECK(std::abs(z.p[0] - kR2 / 2.0 * (1.0 / 54.0 + 0.5)) < 1e-15);
    CHECK(std::abs(z.q[0] - kR2 / 2.0 * (-1.0 / 54.0 + 0.5)) < 1e-15);

    const ModelParams p{0.5, 0.0};
    const HamState st = asymptotic_state(10.0, p);
    const cplx h = hamiltonian_value(st);
    CHECK(std::fabs(h.real() - h_large_s(10.0, p)) < 1e-2);
    CHECK(std::fabs(h.imag()) < 1e-8);
    CHECK(std::abs(constraint_sum(st)) < 1e-12);

    const ModelParams p1{0.5, 1.0};
    CHECK(std::abs(first_integral_residual(asymptotic_state(10.0, p1), 1.0)) < 1e-14);
    const double raw = std::abs(first_integral_residual(asymptotic_state(10.0, p1, false), 1.0));
    CHECK(raw < std::pow(10.0, -2.0 / 3.0));

    const double r8 = asymptotic_system_residual(8.0, p) * std::pow(8.0, 2.0 / 3.0);
    const double r16 = asymptotic_system_residual(16.0, p) * std::pow(16.0, 2.0 / 3.0);
    CHECK(r16 / r8 > 1.0 / 3.0);
    CHECK(r16 / r8 < 3.0);
    CHECK_THROWS_AS(asymptotic_state(3.0, p), Error);
    CHECK_THROWS_AS(asymptotic_state(5.0, {1.0, 0.0}), Error);
}

TEST_CASE("plain backward integration from the asymptotic data is unstable") {
    const ModelParams p{0.5, 0.0};
    CHECK_THROWS_AS(integrate(10.0, 0.5, asymptotic_state(10.0, p), p), Error);
}

TEST_CASE("short arcs of the integrator reproduce the special trajectory") {
    const ModelParams p{0.5, 0.0};
    SweepOptions so;
    so.also_sample = {5.0, 6.0};
    const Trajectory tr = special_trajectory(10.0, 4.0, p, so);
    auto at = [&](double s) {
        for (const auto& x : tr.samples)
            if (std::fabs(x.s - s) < 1e-12) return x;
        FAIL("sample missing");
        return tr.samples.front();
    };
    const Trajectory arc = integrate(6.0, 5.0, at(6.0).state, p);
    CHECK(arc.samples.size() >= 200);
    CHECK(arc.samples.back().s == 5.0);
    CHECK(std::abs(arc.samples.back().h - at(5.0).h) < 1e-9);
    CHECK(arc.max_constraint_drift < 1e-6);
}

TEST_CASE("special trajectory identities") {
    const ModelParams p{0.5, 0.0};
    const Trajectory tr = special_trajectory(10.0, 0.5, p);
    CHECK(tr.samples.size() >= 200);
    CHECK(tr.samples.front().s == 10.0);
    CHECK(tr.samples.back().s == 0.5);
    CHECK(tr.max_constraint_drift < 1e-6);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) CHECK(tr.samples[i].s < tr.samples[i - 1].s);
    for (const IdentityRow& r : identity_report(tr, p.rho)) {
        CHECK(std::fabs(r.s) > 0.0);
        CHECK(r.dh_forms_gap < 1e-9);
        CHECK(r.dh_form1 < 1e-9);
        CHECK(r.action < 1e-9);
        CHECK(r.first_integral < 1e-9);
        CHECK(r.pq2 < 1e-8);
        CHECK(r.zero_curvature < 1e-8);
        CHECK(r.constraint < 1e-6);
    }
    for (const auto& smp : tr.samples) CHECK(std::fabs(smp.h.imag()) < 1e-6);
    const CoupledResidual cr = coupled_p0q0_residual(tr, p.rho, {2.0, 5.0, 8.0});
    CHECK(cr.third_order < 1e-6);
    CHECK(cr.second_order < 1e-6);
    std::ostringstream os;
    write_trajectory_csv(os, tr, p.rho);
    const std::string csv = os.str();
    CHECK(csv.rfind("s,re_p0,im_p0", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == long(tr.samples.size()) + 1);
}

TEST_CASE("special trajectory at rho = 1 approaches the small-s limit") {
    const Trajectory tr = special_trajectory(10.0, 0.5, {0.5, 1.0});
    const double limit = kR2 / 2.0 * (1.0 / 54.0 + 0.5);
    CHECK(std::abs(tr.samples.back().state.p[0] - limit) < 0.1);
}

TEST_CASE("gamma = 0 trajectory is trivial") {
    const Trajectory tr = special_trajectory(10.0, 0.5, {0.0, 1.0});
    for (const IdentityRow& r : identity_report(tr, 1.0)) {
        CHECK(r.dh_form1 < 1e-7);
        CHECK(r.dh_form2 < 1e-7);
        CHECK(r.zero_curvature < 1e-7);
    }
    const CoupledResidual cr = coupled_p0q0_residual(tr.samples[10].state, 1.0);
    CHECK(cr.third_order == 0.0);
    CHECK(cr.second_order == 0.0);
    const IntegralCheck ic = integral_representation_check(0.5, 4.0, {0.0, 0.0});
    CHECK(ic.discrepancy == 0.0);
}

TEST_CASE("coupled equations at gamma = 0.3, rho = 1") {
    const Trajectory tr = special_trajectory(10.0, 3.5, {0.3, 1.0});
    const CoupledResidual cr = coupled_p0q0_residual(tr, 1.0, {4.0});
    CHECK(cr.second_order < 1e-7);
    CHECK(cr.third_order < 1e-6);
}

TEST_CASE("integral representation") {
    const ModelParams p{0.5, 0.0};
    const IntegralCheck a = integral_representation_check(0.5, 4.0, p, 8.0);
    const IntegralCheck b = integral_representation_check(0.5, 4.0, p, 12.0);
    CHECK(a.discrepancy <= 0.03 * std::fabs(a.f_diff));
    CHECK(b.discrepancy < a.discrepancy);
    CHECK_THROWS_AS(integral_representation_check(0.2, 4.0, p), Error);
}
