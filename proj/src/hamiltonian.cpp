#include "pearcey/hamiltonian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "pearcey/asymptotics.hpp"
#include "pearcey/errors.hpp"

namespace pearcey {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);
const cplx I(0.0, 1.0);

using Vec8 = std::array<cplx, 8>;  // p0..p3, q0..q3

// Truncated Taylor series in (s - s0) through order 3.
struct Jet {
    std::array<cplx, 4> c{};
    Jet() = default;
    Jet(cplx v) { c[0] = v; }
};
Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}
Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}
Jet operator-(const Jet& a) { return Jet{} - a; }
Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}
Jet operator*(double k, const Jet& a) {
    Jet r;
    for (int i = 0; i < 4; ++i) r.c[i] = k * a.c[i];
    return r;
}

template <class T>
std::array<T, 8> rhs_t(const std::array<T, 8>& y, const T& s, const T& inv_s) {
    const T &p0 = y[0], &p1 = y[1], &p2 = y[2], &p3 = y[3];
    const T &q0 = y[4], &q1 = y[5], &q2 = y[6], &q3 = y[7];
    const T w = 2.0 * (inv_s * (p2 * q2));  // recurring (2/s) p2 q2
    std::array<T, 8> d;
    d[0] = -kSqrt2 * (p3 * q2);
    d[4] = kSqrt2 * (p2 * q1);
    d[5] = q2 - w * q1;
    d[6] = kSqrt2 * (p0 * q1) + q3 + w * q2;
    d[7] = s * q1 + kSqrt2 * (q0 * q2) - w * q3;
    d[1] = -kSqrt2 * (p0 * p2) - s * p3 + w * p1;
    d[2] = -kSqrt2 * (p3 * q0) - p1 - w * p2;
    d[3] = -p2 + w * p3;
    return d;
}

template <class T>
T hamiltonian_t(const std::array<T, 8>& y, const T& s, const T& inv_s) {
    const T &p0 = y[0], &p1 = y[1], &p2 = y[2], &p3 = y[3];
    const T &q0 = y[4], &q1 = y[5], &q2 = y[6], &q3 = y[7];
    const T m = p1 * q1 - p2 * q2 + p3 * q3;
    return kSqrt2 * (p0 * (p2 * q1)) + kSqrt2 * (p3 * (q0 * q2)) + p1 * q2 + p2 * q3 + s * (p3 * q1) +
           0.5 * (inv_s * (m * m));
}

void check_s(double s, const char* where) {
    if (s == 0.0) fail(ErrorKind::Pole, std::string(where) + ": pole at s = 0");
    if (!(s > 0.0)) fail(ErrorKind::Domain, std::string(where) + ": requires s > 0");
}

Vec8 pack(const HamState& st) {
    return {st.p[0], st.p[1], st.p[2], st.p[3], st.q[0], st.q[1], st.q[2], st.q[3]};
}
HamState unpack(const Vec8& y, double s) {
    HamState st;
    for (int k = 0; k < 4; ++k) {
        st.p[k] = y[k];
        st.q[k] = y[4 + k];
    }
    st.s = s;
    return st;
}

Vec8 rhs_vec(const Vec8& y, double s) { return rhs_t<cplx>(y, cplx(s), cplx(1.0 / s)); }

Jet s_jet(double s) {
    Jet j;
    j.c = {s, 1.0, 0.0, 0.0};
    return j;
}
Jet inv_jet(double s) {
    const double u = 1.0 / s;
    Jet j;
    j.c = {u, -u * u, u * u * u, -u * u * u * u};
    return j;
}

// Taylor coefficients of all eight unknowns through order 3 (Picard on jets).
std::array<Jet, 8> state_jet(const HamState& st) {
    check_s(st.s, "flow_derivatives");
    std::array<Jet, 8> y;
    const Vec8 v = pack(st);
    for (int i = 0; i < 8; ++i) y[i] = Jet(v[i]);
    const Jet s = s_jet(st.s), inv = inv_jet(st.s);
    for (int k = 0; k < 3; ++k) {
        const auto d = rhs_t<Jet>(y, s, inv);
        for (int i = 0; i < 8; ++i) y[i].c[k + 1] = d[i].c[k] / double(k + 1);
    }
    return y;
}

bool trivial(const HamState& st) {
    for (int k = 1; k < 4; ++k)
        if (st.p[k] != 0.0 || st.q[k] != 0.0) return false;
    return true;
}

double finite_max(const Vec8& y) {
    double m = 0.0;
    for (const auto& v : y) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return INFINITY;
        m = std::max(m, std::abs(v));
    }
    return m;
}

constexpr int kGroup[8] = {0, 1, 1, 1, 2, 3, 3, 3};
double group_size(const Vec8& y, int first) {
    if (first == 0 || first == 4) return std::abs(y[first]);
    return std::sqrt(std::norm(y[first]) + std::norm(y[first + 1]) + std::norm(y[first + 2]));
}

}  // namespace

HamDerivative system_rhs(const HamState& st) {
    check_s(st.s, "system_rhs");
    const Vec8 d = rhs_vec(pack(st), st.s);
    HamDerivative r;
    for (int k = 0; k < 4; ++k) {
        r.dp[k] = d[k];
        r.dq[k] = d[4 + k];
    }
    return r;
}

cplx hamiltonian_value(const HamState& st) {
    check_s(st.s, "hamiltonian_value");
    return hamiltonian_t<cplx>(pack(st), cplx(st.s), cplx(1.0 / st.s));
}

cplx constraint_sum(const HamState& st) { return st.p[1] * st.q[1] + st.p[2] * st.q[2] + st.p[3] * st.q[3]; }

cplx first_integral_residual(const HamState& st, double rho) {
    return st.p[3] * st.q[1] + (st.p[0] + st.q[0] - rho / kSqrt2) / kSqrt2;
}

FlowDerivatives flow_derivatives(const HamState& st) {
    const auto y = state_jet(st);
    FlowDerivatives f;
    const double fact[4] = {1.0, 1.0, 2.0, 6.0};
    for (int k = 0; k < 4; ++k) {
        f.p0[k] = fact[k] * y[0].c[k];
        f.q0[k] = fact[k] * y[4].c[k];
    }
    const Jet h = hamiltonian_t<Jet>(y, s_jet(st.s), inv_jet(st.s));
    f.h = {h.c[0], h.c[1]};
    return f;
}

HamState asymptotic_state(double s, const ModelParams& params, bool project) {
    if (!(s >= 4.0)) fail(ErrorKind::Domain, "asymptotic_state: requires s >= 4");
    if (!(params.gamma >= 0.0 && params.gamma < 1.0)) fail(ErrorKind::Domain, "asymptotic_state: requires 0 <= gamma < 1");
    const double rho = params.rho;
    const cplx beta = beta_of_gamma(params.gamma);
    const double th = theta3(s, rho);
    const double vt = vartheta(s, params);
    const double G = std::exp(gamma_bundle(1.0 - beta).ln_gamma.real());  // |Gamma(1 - beta)|
    const cplx K = 2.0 * std::sin(beta * kPi) / (3.0 * kPi);
    const cplx E = std::exp(0.5 * th + 2.0 / 3.0 * beta * kPi * I);
    const cplx Eq = std::exp(-0.5 * th - 2.0 / 3.0 * beta * kPi * I);
    const double c3 = std::cbrt(s);
    const cplx bi3 = kSqrt3 * beta * I;

    HamState st;
    st.s = s;
    if (params.gamma == 0.0) {
        // R vanishes identically; the q_k leading forms carry no factor that sees this
        st.p[0] = kSqrt2 / 2.0 * (rho * rho * rho / 54.0 + rho / 2.0);
        st.q[0] = kSqrt2 / 2.0 * (-rho * rho * rho / 54.0 + rho / 2.0);
        return st;
    }
    st.p[0] = std::sqrt(6.0) / 2.0 * beta * I * c3 * c3 + kSqrt2 / 2.0 * (rho * rho * rho / 54.0 + rho / 2.0);
    st.q[0] = -std::sqrt(6.0) / 2.0 * beta * I * c3 * c3 + kSqrt2 / 2.0 * (-rho * rho * rho / 54.0 + rho / 2.0);
    st.p[1] = -K * E * c3 * G * (std::cos(vt - kPi / 3) + bi3 * std::cos(vt + kPi / 3));
    st.p[2] = K * E * G * std::cos(vt);
    st.p[3] = -K * E / c3 * G * std::cos(vt + kPi / 3);
    st.q[1] = 2.0 * I * Eq / c3 * G * std::sin(vt - kPi / 3);
    st.q[2] = -2.0 * I * Eq * G * std::sin(vt);
    st.q[3] = 2.0 * I * Eq * c3 * G * (std::sin(vt + kPi / 3) - bi3 * std::sin(vt - kPi / 3));
    if (project) {
        const cplx shift = -0.5 * kSqrt2 * first_integral_residual(st, rho);
        st.p[0] += shift;
        st.q[0] += shift;
    }
    return st;
}

double asymptotic_system_residual(double s, const ModelParams& params) {
    const double h = 1e-4 * s;
    const Vec8 yp = pack(asymptotic_state(s + h, params, false));
    const Vec8 ym = pack(asymptotic_state(s - h, params, false));
    const Vec8 y = pack(asymptotic_state(s, params, false));
    const Vec8 d = rhs_vec(y, s);
    auto group = [&](int a, int b) {
        double num = 0.0, den = 0.0;
        for (int i = a; i < b; ++i) {
            num += std::norm((yp[i] - ym[i]) / (2.0 * h) - d[i]);
            den += std::norm(y[i]);
        }
        return std::sqrt(num / den) / std::cbrt(s);
    };
    return std::max(group(1, 4), group(5, 8));
}

Trajectory integrate(double s_from, double s_to, const HamState& init, const ModelParams& params,
                     const IntegrateOptions& opt) {
    if (!(s_from > 0.0 && s_to > 0.0) || s_from == s_to)
        fail(ErrorKind::Domain, "integrate: requires distinct positive endpoints");
    if (init.s != s_from) fail(ErrorKind::Domain, "integrate: initial state must sit at s_from");
    if (!(opt.tol > 0.0) || !(opt.max_step > 0.0) || opt.min_samples < 2)
        fail(ErrorKind::Domain, "integrate: invalid options");
    (void)params;

    // Dormand-Prince 5(4).
    static constexpr double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static constexpr double e[7] = {71.0 / 57600,    0,           -71.0 / 16695, 71.0 / 1920,
                                    -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    const double span = s_to - s_from;
    int n = std::max(opt.min_samples - 1, static_cast<int>(std::ceil(std::fabs(span) / 0.025)));
    if (n % 2) ++n;

    Trajectory tr;
    tr.backward = span < 0;
    tr.ic_source = opt.ic_source;
    Vec8 y = pack(init);
    double s = s_from;
    tr.samples.push_back({s, init, hamiltonian_value(init)});
    tr.max_constraint_drift = std::abs(constraint_sum(init));

    double h_try = std::copysign(std::min(1e-3, opt.max_step), span);
    std::array<Vec8, 7> k;
    for (int g = 1; g <= n; ++g) {
        const double target = g == n ? s_to : s_from + span * g / n;
        k[0] = rhs_vec(y, s);
        while (s != target) {
            if (std::fabs(h_try) > opt.max_step) h_try = std::copysign(opt.max_step, h_try);
            if (std::fabs(h_try) < 1e-12 * std::max(1.0, std::fabs(s)))
                fail(ErrorKind::Convergence, "integrate: step size underflow");
            // Stretch onto the sample point rather than leave a sliver behind.
            const bool last = std::fabs(h_try) >= std::fabs(target - s) * (1.0 - 1e-9);
            const double h = last ? target - s : h_try;
            for (int st = 1; st < 7; ++st) {
                Vec8 tmp = y;
                for (int j = 0; j < st; ++j)
                    if (a[st][j] != 0.0)
                        for (int i = 0; i < 8; ++i) tmp[i] += h * a[st][j] * k[j][i];
                k[st] = rhs_vec(tmp, s + c[st] * h);
            }
            Vec8 ynew = y;
            for (int j = 0; j < 6; ++j)
                for (int i = 0; i < 8; ++i) ynew[i] += h * a[6][j] * k[j][i];
            // Error scaled per group {p0}, {p1..p3}, {q0}, {q1..q3}: single p_k, q_k
            // pass through zero while the group size stays put.
            const double gy[4] = {group_size(y, 0), group_size(y, 1), group_size(y, 4), group_size(y, 5)};
            const double gn[4] = {group_size(ynew, 0), group_size(ynew, 1), group_size(ynew, 4), group_size(ynew, 5)};
            double err = 0.0;
            for (int i = 0; i < 8; ++i) {
                cplx ei = 0.0;
                for (int j = 0; j < 7; ++j) ei += e[j] * k[j][i];
                const int g = kGroup[i];
                const double sc = opt.abs_floor + opt.tol * std::max(gy[g], gn[g]);
                err = std::max(err, std::abs(h * ei) / sc);
            }
            if (!std::isfinite(err) || finite_max(ynew) > 1e150)
                fail(ErrorKind::Numerical, "integrate: state overflow");
            const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                y = ynew;
                s = last ? target : s + h;
                k[0] = k[6];  // first-same-as-last
                ++tr.steps;
                const double drift = std::abs(y[1] * y[5] + y[2] * y[6] + y[3] * y[7]);
                tr.max_constraint_drift = std::max(tr.max_constraint_drift, drift);
                if (drift > 1e-3) fail(ErrorKind::Numerical, "integrate: constraint sum p_k q_k exceeded 1e-3");
                if (!last) h_try *= fac;
            } else {
                ++tr.rejected;
                h_try = h * fac;
                if (tr.rejected > 1000000) fail(ErrorKind::Convergence, "integrate: too many rejected steps");
            }
        }
        HamState st = unpack(y, s);
        tr.samples.push_back({s, st, hamiltonian_value(st)});
    }
    return tr;
}

IdentityRow identity_row(const HamState& st, double rho) {
    const auto y = state_jet(st);
    const Jet sj = s_jet(st.s), ij = inv_jet(st.s);
    const Jet H = hamiltonian_t<Jet>(y, sj, ij);
    const double s = st.s;
    const cplx dH = H.c[1];
    auto val = [&](int i) { return y[i].c[0]; };
    auto der = [&](int i) { return y[i].c[1]; };
    const cplx p0 = val(0), p2 = val(2), p3 = val(3), q0 = val(4), q1 = val(5), q2 = val(6);

    IdentityRow r;
    r.s = s;
    const cplx form1 = p3 * q1 - 2.0 / (s * s) * p2 * p2 * q2 * q2;
    r.dh_form1 = std::abs(dH - form1);
    const cplx D = p0 + q0 - rho / kSqrt2;
    const bool triv = trivial(st);
    if (!triv) {
        const cplx pq = der(0) * der(4);
        const cplx form2 = -D / kSqrt2 - pq * pq / (s * s * D * D);
        r.dh_form2 = std::abs(dH - form2);
        r.dh_forms_gap = std::abs(form1 - form2);
        r.pq2 = std::abs(p2 * q2 - pq / (kSqrt2 * D));
    }

    cplx lhs = -H.c[0];
    for (int k = 0; k < 4; ++k) lhs += val(k) * der(4 + k);
    const Jet bracket = 2.0 * (y[0] * y[4]) + y[2] * y[6] + 2.0 * (y[3] * y[7]) - 3.0 * (sj * H);
    r.action = std::abs(lhs - H.c[0] - 0.25 * bracket.c[1]);
    r.first_integral = std::abs(first_integral_residual(st, rho));
    r.constraint = std::abs(constraint_sum(st));

    // A1 = (q1, q2, q3)^T (p1, p2, p3); A1' + [A1, M] = 0.
    Eigen::Matrix3cd A, dA, M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            A(i, j) = val(5 + i) * val(1 + j);
            dA(i, j) = der(5 + i) * val(1 + j) + val(5 + i) * der(1 + j);
        }
    const cplx p1 = val(1), q3 = val(7);
    M << 0.0, 1.0 - 2.0 * p2 * q1 / s, 0.0,
         kSqrt2 * p0 - 2.0 * p1 * q2 / s, 0.0, 1.0 - 2.0 * p3 * q2 / s,
         s, kSqrt2 * q0 - 2.0 * p2 * q3 / s, 0.0;
    const Eigen::Matrix3cd am = A * M, ma = M * A;
    const double scale = dA.norm() + am.norm() + ma.norm();
    r.zero_curvature = scale > 0.0 ? (dA + am - ma).norm() / scale : 0.0;
    return r;
}

std::vector<IdentityRow> identity_report(const Trajectory& traj, double rho) {
    std::vector<IdentityRow> rows;
    rows.reserve(traj.samples.size());
    for (const auto& smp : traj.samples) rows.push_back(identity_row(smp.state, rho));
    return rows;
}

CoupledResidual coupled_p0q0_residual(const HamState& st, double rho) {
    if (trivial(st)) return {};
    const FlowDerivatives f = flow_derivatives(st);
    const double s = st.s;
    const cplx p = f.p0[0], p1 = f.p0[1], p2 = f.p0[2], p3 = f.p0[3];
    const cplx q = f.q0[0], q1 = f.q0[1], q2 = f.q0[2];
    const cplx D = p + q - rho / kSqrt2;
    if (std::abs(D) < 1e-8) fail(ErrorKind::Singular, "coupled_p0q0_residual: p0 + q0 - rho/sqrt2 degenerate");

    const cplx t1 = rho * p1;
    const cplx t2 = -2.0 * kSqrt2 * q1 * p1 * p1 / (s * s * D);
    const cplx f1 = 1.0 + 2.0 * kSqrt2 / s * p1;
    const cplx g1 = s * D, g2 = (2.0 * q1 * p2 + q2 * p1) / D, g3 = -p1 * q1 * (2.0 * q1 + p1) / (D * D);
    const cplx rhs3 = t1 + t2 + f1 * (g1 + g2 + g3);
    const double sc3 = std::abs(p3) + std::abs(t1) + std::abs(t2) +
                       std::abs(f1) * (std::abs(g1) + std::abs(g2) + std::abs(g3));

    const cplx u1 = -p2, u2 = p1 * q1 / D * (3.0 + 2.0 * kSqrt2 / s * (p1 - q1));
    const cplx u3 = kSqrt2 * (p + q) * D;
    const double sc2 = std::abs(q2) + std::abs(u1) + std::abs(u2) + std::abs(u3);

    CoupledResidual r;
    r.third_order = std::abs(p3 - rhs3) / sc3;
    r.second_order = std::abs(q2 - (u1 + u2 + u3)) / sc2;
    return r;
}

CoupledResidual coupled_p0q0_residual(const Trajectory& traj, double rho, const std::vector<double>& at) {
    if (traj.samples.empty()) fail(ErrorKind::Domain, "coupled_p0q0_residual: empty trajectory");
    CoupledResidual worst;
    for (double s : at) {
        const auto it = std::min_element(traj.samples.begin(), traj.samples.end(), [s](const auto& l, const auto& r) {
            return std::fabs(l.s - s) < std::fabs(r.s - s);
        });
        const CoupledResidual r = coupled_p0q0_residual(it->state, rho);
        worst.third_order = std::max(worst.third_order, r.third_order);
        worst.second_order = std::max(worst.second_order, r.second_order);
    }
    return worst;
}

namespace {

using Vec3 = std::array<cplx, 3>;

// Coefficients of the linear q-system q' = B q; the p-system is p' = -B^T p.
struct Coeffs {
    cplx p0, q0, w;  // w = 2 p2 q2 / s
};

Vec3 q_rhs(const Coeffs& c, double s, const Vec3& q) {
    return {-c.w * q[0] + q[1], kSqrt2 * c.p0 * q[0] + c.w * q[1] + q[2], s * q[0] + kSqrt2 * c.q0 * q[1] - c.w * q[2]};
}
Vec3 p_rhs(const Coeffs& c, double s, const Vec3& p) {
    return {c.w * p[0] - kSqrt2 * c.p0 * p[1] - s * p[2], -p[0] - c.w * p[1] - kSqrt2 * c.q0 * p[2],
            -p[1] + c.w * p[2]};
}

Vec3 axpy(const Vec3& y, double h, const Vec3& k) { return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]}; }

// Classical RK4 across the node grid: even nodes are step points, odd nodes their
// midpoints (coefficients are tabulated on every node). Odd-node values are filled
// by cubic Hermite interpolation.
template <class Rhs>
std::vector<Vec3> sweep_linear(const std::vector<double>& t, const std::vector<Coeffs>& c, Vec3 y0, bool forward,
                               Rhs f) {
    const int n = static_cast<int>(t.size());
    std::vector<Vec3> y(n);
    const int first = forward ? 0 : n - 1, dir = forward ? 2 : -2;
    y[first] = y0;
    for (int i = first; forward ? i + 2 < n : i - 2 >= 0; i += dir) {
        const int m = i + dir / 2, e = i + dir;
        const double h = t[e] - t[i];
        const Vec3 k1 = f(c[i], t[i], y[i]);
        const Vec3 k2 = f(c[m], t[m], axpy(y[i], 0.5 * h, k1));
        const Vec3 k3 = f(c[m], t[m], axpy(y[i], 0.5 * h, k2));
        const Vec3 k4 = f(c[e], t[e], axpy(y[i], h, k3));
        for (int j = 0; j < 3; ++j) y[e][j] = y[i][j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        const Vec3 de = f(c[e], t[e], y[e]);
        for (int j = 0; j < 3; ++j) y[m][j] = 0.5 * (y[i][j] + y[e][j]) + h / 8.0 * (k1[j] - de[j]);
    }
    return y;
}

}  // namespace

Trajectory special_trajectory(double s0, double s_end, const ModelParams& params, const SweepOptions& opt) {
    if (!(s0 >= 4.0 && s0 <= 12.0)) fail(ErrorKind::Domain, "special_trajectory: requires 4 <= s0 <= 12");
    if (!(s_end > 0.0 && s_end < s0)) fail(ErrorKind::Domain, "special_trajectory: requires 0 < s_end < s0");
    if (!(opt.step > 0.0 && opt.step <= 0.01) || opt.min_samples < 2 || opt.max_iter < 1)
        fail(ErrorKind::Domain, "special_trajectory: invalid options");
    const double rho = params.rho;
    const cplx p0_zero = kSqrt2 / 2.0 * (rho * rho * rho / 54.0 + rho / 2.0);
    const cplx q0_zero = kSqrt2 / 2.0 * (-rho * rho * rho / 54.0 + rho / 2.0);

    // Sample breakpoints, then the node grid (step points plus midpoints).
    std::vector<double> bp{s_end};
    for (double a : opt.also_sample) {
        if (!(a > s_end && a < s0)) fail(ErrorKind::Domain, "special_trajectory: extra sample outside (s_end, s0)");
        bp.push_back(a);
    }
    bp.push_back(s0);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    std::vector<double> t;
    auto add_piece = [&](double a, double b, int steps) {
        for (int i = t.empty() ? 0 : 1; i <= 2 * steps; ++i) t.push_back(i == 2 * steps ? b : a + (b - a) * i / (2.0 * steps));
    };
    add_piece(0.0, s_end, std::max(2, static_cast<int>(std::ceil(s_end / opt.step))));
    std::vector<int> sample_nodes{static_cast<int>(t.size()) - 1};
    const double total = s0 - s_end;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        const double len = bp[k + 1] - bp[k];
        int ns = std::max(static_cast<int>(std::ceil(len / 0.025)),
                          static_cast<int>(std::ceil((opt.min_samples - 1) * len / total)));
        ns += ns % 2;
        const int stride = std::max(1, static_cast<int>(std::ceil(len / ns / opt.step)));
        const std::size_t base = t.size() - 1;
        add_piece(bp[k], bp[k + 1], ns * stride);
        for (int j = 1; j <= ns; ++j) sample_nodes.push_back(static_cast<int>(base) + 2 * stride * j);
    }
    const int n = static_cast<int>(t.size());

    Trajectory tr;
    tr.backward = true;
    tr.breakpoints = bp;
    tr.ic_source = "sweep: q from asymptotic data at s0, p regular at 0, scale from H(s0)";
    auto emit = [&](const std::vector<HamState>& states) {
        for (auto it = sample_nodes.rbegin(); it != sample_nodes.rend(); ++it) {
            const HamState& st = states[*it];
            tr.samples.push_back({st.s, st, hamiltonian_value(st)});
            tr.max_constraint_drift = std::max(tr.max_constraint_drift, std::abs(constraint_sum(st)));
        }
    };

    std::vector<HamState> states(n);
    if (params.gamma == 0.0) {  // trivial solution
        for (int i = 0; i < n; ++i) {
            states[i].s = t[i];
            states[i].p[0] = p0_zero;
            states[i].q[0] = q0_zero;
        }
        emit(states);
        return tr;
    }

    // Two independent starts in the recessive q-subspace at s0: the closed form and
    // the same form with the phase advanced by pi/2.
    const HamState a0 = asymptotic_state(s0, params);
    const double h_target = h_large_s(s0, params);
    const double vt = vartheta(s0, params);
    Vec3 qa{a0.q[1], a0.q[2], a0.q[3]}, qb;
    {
        const cplx beta = beta_of_gamma(params.gamma);
        const double G = std::exp(gamma_bundle(1.0 - beta).ln_gamma.real());
        const cplx Eq = std::exp(-0.5 * theta3(s0, rho) - 2.0 / 3.0 * beta * kPi * I);
        const double c3 = std::cbrt(s0), v = vt + 0.5 * kPi;
        const cplx bi3 = kSqrt3 * beta * I;
        qb = {2.0 * I * Eq / c3 * G * std::sin(v - kPi / 3), -2.0 * I * Eq * G * std::sin(v),
              2.0 * I * Eq * c3 * G * (std::sin(v + kPi / 3) - bi3 * std::sin(v - kPi / 3))};
    }

    std::vector<Coeffs> c(n, Coeffs{p0_zero, q0_zero, 0.0});
    std::vector<Vec3> P, Q;
    cplx lambda = 0.0;
    bool have_lambda = false, converged = false;
    for (int it = 1; it <= opt.max_iter && !converged; ++it) {
        tr.sweep_iterations = it;
        const auto ya = sweep_linear(t, c, qa, false, q_rhs);
        const auto yb = sweep_linear(t, c, qb, false, q_rhs);
        if (std::abs(yb[0][1]) == 0.0) fail(ErrorKind::Singular, "special_trajectory: degenerate q starts");
        const cplx mu = -ya[0][1] / yb[0][1];
        Q.assign(n, Vec3{});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 3; ++j) Q[i][j] = ya[i][j] + mu * yb[i][j];
        P = sweep_linear(t, c, Vec3{0.0, 1.0, 0.0}, true, p_rhs);

        // I(s) = int_0^s (p3 q2 + p2 q1), trapezoid with endpoint derivative correction.
        std::vector<cplx> f(n), df(n), I_(n);
        for (int i = 0; i < n; ++i) {
            const Vec3 dp = p_rhs(c[i], t[i], P[i]), dq = q_rhs(c[i], t[i], Q[i]);
            f[i] = P[i][2] * Q[i][1] + P[i][1] * Q[i][0];
            df[i] = dp[2] * Q[i][1] + P[i][2] * dq[1] + dp[1] * Q[i][0] + P[i][1] * dq[0];
        }
        I_[0] = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            const double d = t[i + 1] - t[i];
            I_[i + 1] = I_[i] + 0.5 * d * (f[i] + f[i + 1]) + d * d / 12.0 * (df[i] - df[i + 1]);
        }

        // H(s0; lambda) = a1 lambda + a2 lambda^2 once p0, q0 are written through lambda.
        const int e = n - 1;
        const Vec3 &pe = P[e], &qe = Q[e];
        const cplx x31 = pe[2] * qe[0], x21 = pe[1] * qe[0], x32 = pe[2] * qe[1];
        const cplx cpm = kSqrt2 * rho * rho * rho / 54.0;
        const cplx Ap = 0.5 * (rho / kSqrt2 + cpm), Aq = 0.5 * (rho / kSqrt2 - cpm);
        const cplx Bp = 0.5 * (-kSqrt2 * x31 - kSqrt2 * I_[e]), Bq = 0.5 * (-kSqrt2 * x31 + kSqrt2 * I_[e]);
        const cplx m = pe[0] * qe[0] - pe[1] * qe[1] + pe[2] * qe[2];
        const cplx a1 = kSqrt2 * Ap * x21 + kSqrt2 * Aq * x32 + pe[0] * qe[1] + pe[1] * qe[2] + s0 * x31;
        const cplx a2 = kSqrt2 * Bp * x21 + kSqrt2 * Bq * x32 + m * m / (2.0 * s0);
        cplx root;
        if (std::abs(a2) <= 1e-300) {
            root = h_target / a1;
        } else {
            const cplx disc = std::sqrt(a1 * a1 + 4.0 * a2 * h_target);
            const cplx r1 = (-a1 + disc) / (2.0 * a2), r2 = (-a1 - disc) / (2.0 * a2);
            const cplx ref = have_lambda ? lambda : h_target / a1;
            root = std::abs(r1 - ref) <= std::abs(r2 - ref) ? r1 : r2;
        }
        lambda = root;
        have_lambda = true;

        double change = 0.0, size = 0.0;
        for (int i = 0; i < n; ++i) {
            const cplx sum = rho / kSqrt2 - kSqrt2 * lambda * P[i][2] * Q[i][0];
            const cplx diff = cpm - kSqrt2 * lambda * I_[i];
            Coeffs nc;
            nc.p0 = 0.5 * (sum + diff);
            nc.q0 = 0.5 * (sum - diff);
            if (i == 0) {
                const cplx dq2 = kSqrt2 * nc.p0 * Q[0][0] + Q[0][2];  // q2(0) = 0
                nc.w = 2.0 * lambda * P[0][1] * dq2;
            } else {
                nc.w = 2.0 * lambda * P[i][1] * Q[i][1] / t[i];
            }
            change = std::max({change, std::abs(nc.p0 - c[i].p0), std::abs(nc.q0 - c[i].q0), std::abs(nc.w - c[i].w)});
            size = std::max({size, std::abs(nc.p0), std::abs(nc.q0), std::abs(nc.w)});
            c[i] = nc;
        }
        if (!std::isfinite(change)) fail(ErrorKind::Numerical, "special_trajectory: sweep diverged");
        converged = change <= opt.tol * std::max(1.0, size);
    }
    if (!converged) fail(ErrorKind::Convergence, "special_trajectory: sweep did not reach self-consistency");

    // Gauge p -> kappa p, q -> q/kappa chosen so p(s0) best matches the closed form.
    cplx num = 0.0;
    double den = 0.0;
    for (int j = 0; j < 3; ++j) {
        const cplx v = lambda * P[n - 1][j];
        num += std::conj(v) * a0.p[j + 1];
        den += std::norm(v);
    }
    const cplx kappa = den > 0.0 ? num / den : 1.0;
    for (int i = 0; i < n; ++i) {
        HamState& st = states[i];
        st.s = t[i];
        st.p[0] = c[i].p0;
        st.q[0] = c[i].q0;
        for (int j = 0; j < 3; ++j) {
            st.p[j + 1] = kappa * lambda * P[i][j];
            st.q[j + 1] = Q[i][j] / kappa;
        }
    }
    emit(states);
    return tr;
}

IntegralCheck integral_representation_check(double s_lo, double s_hi, const ModelParams& params, double s0) {
    if (!(0.5 <= s_lo && s_lo < s_hi && s_hi <= 10.0))
        fail(ErrorKind::Domain, "integral_representation_check: requires 0.5 <= s_lo < s_hi <= 10");
    if (!(s0 >= std::max(4.0, s_hi) && s0 <= 12.0))
        fail(ErrorKind::Domain, "integral_representation_check: requires max(4, s_hi) <= s0 <= 12");
    IntegralCheck out;
    if (params.gamma == 0.0) return out;

    SweepOptions opt;
    if (s_hi < s0) opt.also_sample = {s_hi};
    const Trajectory tr = special_trajectory(s0, s_lo, params, opt);

    // Composite Simpson over each uniform piece below s_hi (samples run downward).
    double acc = 0.0;
    std::size_t i = 0;
    while (tr.samples[i].s > s_hi) ++i;
    while (i + 1 < tr.samples.size()) {
        std::size_t j = i;
        while (j + 1 < tr.samples.size() &&
               std::find(tr.breakpoints.begin(), tr.breakpoints.end(), tr.samples[j + 1].s) == tr.breakpoints.end())
            ++j;
        ++j;  // closing breakpoint of this piece
        const int m = static_cast<int>(j - i);
        const double h = (tr.samples[i].s - tr.samples[j].s) / m;
        double piece = 0.0;
        for (int k = 0; k <= m; ++k) {
            const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            piece += w * tr.samples[i + k].h.real();
        }
        acc += piece * h / 3.0;
        i = j;
    }
    out.h_integral = 2.0 * acc;
    out.f_diff = logdet_converged(s_hi, params, 1e-11).f - logdet_converged(s_lo, params, 1e-11).f;
    out.discrepancy = std::fabs(out.f_diff - out.h_integral);
    return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double rho) {
    os << "s";
    for (const char* g : {"p", "q"})
        for (int k = 0; k < 4; ++k) os << ",re_" << g << k << ",im_" << g << k;
    os << ",re_H,im_H,res_dH_form1,res_dH_form2,res_action,res_first_integral,res_pq2,res_zero_curvature,"
          "constraint\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        os << buf;
    };
    for (const auto& smp : traj.samples) {
        std::snprintf(buf, sizeof buf, "%.17g", smp.s);
        os << buf;
        for (int k = 0; k < 4; ++k) {
            put(smp.state.p[k].real());
            put(smp.state.p[k].imag());
        }
        for (int k = 0; k < 4; ++k) {
            put(smp.state.q[k].real());
            put(smp.state.q[k].imag());
        }
        put(smp.h.real());
        put(smp.h.imag());
        const IdentityRow r = identity_row(smp.state, rho);
        for (double v : {r.dh_form1, r.dh_form2, r.action, r.first_integral, r.pq2, r.zero_curvature, r.constraint})
            put(v);
        os << '\n';
    }
}

}  // namespace pearcey
