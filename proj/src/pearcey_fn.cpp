#include "pearcey/pearcey_fn.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "pearcey/errors.hpp"
#include "pearcey/quadrature.hpp"

namespace pearcey {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPanel = 0.2;
constexpr int kNodes = 12;
constexpr double kMinT = 4.8;
const cplx I(0.0, 1.0);

// sigma = +1: exp(-t^4/4 - rho t^2/2 + i t z); sigma = -1 flips the polynomial part.
inline cplx exponent(cplx t, double sigma, double rho, cplx z) {
    cplx t2 = t * t;
    return sigma * (-0.25 * t2 * t2 - 0.5 * rho * t2) + I * t * z;
}

// Smallest panel-aligned T >= 4.8 beyond which Re(exponent) stays 50 below its
// maximum along the ray. Only matters for large |z| or shifted lines.
double truncation(cplx origin, cplx dir, double sigma, double rho, cplx z) {
    constexpr int n = 1200;
    constexpr double h = 0.05;
    std::vector<double> v(n + 1);
    double mx = -INFINITY;
    for (int i = 0; i <= n; ++i) {
        v[i] = exponent(origin + dir * (i * h), sigma, rho, z).real();
        mx = std::max(mx, v[i]);
    }
    int last = 0;
    for (int i = 0; i <= n; ++i)
        if (v[i] >= mx - 50.0) last = i;
    if (last == n) fail(ErrorKind::Convergence, "Pearcey quadrature: integrand does not decay along ray");
    double T = std::max(kMinT, (last + 1) * h);
    return std::ceil(T / kPanel - 1e-9) * kPanel;
}

// m[k] = int_0^T (i t)^k exp(exponent(t)) dt along t = origin + dir r, k = 0..kmax.
void ray_moments(cplx origin, cplx dir, double sigma, double rho, cplx z, int kmax, int refine, cplx* m) {
    const double T = truncation(origin, dir, sigma, rho, z);
    const auto& g = gauss_legendre(kNodes);
    const double width = kPanel / refine;
    const int panels = static_cast<int>(std::lround(T / width));
    for (int k = 0; k <= kmax; ++k) m[k] = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = (p + 0.5) * width, hw = 0.5 * width;
        for (int i = 0; i < kNodes; ++i) {
            cplx t = origin + dir * (c + hw * g.nodes[i]);
            cplx f = std::exp(exponent(t, sigma, rho, z)) * (g.weights[i] * hw);
            cplx it = I * t;
            for (int k = 0; k <= kmax; ++k) {
                m[k] += f;
                f *= it;
            }
        }
    }
    for (int k = 0; k <= kmax; ++k) m[k] *= dir;
}

void check_refine(const PanelOptions& opt) {
    if (opt.refine < 1 || opt.refine > 64) fail(ErrorKind::Domain, "panel refinement must lie in [1, 64]");
}

// Moments of P up to order kmax; the real line is shifted to Im t = h through the
// two upper (x > 0) or lower saddles so that the size of the integrand matches P.
void p_moments(double x, double rho, int kmax, const PanelOptions& opt, cplx* out) {
    if (!(std::fabs(x) <= 60.0)) fail(ErrorKind::Domain, "pearcey_p: |x| must be <= 60");
    check_refine(opt);
    const double h = 0.5 * std::cbrt(x);
    const cplx origin(0.0, h);
    cplx a[5], b[5];
    ray_moments(origin, 1.0, 1.0, rho, x, kmax, opt.refine, a);
    ray_moments(origin, -1.0, 1.0, rho, x, kmax, opt.refine, b);
    for (int k = 0; k <= kmax; ++k) out[k] = (a[k] - b[k]) / (2.0 * kPi);
}

void q_moments(double y, double rho, int kmax, const PanelOptions& opt, cplx* out) {
    if (!(std::fabs(y) <= 60.0)) fail(ErrorKind::Domain, "pearcey_q: |y| must be <= 60");
    check_refine(opt);
    // rays at pi/4 and 5pi/4 run inward, 3pi/4 and 7pi/4 outward
    static const double ang[4] = {0.25 * kPi, 0.75 * kPi, 1.25 * kPi, 1.75 * kPi};
    static const double orient[4] = {-1.0, 1.0, -1.0, 1.0};
    // The V facing the growing side (lower for y > 0) gets its vertex moved so
    // its arms cross the two saddles; this removes cancellation between the arms.
    const cplx apex(0.0, 0.5 * (std::sqrt(3.0) - 1.0) * std::cbrt(y));
    const cplx upper = y < 0 ? apex : 0.0, lower = y > 0 ? apex : 0.0;
    for (int k = 0; k <= kmax; ++k) out[k] = 0.0;
    for (int r = 0; r < 4; ++r) {
        cplx m[5];
        ray_moments(r < 2 ? upper : lower, std::polar(1.0, ang[r]), -1.0, rho, y, kmax, opt.refine, m);
        for (int k = 0; k <= kmax; ++k) out[k] += orient[r] * m[k];
    }
    for (int k = 0; k <= kmax; ++k) out[k] /= 2.0 * kPi;
}

}  // namespace

PearceyValues pearcey_p(double x, double rho, PanelOptions opt) {
    cplx m[3];
    p_moments(x, rho, 2, opt, m);
    return {m[0], m[1], m[2]};
}

PearceyValues pearcey_q(double y, double rho, PanelOptions opt) {
    cplx m[3];
    q_moments(y, rho, 2, opt, m);
    return {m[0], m[1], m[2]};
}

cplx pearcey_p_derivative(double x, double rho, int k, PanelOptions opt) {
    if (k < 0 || k > 4) fail(ErrorKind::Domain, "derivative order must lie in [0, 4]");
    cplx m[5];
    p_moments(x, rho, k, opt, m);
    return m[k];
}

cplx pearcey_q_derivative(double y, double rho, int k, PanelOptions opt) {
    if (k < 0 || k > 4) fail(ErrorKind::Domain, "derivative order must lie in [0, 4]");
    cplx m[5];
    q_moments(y, rho, k, opt, m);
    return m[k];
}

PearceyValues pearcey_pj(cplx z, double rho, int j, PanelOptions opt) {
    if (j < 0 || j > 5) fail(ErrorKind::Domain, "pearcey_pj: j must lie in 0..5");
    if (!(std::abs(z) <= 40.0)) fail(ErrorKind::Domain, "pearcey_pj: |z| must be <= 40");
    check_refine(opt);
    // Half-lines towards +1, +i, -1, -i, each turned by delta inside its decay
    // sector (|delta| < pi/8). Distinct turns per j keep the additivity checks honest.
    static const double delta[6] = {0.0, kPi / 16, -kPi / 16, kPi / 16, -kPi / 16, 0.0};
    // (outward ray, inward ray) as powers of i
    static const int legs[6][2] = {{0, 2}, {0, 1}, {2, 1}, {2, 3}, {0, 3}, {1, 3}};
    const cplx turn = std::polar(1.0, delta[j]);
    static const cplx quarter[4] = {1.0, I, -1.0, -I};
    cplx out[3], in[3];
    ray_moments(0.0, quarter[legs[j][0]] * turn, 1.0, rho, z, 2, opt.refine, out);
    ray_moments(0.0, quarter[legs[j][1]] * turn, 1.0, rho, z, 2, opt.refine, in);
    return {out[0] - in[0], out[1] - in[1], out[2] - in[2]};
}

PsiTilde tilde_psi(double z, double rho, PanelOptions opt) {
    PsiTilde r;
    const int cols[3] = {0, 1, 4};
    for (int c = 0; c < 3; ++c) {
        PearceyValues v = pearcey_pj(z, rho, cols[c], opt);
        r.m(0, c) = v.v0;
        r.m(1, c) = v.v1;
        r.m(2, c) = v.v2;
    }
    return r;
}

std::size_t PearceyCache::KeyHash::operator()(const Key& k) const noexcept {
    std::uint64_t h = k.arg * 0x9E3779B97F4A7C15ULL;
    h ^= k.rho + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (k.is_q ? 0xA5A5A5A5ULL : 0));
}

PearceyValues PearceyCache::p(double x, double rho) {
    Key key{std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(rho), false};
    {
        std::lock_guard lock(mutex_);
        if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    PearceyValues v = pearcey_p(x, rho);
    std::lock_guard lock(mutex_);
    map_.emplace(key, v);
    return v;
}

PearceyValues PearceyCache::q(double y, double rho) {
    Key key{std::bit_cast<std::uint64_t>(y), std::bit_cast<std::uint64_t>(rho), true};
    {
        std::lock_guard lock(mutex_);
        if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    PearceyValues v = pearcey_q(y, rho);
    std::lock_guard lock(mutex_);
    map_.emplace(key, v);
    return v;
}

std::size_t PearceyCache::size() const {
    std::lock_guard lock(mutex_);
    return map_.size();
}

}  // namespace pearcey
