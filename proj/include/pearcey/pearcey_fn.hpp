#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "pearcey/specfun.hpp"

namespace pearcey {

struct PearceyValues {
    cplx v0, v1, v2;  // value, first and second derivative
};

// Panel refinement factor: 1 is the production rule (width 0.2, 12 nodes);
// 2 halves the panel width. Used by convergence checks.
struct PanelOptions {
    int refine = 1;
};

// P(x) = (1/2pi) int_R exp(-t^4/4 - rho t^2/2 + i t x) dt, |x| <= 60.
PearceyValues pearcey_p(double x, double rho, PanelOptions opt = {});
// Q(y) = (1/2pi) int_Sigma exp(t^4/4 + rho t^2/2 + i t y) dt, |y| <= 60.
PearceyValues pearcey_q(double y, double rho, PanelOptions opt = {});

// k-th derivative by quadrature of (it)^k times the integrand, 0 <= k <= 4.
// Production code takes derivatives above two from the ODEs instead.
cplx pearcey_p_derivative(double x, double rho, int k, PanelOptions opt = {});
cplx pearcey_q_derivative(double y, double rho, int k, PanelOptions opt = {});

// Third derivatives from the Pearcey ODEs.
inline cplx p_third(const PearceyValues& p, double x, double rho) { return x * p.v0 + rho * p.v1; }
inline cplx q_third(const PearceyValues& q, double y, double rho) { return -y * q.v0 + rho * q.v1; }

// Contour solutions P_j(z) = int_{Gamma_j} exp(-t^4/4 - rho t^2/2 + i t z) dt, j = 0..5, |z| <= 40.
PearceyValues pearcey_pj(cplx z, double rho, int j, PanelOptions opt = {});

struct PsiTilde {
    Eigen::Matrix3cd m;  // columns P_0, P_1, P_4; rows value, ', ''
};
PsiTilde tilde_psi(double z, double rho, PanelOptions opt = {});

// Memo of P/Q evaluations keyed by the exact bits of (argument, rho). Guarded by a
// mutex so node precomputation may run on several threads.
class PearceyCache {
public:
    PearceyValues p(double x, double rho);
    PearceyValues q(double y, double rho);
    std::size_t size() const;

private:
    struct Key {
        std::uint64_t arg, rho;
        bool is_q;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };
    mutable std::mutex mutex_;
    std::unordered_map<Key, PearceyValues, KeyHash> map_;
};

}  // namespace pearcey
