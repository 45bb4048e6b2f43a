#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ellipcmr/domain.hpp"

namespace ellipcmr {

using Coords = std::vector<cplx>;

// A function of N coordinates together with whatever analytic derivatives
// the caller can supply. Missing second partials fall back to finite
// differences; dtau has no fallback.
struct SmoothField {
    std::function<cplx(const Coords&)> value;
    std::function<Coords(const Coords&)> d1; // d/dx_i, optional
    std::function<Coords(const Coords&)> d2; // d^2/dx_i^2, optional
    std::function<cplx(const Coords&)> dtau; // d/dtau at fixed x, optional

    double fd_step = 2e-3;
    double fd_tol = 1e-7;
};

// Second partial in coordinate i. With no analytic d2, uses the 4th-order
// stencil at h and h/2, requires them to agree to 10*fd_tol (relative to
// max(|psi|, |D|)) and returns the Richardson combination.
cplx second_partial(const SmoothField& f, const Coords& x, std::size_t i);
Coords second_partials(const SmoothField& f, const Coords& x);

struct CouplingSet {
    double g = 0.0;
    std::array<double, 4> g_nu{0.0, 0.0, 0.0, 0.0};

    double gamma() const { return g * (g - 1.0); }
    double gamma_nu(int nu) const { return g_nu.at(nu) * (g_nu.at(nu) - 1.0); }
};

// omega_0..omega_3 = 0, l, i delta, -l - i delta
std::array<cplx, 4> half_period_shifts(const EllipticDomain& dom);

// wp1(x + omega_nu). In the trigonometric domain the shifts by i delta are
// taken in the limit delta -> infinity, where they vanish.
cplx wp1_shifted(cplx x, int nu, const EllipticDomain& dom, const TruncationPolicy& pol = {});

// (H psi)(x) = -1/2 sum d_i^2 psi + gamma sum_{i<j} wp1(x_i - x_j) psi
cplx apply_ecs(const SmoothField& psi, const Coords& x, const CouplingSet& c, const EllipticDomain& dom,
               const TruncationPolicy& pol = {});

// (i pi kappa / 2 l^2 d_tau + H - E) psi
cplx nonstationary_residual(const SmoothField& psi, cplx kappa, cplx E, const Coords& x, const CouplingSet& c,
                            const EllipticDomain& dom, const TruncationPolicy& pol = {});

// E making the non-stationary residual vanish at x_ref.
cplx fit_generalized_eigenvalue(const SmoothField& psi, cplx kappa, const Coords& x_ref, const CouplingSet& c,
                                const EllipticDomain& dom, const TruncationPolicy& pol = {});

// (-d^2 + g(g-1) wp1(x + shifted*i delta) - E) psi, psi a one-coordinate field
cplx lame_residual(const SmoothField& psi, cplx E, cplx x, double g, const EllipticDomain& dom, bool shifted,
                   const TruncationPolicy& pol = {});

// (-d^2 + sum_nu g_nu(g_nu-1) wp1(x + omega_nu) - E) psi
cplx heun_residual(const SmoothField& psi, cplx E, cplx x, const CouplingSet& c, const EllipticDomain& dom,
                   const TruncationPolicy& pol = {});

// Deformed operator on (x, xt); psi takes the concatenation [x..., xt...].
cplx apply_deformed_ecs(const SmoothField& psi, const Coords& x, const Coords& xt, double g,
                        const EllipticDomain& dom, const TruncationPolicy& pol = {});

// Four particle families (x, xt, y, yt) with sizes (N1, M1, N2, M2);
// coords is their concatenation in that order.
struct FamilySizes {
    int n1 = 0, m1 = 0, n2 = 0, m2 = 0;
    int total() const { return n1 + m1 + n2 + m2; }
};
cplx apply_generalized_ecs(const FamilySizes& sizes, const SmoothField& psi, const Coords& coords, double g,
                           const EllipticDomain& dom, const TruncationPolicy& pol = {});

// D(z;p,q,t) f for sign = +1, D(z;p,1/q,1/t) f for sign = -1.
using LaurentFn = std::function<cplx(const Coords&)>;
cplx apply_ruijsenaars_D(const LaurentFn& f, const Coords& z, const RuijsenaarsParams& par, int sign,
                         const TruncationPolicy& pol = {});

struct KernelSpec {
    int n = 2;
    int m = 1;
    double g = 1.0;

    double kappa() const { return (n - m) * g; }
};

// [(i pi kappa/2l^2) d_tau + H_N(x) - H_M(y)] K / K, assembled from log-derivatives of K.
cplx kernel_identity_residual(const KernelSpec& spec, const Coords& x, const Coords& y, const EllipticDomain& dom,
                              const TruncationPolicy& pol = {});

// prod_{i<j} theta1(x_i - x_j)^g with analytic first/second partials and tau-derivative.
SmoothField ground_state_field(double g, const EllipticDomain& dom, const TruncationPolicy& pol = {});

} // namespace ellipcmr
