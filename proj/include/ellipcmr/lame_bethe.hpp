#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ellipcmr/domain.hpp"

namespace ellipcmr {

struct BetheState {
    int n = 0;
    std::vector<cplx> t;
    cplx xi;
    cplx E;
    cplx constant; // E + (2n-1) sum wp1(t_j)

    double bethe_residual = 0.0;
    double ode_residual = 0.0;   // max |Lame residual|/|psi| over the check points (contour psi'')
    double xi_residual = 0.0;    // |residue at x = 0| / 2n, from a contour integral
    double energy_spread = 0.0;  // max |E(x) - E(x_ref)| over the check points
    double saddle_gradient = 0.0;
    double wronskian_ratio = 0.0; // |W[psi(x), psi(-x)] / (psi(x) psi(-x))| at x_ref
    bool degenerate = false;      // wronskian_ratio <= 1e-8

    int newton_iterations = 0;
    int homotopy_steps = 0;
};

struct BetheOptions {
    double newton_tol = 1e-12;
    int max_newton = 50;
    double step_factor = 1.5;
    double p_start = 1e-3;
    cplx x_ref{0.37, 0.0}; // in units of l
};

// sum_{k!=j} (zeta1(t_j - t_k) - zeta1(t_j) + zeta1(t_k)) for each j
std::vector<cplx> bethe_residuals(const std::vector<cplx>& t, const EllipticDomain& dom,
                                  const TruncationPolicy& pol = {});

// Newton on the Bethe equations with t_1 held at its seed value. Without a
// seed, starts from a built-in configuration at nome p_start and continues
// geometrically to dom.p(). The returned state is certified.
BetheState solve_bethe(int n, const EllipticDomain& dom, const std::optional<std::vector<cplx>>& seed = std::nullopt,
                       const BetheOptions& opt = {}, const TruncationPolicy& pol = {});

// Fills xi, E, constant and every residual field for the given roots.
BetheState certify_bethe(std::vector<cplx> t, const EllipticDomain& dom, const BetheOptions& opt = {},
                         const TruncationPolicy& pol = {});

// e^{xi x} prod theta1(x - t_j)/theta1(x)
cplx hermite_psi(cplx x, const BetheState& s, const EllipticDomain& dom, const TruncationPolicy& pol = {});
// psi'/psi
cplx hermite_logderiv(cplx x, const BetheState& s, const EllipticDomain& dom, const TruncationPolicy& pol = {});

// multipliers for x -> x + 2l and x -> x + 2 i delta
std::pair<cplx, cplx> bloch_multipliers(const BetheState& s, const EllipticDomain& dom);

struct EnergyReport {
    cplx E;
    cplx constant;
    double spread;
};
// E from the operator quotient at x_ref, certified at 10 further points.
EnergyReport energy_from_roots(const BetheState& s, const EllipticDomain& dom, cplx x_ref,
                               const TruncationPolicy& pol = {});

// G(t) = sum (xi t_j - n ln theta1(t_j)) + sum_{j<k} ln theta1(t_j - t_k), on the
// branch where every argument is real in (0, 2l). Throws ErrorCode::branch otherwise.
cplx saddle_G(const std::vector<cplx>& t, cplx xi, const EllipticDomain& dom, const TruncationPolicy& pol = {});
// xi - n zeta1(t_j) + sum_{k!=j} zeta1(t_j - t_k); branch free
std::vector<cplx> saddle_gradient(const std::vector<cplx>& t, cplx xi, const EllipticDomain& dom,
                                  const TruncationPolicy& pol = {});

} // namespace ellipcmr
