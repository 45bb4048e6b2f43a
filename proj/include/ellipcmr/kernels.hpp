#pragma once

#include <vector>

#include "ellipcmr/domain.hpp"

namespace ellipcmr {

// theta(z;p) = (1-z) prod_{n>=1} (1-p^n z)(1-p^n/z)
cplx theta_q(cplx z, double p, const TruncationPolicy& pol = {});

// Logarithmic derivatives of theta(w;p) in multiplicative variables:
// first = w d/dw ln theta, second = (w d/dw)^2 ln theta, nome = p d/dp ln theta.
struct ThetaQLogJet {
    cplx first;
    cplx second;
    cplx nome;
};
ThetaQLogJet theta_q_log_jet(cplx w, double p, const TruncationPolicy& pol = {});

// Analytic branch of ln theta(w;p) on the annulus p < |w| < 1, real on the
// positive axis. Throws ErrorCode::window outside the annulus.
cplx log_theta_q(cplx w, double p, const TruncationPolicy& pol = {});

// Odd theta function 2 sin(pi x/2l) prod (1-p^n z)(1-p^n/z), z = exp(i pi x/l).
cplx theta1(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol = {});

// Value of theta1 with its logarithmic x- and tau-derivatives, all term-wise.
struct Theta1Jet {
    cplx value;
    cplx zeta;     // theta1'/theta1
    cplx wp;       // -(ln theta1)''
    cplx dtau_log; // d/dtau ln theta1 at fixed x
};
Theta1Jet theta1_jet(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol = {});

cplx theta1_logderiv(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol = {});
cplx theta1_dtau(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol = {});

// theta1(x)^g. Integer g is single valued; otherwise x must be real in (0, 2l).
cplx theta1_pow(cplx x, double g, const EllipticDomain& dom, const TruncationPolicy& pol = {});

cplx wp1(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol = {});
cplx wp1_prime(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol = {});

// Fourier mode m of wp1 in z = exp(i pi x/l), valid for p < |z| < 1.
// plus[k], minus[k] are the coefficients of p^k in the z^m and z^-m terms.
struct WpFourierMode {
    int m;
    std::vector<double> plus;
    std::vector<double> minus;

    double plus_value(double p) const;
    double minus_value(double p) const;
};
// k_max < 0 keeps p-orders up to m*N_t from the policy, otherwise up to p^k_max.
std::vector<WpFourierMode> wp1_fourier_coeffs(const EllipticDomain& dom, const TruncationPolicy& pol,
                                              int m_max, int k_max = -1);

double heat_constant_c0(const EllipticDomain& dom, const TruncationPolicy& pol = {});
double eta1_over_omega1(const EllipticDomain& dom, const TruncationPolicy& pol = {});

// Gamma(z;p,q) = prod_{n,m>=0} (1 - p^{n+1} q^{m+1}/z) / (1 - p^n q^m z)
cplx elliptic_gamma(cplx z, const RuijsenaarsParams& par, const TruncationPolicy& pol = {});

// prod_{i!=j} theta(z_i/z_j;p)^g on the unit torus (real, non-negative)
double weight_W(const std::vector<cplx>& z, double g, double p, const TruncationPolicy& pol = {});
// prod_{i!=j} Gamma(t z_i/z_j)/Gamma(z_i/z_j)
cplx weight_Wrel(const std::vector<cplx>& z, const RuijsenaarsParams& par, const TruncationPolicy& pol = {});

// Distance of x to the nearest lattice point 2ml + 2niδ.
double lattice_distance(cplx x, const EllipticDomain& dom);

} // namespace ellipcmr
