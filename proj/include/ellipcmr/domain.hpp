#pragma once

#include <complex>

namespace ellipcmr {

using cplx = std::complex<double>;

// Product/series cutoff. The number of retained factors is the smallest N_t
// with p^(N_t+1)/(1-p) * sup|u| <= tail_tol; inputs needing more than
// max_terms factors are rejected.
struct TruncationPolicy {
    int max_terms = 512;
    double tail_tol = 1e-14;

    int terms(double p, double sup_u) const;
};

// Half periods (ell, i*delta). p = 0 is admitted as the trigonometric
// degeneration, with delta = +infinity.
class EllipticDomain {
public:
    static EllipticDomain from_half_periods(double ell, double delta);
    static EllipticDomain from_nome(double ell, double p);

    double ell() const { return ell_; }
    double delta() const { return delta_; }
    double p() const { return p_; }
    bool trigonometric() const { return p_ == 0.0; }
    // tau = i*delta/ell; only meaningful for p > 0
    cplx tau() const { return {0.0, delta_ / ell_}; }
    // omega_0 = 0, omega_1 = ell, omega_2 = i delta, omega_3 = -ell - i delta
    cplx half_period(int nu) const;

private:
    EllipticDomain(double ell, double delta, double p) : ell_(ell), delta_(delta), p_(p) {}
    double ell_;
    double delta_;
    double p_;
};

struct RuijsenaarsParams {
    double p;
    double q;
    double t;

    void validate() const;
};

} // namespace ellipcmr
