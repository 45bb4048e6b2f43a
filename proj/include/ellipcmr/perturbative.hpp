#pragma once

#include <utility>
#include <vector>

#include "ellipcmr/domain.hpp"

namespace ellipcmr {

enum class Variant { I, II };

// Coefficients a_{n,k} of sum a_{n,k} z1^{n+s1} z2^{-n+s2} p^k for the N = 2
// non-stationary eCS equation, with eps_k the p-expansion of the generalized
// eigenvalue in units of (pi/l)^2.
struct PSeriesTable {
    Variant variant = Variant::I;
    int K = 0;
    int n_cap = 16;
    double s1 = 0.0;
    double s2 = 0.0;
    double gamma = 0.0;
    cplx kappa{0.0, 0.0};
    std::vector<std::vector<cplx>> a; // a[k][n + k] for -k <= n <= n_max(k)
    std::vector<cplx> eps;
    std::vector<std::pair<int, int>> free_entries; // consistent resonances set to zero

    // n_cap + 2K - k: closed under the recursion and under wp-multiplication
    int n_max(int k) const { return n_cap + 2 * K - k; }
    // zero for n < -k; throws ErrorCode::window outside the stored range
    cplx at(int n, int k) const;
    // a_{0,k}, k = 0..K
    std::vector<cplx> constant_part() const;
    double max_abs() const;
};

struct PerturbOptions {
    int n_cap = 16;
    double resonance_tol = 1e-10;
};

// a_{0,k} = 0 for k >= 1; the (0,k) equation determines eps_k. kappa = 0 is
// the stationary problem; non-zero kappa gives the a_{0,k} = 0 gauge of the
// non-stationary one.
PSeriesTable solve_variant_I(double s1, double s2, double gamma, int K, const PerturbOptions& opt = {},
                             cplx kappa = 0.0);

// eps_k = 0 for k >= 1; every divisor n(n + s1 - s2) - k kappa must be non-zero.
PSeriesTable solve_variant_II(double s1, double s2, double gamma, cplx kappa, int K,
                              const PerturbOptions& opt = {});

// Truncated double series sum c_{n,k} u^n p^k (u = z1/z2) with prefactor
// z1^{s1} z2^{s2}, on the same window as the table it came from.
struct LaurentPSeries {
    int K = 0;
    double s1 = 0.0;
    double s2 = 0.0;
    std::vector<int> n_hi;            // per k
    std::vector<std::vector<cplx>> c; // c[k][n + k]

    cplx at(int n, int k) const; // zero below support, throws window above n_hi
    double max_abs() const;
};

LaurentPSeries to_series(const PSeriesTable& t);
LaurentPSeries operator+(const LaurentPSeries& a, const LaurentPSeries& b);
LaurentPSeries operator*(cplx c, const LaurentPSeries& a);
// z_i d/dz_i, i in {1, 2}
LaurentPSeries euler(const LaurentPSeries& f, int i);
// p d/dp
LaurentPSeries nome_euler(const LaurentPSeries& f);
// (sum_k e_k p^k) f
LaurentPSeries times_p_series(const std::vector<cplx>& e, const LaurentPSeries& f);
// sum_m m (u^m + sum_nu p^{m nu}(u^m + u^-m)) f, i.e. -(l/pi)^2 wp1(x1 - x2) f
LaurentPSeries times_wp_series(const LaurentPSeries& f);

// L f with L = -kappa p d/dp + (1/2)(z1 d1)^2 + (1/2)(z2 d2)^2 - eps - gamma W
LaurentPSeries apply_L_series(const PSeriesTable& t);
// max |L f| relative to the largest table entry
double series_residual(const PSeriesTable& t);

// a^I = a^II / C^II coefficient-wise, with C^II the constant part
PSeriesTable divide_by_constant_part(const PSeriesTable& tII);
// kappa p d/dp ln C^II, truncated at p^K. Entry 0 is eps_0.
std::vector<cplx> gauge_energy(const PSeriesTable& tII);

struct GaugeOptions {
    int j_min = 4; // kappa_j = i 2^{-j}
    int j_max = 12;
    int n_cap = 16;
    double max_rel_change = 1e-4; // last two Richardson levels
};

struct GaugeExtrapolation {
    std::vector<cplx> eps;
    std::vector<double> change; // |last level - previous level| per order
};

// kappa -> 0 limit of the Variant II gauge energy, by Richardson over
// kappa_j = i 2^{-j}, in 50-digit arithmetic.
GaugeExtrapolation eigenvalue_from_gauge(double s1, double s2, double gamma, int K, const GaugeOptions& opt = {});

} // namespace ellipcmr
