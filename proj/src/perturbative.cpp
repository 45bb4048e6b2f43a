#include "ellipcmr/perturbative.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <sstream>

#include "ellipcmr/detail/recursion.hpp"
#include "ellipcmr/error.hpp"

namespace ellipcmr {

namespace {

using mp_cplx = boost::multiprecision::cpp_complex_50;

void check_inputs(double s1, double s2, double gamma, int K)
{
    if (!std::isfinite(s1) || !std::isfinite(s2) || !std::isfinite(gamma))
        fail(ErrorCode::domain, "s and gamma must be finite");
    if (K < 0)
        fail(ErrorCode::domain, "truncation order K must be non-negative");
}

PSeriesTable from_core(const detail::RecursionCore<cplx>& core, Variant v, double s1, double s2, double gamma,
                       cplx kappa, int n_cap)
{
    PSeriesTable t;
    t.variant = v;
    t.K = core.K();
    t.n_cap = n_cap;
    t.s1 = s1;
    t.s2 = s2;
    t.gamma = gamma;
    t.kappa = kappa;
    t.a = core.table();
    t.eps = core.eps();
    t.free_entries = core.free_entries();
    return t;
}

LaurentPSeries empty_like(const LaurentPSeries& f)
{
    LaurentPSeries r = f;
    for (auto& row : r.c)
        std::fill(row.begin(), row.end(), cplx(0.0));
    return r;
}

} // namespace

cplx PSeriesTable::at(int n, int k) const
{
    if (k < 0 || k > K || n > n_max(k)) {
        std::ostringstream os;
        os << "a(" << n << "," << k << ") is outside the table window";
        fail(ErrorCode::window, os.str());
    }
    if (n < -k)
        return 0.0;
    return a[k][n + k];
}

std::vector<cplx> PSeriesTable::constant_part() const
{
    std::vector<cplx> c(K + 1);
    for (int k = 0; k <= K; ++k)
        c[k] = at(0, k);
    return c;
}

double PSeriesTable::max_abs() const
{
    double m = 0.0;
    for (const auto& row : a)
        for (const cplx& v : row)
            m = std::max(m, std::abs(v));
    return m;
}

PSeriesTable solve_variant_I(double s1, double s2, double gamma, int K, const PerturbOptions& opt, cplx kappa)
{
    check_inputs(s1, s2, gamma, K);
    detail::RecursionCore<cplx> core(s1, s2, gamma, kappa, K, opt.n_cap, true, opt.resonance_tol);
    core.run();
    return from_core(core, Variant::I, s1, s2, gamma, kappa, opt.n_cap);
}

PSeriesTable solve_variant_II(double s1, double s2, double gamma, cplx kappa, int K, const PerturbOptions& opt)
{
    check_inputs(s1, s2, gamma, K);
    detail::RecursionCore<cplx> core(s1, s2, gamma, kappa, K, opt.n_cap, false, opt.resonance_tol);
    core.run();
    return from_core(core, Variant::II, s1, s2, gamma, kappa, opt.n_cap);
}

cplx LaurentPSeries::at(int n, int k) const
{
    if (k < 0 || k > K || n > n_hi[k]) {
        std::ostringstream os;
        os << "series coefficient (" << n << "," << k << ") is outside the window";
        fail(ErrorCode::window, os.str());
    }
    if (n < -k)
        return 0.0;
    return c[k][n + k];
}

double LaurentPSeries::max_abs() const
{
    double m = 0.0;
    for (const auto& row : c)
        for (const cplx& v : row)
            m = std::max(m, std::abs(v));
    return m;
}

LaurentPSeries to_series(const PSeriesTable& t)
{
    LaurentPSeries f;
    f.K = t.K;
    f.s1 = t.s1;
    f.s2 = t.s2;
    f.c = t.a;
    for (int k = 0; k <= t.K; ++k)
        f.n_hi.push_back(t.n_max(k));
    return f;
}

LaurentPSeries operator+(const LaurentPSeries& a, const LaurentPSeries& b)
{
    if (a.K != b.K || a.n_hi != b.n_hi || a.s1 != b.s1 || a.s2 != b.s2)
        fail(ErrorCode::mismatch, "series windows differ");
    LaurentPSeries r = a;
    for (std::size_t k = 0; k < r.c.size(); ++k)
        for (std::size_t i = 0; i < r.c[k].size(); ++i)
            r.c[k][i] += b.c[k][i];
    return r;
}

LaurentPSeries operator*(cplx c, const LaurentPSeries& a)
{
    LaurentPSeries r = a;
    for (auto& row : r.c)
        for (cplx& v : row)
            v *= c;
    return r;
}

LaurentPSeries euler(const LaurentPSeries& f, int i)
{
    if (i != 1 && i != 2)
        fail(ErrorCode::domain, "Euler operator index must be 1 or 2");
    LaurentPSeries r = f;
    for (int k = 0; k <= f.K; ++k)
        for (int n = -k; n <= f.n_hi[k]; ++n)
            r.c[k][n + k] *= (i == 1) ? n + f.s1 : f.s2 - n;
    return r;
}

LaurentPSeries nome_euler(const LaurentPSeries& f)
{
    LaurentPSeries r = f;
    for (int k = 0; k <= f.K; ++k)
        for (cplx& v : r.c[k])
            v *= double(k);
    return r;
}

LaurentPSeries times_p_series(const std::vector<cplx>& e, const LaurentPSeries& f)
{
    LaurentPSeries r = empty_like(f);
    for (int k = 0; k <= f.K; ++k)
        for (int n = -k; n <= f.n_hi[k]; ++n) {
            cplx acc = 0.0;
            for (int j = 0; j <= k && j < int(e.size()); ++j)
                acc += e[j] * f.at(n, k - j);
            r.c[k][n + k] = acc;
        }
    return r;
}

LaurentPSeries times_wp_series(const LaurentPSeries& f)
{
    // The p^j part of W is sum over divisors m of j of m (u^m + u^-m); the
    // p^0 part is sum_{m >= 1} m u^m, cut off by the support n >= -k.
    LaurentPSeries r = empty_like(f);
    for (int k = 0; k <= f.K; ++k)
        for (int n = -k; n <= f.n_hi[k]; ++n) {
            cplx acc = 0.0;
            for (int m = 1; n - m >= -k; ++m)
                acc += double(m) * f.at(n - m, k);
            for (int j = 1; j <= k; ++j)
                for (int m = 1; m <= j; ++m)
                    if (j % m == 0)
                        acc += double(m) * (f.at(n - m, k - j) + f.at(n + m, k - j));
            r.c[k][n + k] = acc;
        }
    return r;
}

LaurentPSeries apply_L_series(const PSeriesTable& t)
{
    const LaurentPSeries f = to_series(t);
    LaurentPSeries r = (-t.kappa) * nome_euler(f);
    r = r + 0.5 * euler(euler(f, 1), 1);
    r = r + 0.5 * euler(euler(f, 2), 2);
    r = r + (-1.0) * times_p_series(t.eps, f);
    r = r + (-t.gamma) * times_wp_series(f);
    return r;
}

double series_residual(const PSeriesTable& t)
{
    return apply_L_series(t).max_abs() / t.max_abs();
}

PSeriesTable divide_by_constant_part(const PSeriesTable& tII)
{
    const auto C = tII.constant_part();
    // 1/C as a p-series
    std::vector<cplx> inv(tII.K + 1, 0.0);
    inv[0] = 1.0 / C[0];
    for (int k = 1; k <= tII.K; ++k) {
        cplx acc = 0.0;
        for (int j = 1; j <= k; ++j)
            acc += C[j] * inv[k - j];
        inv[k] = -acc / C[0];
    }
    LaurentPSeries q = times_p_series(inv, to_series(tII));
    PSeriesTable r = tII;
    r.variant = Variant::I;
    r.a = q.c;
    r.eps = gauge_energy(tII);
    return r;
}

namespace {

template <class C>
std::vector<C> log_nome_derivative(const std::vector<C>& c, const C& kappa)
{
    // q = p d/dp ln C solves q C = p C'
    const int K = int(c.size()) - 1;
    std::vector<C> q(K + 1, C(0));
    for (int k = 0; k <= K; ++k) {
        C acc = C(k) * c[k];
        for (int j = 0; j < k; ++j)
            acc -= q[j] * c[k - j];
        q[k] = acc / c[0];
    }
    for (auto& v : q)
        v *= kappa;
    return q;
}

} // namespace

std::vector<cplx> gauge_energy(const PSeriesTable& tII)
{
    auto e = log_nome_derivative(tII.constant_part(), tII.kappa);
    e[0] = 0.5 * (tII.s1 * tII.s1 + tII.s2 * tII.s2);
    return e;
}

GaugeExtrapolation eigenvalue_from_gauge(double s1, double s2, double gamma, int K, const GaugeOptions& opt)
{
    check_inputs(s1, s2, gamma, K);
    if (opt.j_max - opt.j_min < 1)
        fail(ErrorCode::domain, "Richardson needs at least two kappa values");

    std::vector<std::vector<mp_cplx>> rows; // rows[j][k]
    for (int j = opt.j_min; j <= opt.j_max; ++j) {
        const mp_cplx kappa(0, ldexp(boost::multiprecision::cpp_bin_float_50(1), -j));
        detail::RecursionCore<mp_cplx> core(mp_cplx(s1), mp_cplx(s2), mp_cplx(gamma), kappa, K, opt.n_cap, false,
                                            1e-30);
        core.run();
        std::vector<mp_cplx> c(K + 1);
        for (int k = 0; k <= K; ++k)
            c[k] = core.get(0, k);
        rows.push_back(log_nome_derivative(c, kappa));
    }

    GaugeExtrapolation out;
    out.eps.assign(K + 1, 0.0);
    out.change.assign(K + 1, 0.0);
    out.eps[0] = 0.5 * (s1 * s1 + s2 * s2);
    for (int k = 1; k <= K; ++k) {
        std::vector<mp_cplx> T;
        for (const auto& r : rows)
            T.push_back(r[k]);
        mp_cplx prev = T.back();
        for (int lev = 1; T.size() > 1; ++lev) {
            const mp_cplx f(std::ldexp(1.0, lev));
            prev = T.back();
            std::vector<mp_cplx> next;
            for (std::size_t i = 0; i + 1 < T.size(); ++i)
                next.push_back((f * T[i + 1] - T[i]) / (f - mp_cplx(1)));
            T = std::move(next);
        }
        const cplx v(static_cast<double>(T[0].real()), static_cast<double>(T[0].imag()));
        const cplx pv(static_cast<double>(prev.real()), static_cast<double>(prev.imag()));
        out.eps[k] = v;
        out.change[k] = std::abs(v - pv);
        if (out.change[k] > opt.max_rel_change * std::max(1.0, std::abs(v))) {
            std::ostringstream os;
            os << "kappa extrapolation did not settle at order " << k << " (change " << out.change[k] << ")";
            fail(ErrorCode::extrapolation, os.str());
        }
    }
    return out;
}

} // namespace ellipcmr
