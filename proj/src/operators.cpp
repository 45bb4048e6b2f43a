#include "ellipcmr/operators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ellipcmr/error.hpp"
#include "ellipcmr/kernels.hpp"

namespace ellipcmr {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

cplx stencil2(const SmoothField& f, Coords x, std::size_t i, double h)
{
    const cplx x0 = x[i];
    auto at = [&](double s) {
        x[i] = x0 + s;
        return f.value(x);
    };
    const cplx c = at(0.0);
    return (-at(2 * h) + 16.0 * at(h) - 30.0 * c + 16.0 * at(-h) - at(-2 * h)) / (12.0 * h * h);
}

void check_distinct(const Coords& a, const Coords& b, bool same_family, const EllipticDomain& dom)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = same_family ? i + 1 : 0; j < b.size(); ++j)
            if (lattice_distance(a[i] - b[j], dom) < 1e-12 * dom.ell()) {
                std::ostringstream os;
                os << "coordinates " << a[i] << " and " << b[j] << " coincide modulo the period lattice";
                fail(ErrorCode::coincident, os.str());
            }
}

cplx pair_sum(const Coords& a, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            s += wp1(a[i] - a[j], dom, pol);
    return s;
}

// sum_{i,j} wp1(a_i - b_j + shift)
cplx cross_sum(const Coords& a, const Coords& b, bool shifted, const EllipticDomain& dom,
               const TruncationPolicy& pol)
{
    cplx s = 0.0;
    for (const cplx& u : a)
        for (const cplx& v : b)
            s += shifted ? wp1_shifted(u - v, 2, dom, pol) : wp1(u - v, dom, pol);
    return s;
}

Coords slice(const Coords& c, int from, int count) { return Coords(c.begin() + from, c.begin() + from + count); }

} // namespace

cplx second_partial(const SmoothField& f, const Coords& x, std::size_t i)
{
    if (i >= x.size())
        fail(ErrorCode::domain, "coordinate index out of range");
    if (f.d2)
        return f.d2(x).at(i);
    if (!f.value)
        fail(ErrorCode::domain, "field has no value callable");
    const double h = f.fd_step;
    const cplx a = stencil2(f, x, i, h);
    const cplx b = stencil2(f, x, i, h / 2);
    const double scale = std::max({std::abs(f.value(x)), std::abs(b), 1e-300});
    if (std::abs(a - b) > 10.0 * f.fd_tol * scale) {
        std::ostringstream os;
        os << "finite-difference second partial in coordinate " << i << " changes by " << std::abs(a - b) / scale
           << " (relative) when halving h = " << h;
        fail(ErrorCode::fd_inconsistent, os.str());
    }
    return (16.0 * b - a) / 15.0;
}

Coords second_partials(const SmoothField& f, const Coords& x)
{
    if (f.d2) {
        Coords d = f.d2(x);
        if (d.size() != x.size())
            fail(ErrorCode::domain, "analytic second partials have the wrong length");
        return d;
    }
    Coords d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        d[i] = second_partial(f, x, i);
    return d;
}

std::array<cplx, 4> half_period_shifts(const EllipticDomain& dom)
{
    std::array<cplx, 4> w{};
    for (int nu = 0; nu < 4; ++nu)
        w[nu] = dom.half_period(nu);
    return w;
}

cplx wp1_shifted(cplx x, int nu, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    if (nu < 0 || nu > 3)
        fail(ErrorCode::domain, "half period index must be 0..3");
    if (dom.trigonometric() && nu >= 2)
        return 0.0;
    return wp1(x + dom.half_period(nu), dom, pol);
}

cplx apply_ecs(const SmoothField& psi, const Coords& x, const CouplingSet& c, const EllipticDomain& dom,
               const TruncationPolicy& pol)
{
    check_distinct(x, x, true, dom);
    const Coords d2 = second_partials(psi, x);
    cplx kin = 0.0;
    for (const cplx& v : d2)
        kin += v;
    cplx pot = 0.0;
    if (c.gamma() != 0.0)
        pot = c.gamma() * pair_sum(x, dom, pol);
    return -0.5 * kin + pot * psi.value(x);
}

cplx nonstationary_residual(const SmoothField& psi, cplx kappa, cplx E, const Coords& x, const CouplingSet& c,
                            const EllipticDomain& dom, const TruncationPolicy& pol)
{
    if (!psi.dtau)
        fail(ErrorCode::domain, "non-stationary residual needs an analytic tau-derivative");
    const double l = dom.ell();
    const cplx t = (kappa != 0.0) ? I * pi * kappa / (2.0 * l * l) * psi.dtau(x) : cplx(0.0);
    return t + apply_ecs(psi, x, c, dom, pol) - E * psi.value(x);
}

cplx fit_generalized_eigenvalue(const SmoothField& psi, cplx kappa, const Coords& x_ref, const CouplingSet& c,
                                const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const cplx v = psi.value(x_ref);
    if (std::abs(v) == 0.0)
        fail(ErrorCode::zero_argument, "field vanishes at the reference point");
    return nonstationary_residual(psi, kappa, 0.0, x_ref, c, dom, pol) / v;
}

cplx lame_residual(const SmoothField& psi, cplx E, cplx x, double g, const EllipticDomain& dom, bool shifted,
                   const TruncationPolicy& pol)
{
    const Coords pt{x};
    const cplx d2 = second_partial(psi, pt, 0);
    const double gam = g * (g - 1.0);
    cplx pot = 0.0;
    if (gam != 0.0)
        pot = gam * wp1_shifted(x, shifted ? 2 : 0, dom, pol);
    return -d2 + (pot - E) * psi.value(pt);
}

cplx heun_residual(const SmoothField& psi, cplx E, cplx x, const CouplingSet& c, const EllipticDomain& dom,
                   const TruncationPolicy& pol)
{
    const Coords pt{x};
    const cplx d2 = second_partial(psi, pt, 0);
    cplx pot = 0.0;
    for (int nu = 0; nu < 4; ++nu)
        if (c.gamma_nu(nu) != 0.0)
            pot += c.gamma_nu(nu) * wp1_shifted(x, nu, dom, pol);
    return -d2 + (pot - E) * psi.value(pt);
}

cplx apply_deformed_ecs(const SmoothField& psi, const Coords& x, const Coords& xt, double g,
                        const EllipticDomain& dom, const TruncationPolicy& pol)
{
    FamilySizes s;
    s.n1 = static_cast<int>(x.size());
    s.m1 = static_cast<int>(xt.size());
    Coords all = x;
    all.insert(all.end(), xt.begin(), xt.end());
    return apply_generalized_ecs(s, psi, all, g, dom, pol);
}

cplx apply_generalized_ecs(const FamilySizes& sz, const SmoothField& psi, const Coords& coords, double g,
                           const EllipticDomain& dom, const TruncationPolicy& pol)
{
    if (sz.n1 < 0 || sz.m1 < 0 || sz.n2 < 0 || sz.m2 < 0 || sz.total() != static_cast<int>(coords.size()))
        fail(ErrorCode::domain, "family sizes do not match the coordinate count");
    if (g == 0.0 && (sz.m1 > 0 || sz.m2 > 0))
        fail(ErrorCode::domain, "deformed families need g != 0");
    const Coords x = slice(coords, 0, sz.n1);
    const Coords xt = slice(coords, sz.n1, sz.m1);
    const Coords y = slice(coords, sz.n1 + sz.m1, sz.n2);
    const Coords yt = slice(coords, sz.n1 + sz.m1 + sz.n2, sz.m2);
    for (const Coords* a : {&x, &xt, &y, &yt})
        check_distinct(*a, *a, true, dom);
    check_distinct(x, xt, false, dom);
    check_distinct(y, yt, false, dom);

    const Coords d2 = second_partials(psi, coords);
    cplx kin = 0.0;
    for (int i = 0; i < sz.total(); ++i) {
        const bool tilde = (i >= sz.n1 && i < sz.n1 + sz.m1) || i >= sz.n1 + sz.m1 + sz.n2;
        kin += tilde ? 0.5 * g * d2[i] : -0.5 * d2[i];
    }

    const double gam = g * (g - 1.0);
    const double gam_t = (sz.m1 > 0 || sz.m2 > 0) ? 1.0 / g - 1.0 : 0.0;
    const double mix = 1.0 - g;
    cplx pot = 0.0;
    if (gam != 0.0)
        pot += gam * (pair_sum(x, dom, pol) + pair_sum(y, dom, pol) + cross_sum(x, y, true, dom, pol));
    if (gam_t != 0.0)
        pot -= gam_t * (pair_sum(xt, dom, pol) + pair_sum(yt, dom, pol) + cross_sum(xt, yt, true, dom, pol));
    if (mix != 0.0)
        pot += mix * (cross_sum(x, xt, false, dom, pol) + cross_sum(y, yt, false, dom, pol) +
                      cross_sum(x, yt, true, dom, pol) + cross_sum(xt, y, true, dom, pol));
    return kin + pot * psi.value(coords);
}

cplx apply_ruijsenaars_D(const LaurentFn& f, const Coords& z, const RuijsenaarsParams& par, int sign,
                         const TruncationPolicy& pol)
{
    par.validate();
    if (sign != 1 && sign != -1)
        fail(ErrorCode::domain, "sign must be +1 or -1");
    const double q = sign > 0 ? par.q : 1.0 / par.q;
    const double t = sign > 0 ? par.t : 1.0 / par.t;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        cplx coef = 1.0;
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (j == i)
                continue;
            const cplx r = z[i] / z[j];
            const cplx den = theta_q(r, par.p, pol);
            if (std::abs(den) < 1e-14)
                fail(ErrorCode::pole, "coefficient pole: z_i/z_j at a zero of theta");
            coef *= theta_q(t * r, par.p, pol) / den;
        }
        Coords shifted = z;
        shifted[i] *= q;
        acc += coef * f(shifted);
    }
    return acc;
}

cplx kernel_identity_residual(const KernelSpec& spec, const Coords& x, const Coords& y, const EllipticDomain& dom,
                              const TruncationPolicy& pol)
{
    if (static_cast<int>(x.size()) != spec.n || static_cast<int>(y.size()) != spec.m)
        fail(ErrorCode::domain, "coordinate counts do not match the kernel spec");
    if (spec.n + spec.m <= 0)
        fail(ErrorCode::domain, "kernel needs N + M > 0");
    check_distinct(x, x, true, dom);
    check_distinct(y, y, true, dom);
    check_distinct(x, y, false, dom);

    const double g = spec.g, l = dom.ell();
    const double gam = g * (g - 1.0);
    const std::size_t n = x.size(), m = y.size();
    Coords lx(n, 0.0), ly(m, 0.0);
    cplx lap = 0.0, dtau = 0.0, pot = 0.0;

    auto pair = [&](cplx a, cplx b, int sign_pair, cplx& la, cplx& lb) {
        const Theta1Jet j = theta1_jet(a - b, dom, pol);
        // sign_pair = +1 for numerator pairs, -1 for denominator pairs
        la += g * sign_pair * j.zeta;
        lb -= g * sign_pair * j.zeta;
        return j;
    };

    // x-x and y-y pairs sit in the numerator
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k) {
            const Theta1Jet j = pair(x[i], x[k], 1, lx[i], lx[k]);
            dtau += g * j.dtau_log;
            pot += gam * j.wp;
            lap += g * j.wp;
        }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = i + 1; k < m; ++k) {
            const Theta1Jet j = pair(y[i], y[k], 1, ly[i], ly[k]);
            dtau += g * j.dtau_log;
            pot -= gam * j.wp;
            lap -= g * j.wp;
        }
    // x-y pairs in the denominator
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            const Theta1Jet j = pair(x[i], y[k], -1, lx[i], ly[k]);
            dtau -= g * j.dtau_log;
            // d^2/dx_i^2 and d^2/dy_k^2 of -g ln theta1(x_i - y_k) are both g wp;
            // -1/2 from H_N, +1/2 from -H_M cancel
        }

    // -1/2 sum (d ln K)^2 on the x side, +1/2 on the y side
    cplx sq = 0.0;
    for (const cplx& v : lx)
        sq -= 0.5 * v * v;
    for (const cplx& v : ly)
        sq += 0.5 * v * v;

    const cplx t = I * pi * spec.kappa() / (2.0 * l * l) * dtau;
    return t + lap + sq + pot;
}

SmoothField ground_state_field(double g, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    SmoothField f;
    f.value = [g, dom, pol](const Coords& x) {
        cplx v = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j)
                v *= theta1_pow(x[i] - x[j], g, dom, pol);
        return v;
    };
    auto logs = [g, dom, pol](const Coords& x, Coords& l1, Coords& l2, cplx& lt) {
        l1.assign(x.size(), 0.0);
        l2.assign(x.size(), 0.0);
        lt = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j) {
                const Theta1Jet jt = theta1_jet(x[i] - x[j], dom, pol);
                l1[i] += g * jt.zeta;
                l1[j] -= g * jt.zeta;
                l2[i] -= g * jt.wp;
                l2[j] -= g * jt.wp;
                lt += g * jt.dtau_log;
            }
    };
    f.d1 = [f0 = f.value, logs](const Coords& x) {
        Coords l1, l2;
        cplx lt;
        logs(x, l1, l2, lt);
        const cplx v = f0(x);
        for (auto& d : l1)
            d *= v;
        return l1;
    };
    f.d2 = [f0 = f.value, logs](const Coords& x) {
        Coords l1, l2;
        cplx lt;
        logs(x, l1, l2, lt);
        const cplx v = f0(x);
        Coords out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = v * (l1[i] * l1[i] + l2[i]);
        return out;
    };
    f.dtau = [f0 = f.value, logs](const Coords& x) {
        Coords l1, l2;
        cplx lt;
        logs(x, l1, l2, lt);
        return f0(x) * lt;
    };
    return f;
}

} // namespace ellipcmr
