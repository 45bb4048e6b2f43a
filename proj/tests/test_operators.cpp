#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ellipcmr/error.hpp"
#include "ellipcmr/kernels.hpp"
#include "ellipcmr/operators.hpp"

using namespace ellipcmr;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

SmoothField plane_wave(Coords k)
{
    SmoothField f;
    f.value = [k](const Coords& x) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += k[i] * x[i];
        return std::exp(I * s);
    };
    return f;
}

// prod exp(c_i z_i), z = exp(i pi x / l): smooth, not symmetric, analytic partials
SmoothField exp_field(Coords c, double l)
{
    SmoothField f;
    const cplx w = I * pi / l;
    f.value = [c, w](const Coords& x) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += c[i] * std::exp(w * x[i]);
        return std::exp(s);
    };
    f.d2 = [c, w, v = f.value](const Coords& x) {
        const cplx psi = v(x);
        Coords d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const cplx a = c[i] * w * std::exp(w * x[i]);
            d[i] = psi * (a * a + a * w);
        }
        return d;
    };
    return f;
}

} // namespace

TEST_CASE("free plane wave")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const Coords k{1.3, -0.4, 2.1};
    const Coords x{0.1, 0.5, -0.7};
    for (double g : {0.0, 1.0}) {
        const cplx h = apply_ecs(plane_wave(k), x, CouplingSet{g}, dom);
        const double k2 = 0.5 * (1.3 * 1.3 + 0.4 * 0.4 + 2.1 * 2.1);
        CHECK(std::abs(h - k2 * plane_wave(k).value(x)) < 1e-8);
    }
}

TEST_CASE("trigonometric ground state")
{
    const double l = 1.0, g = 2.0;
    const auto dom = EllipticDomain::from_nome(l, 0.0);
    const auto psi = ground_state_field(g, dom);
    // E = (pi/l)^2 * (s1^2 + s2^2)/2 with s = (g/2, -g/2)
    const double E = std::pow(pi / l, 2) * g * g / 4.0;
    for (const Coords& x : {Coords{0.7, 0.1}, Coords{1.4, -0.3}, Coords{cplx(0.2, 0.3), -0.5}}) {
        const cplx r = apply_ecs(psi, x, CouplingSet{g}, dom) - E * psi.value(x);
        CHECK(std::abs(r) / std::abs(psi.value(x)) < 1e-10);
    }
}

TEST_CASE("FD fallback agrees with analytic partials and reports inconsistency")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const auto exact = ground_state_field(1.5, dom);
    SmoothField fd;
    fd.value = exact.value;
    const Coords x{0.9, 0.2, -0.6};
    const auto a = second_partials(exact, x);
    const auto b = second_partials(fd, x);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(a[i] - b[i]) / std::abs(exact.value(x)) < 1e-7);

    SmoothField rough;
    rough.value = [](const Coords& y) { return std::sin(400.0 * y[0]); };
    CHECK_THROWS_AS(second_partial(rough, Coords{0.3}, 0), Error);
    try {
        second_partial(rough, Coords{0.3}, 0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::fd_inconsistent);
    }
}

TEST_CASE("non-stationary Lame solution theta1^g")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    for (double g : {1.5, 2.0, 3.0}) {
        const auto psi = ground_state_field(g, dom);
        const CouplingSet c{g};
        const cplx kappa = 2.0 * g;
        const cplx E = fit_generalized_eigenvalue(psi, kappa, Coords{0.8, 0.1}, c, dom);
        CHECK(std::abs(E - g * g * heat_constant_c0(dom)) < 1e-10);
        for (int i = 0; i < 10; ++i) {
            const Coords x{0.9 + 0.07 * i, -0.3 + 0.02 * i};
            CHECK(std::abs(nonstationary_residual(psi, kappa, E, x, c, dom)) / std::abs(psi.value(x)) < 1e-8);
        }
    }
}

TEST_CASE("psi0 solves the non-stationary equation with kappa = N g")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.1);
    for (int n : {2, 3, 4}) {
        const double g = 1.7;
        const auto psi = ground_state_field(g, dom);
        Coords ref(n);
        for (int i = 0; i < n; ++i)
            ref[i] = 0.9 - 0.4 * i;
        const cplx E = fit_generalized_eigenvalue(psi, n * g, ref, CouplingSet{g}, dom);
        CHECK(std::abs(E.imag()) < 1e-10);
        for (int t = 0; t < 10; ++t) {
            Coords x(n);
            for (int i = 0; i < n; ++i)
                x[i] = 0.95 - (0.35 + 0.02 * t) * i + 0.01 * t;
            CHECK(std::abs(nonstationary_residual(psi, n * g, E, x, CouplingSet{g}, dom)) / std::abs(psi.value(x)) <
                  1e-8);
        }
    }
}

TEST_CASE("gauge shift of the generalized eigenvalue")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const double g = 2.0, l = dom.ell();
    const cplx kappa = 2.0 * g;
    const auto base = ground_state_field(g, dom);
    const cplx tau = dom.tau();
    const cplx C = 1.0 + tau * tau, dC = 2.0 * tau;

    SmoothField psi;
    psi.value = [base, C](const Coords& x) { return C * base.value(x); };
    psi.d2 = [base, C](const Coords& x) {
        auto d = base.d2(x);
        for (auto& v : d)
            v *= C;
        return d;
    };
    psi.dtau = [base, C, dC](const Coords& x) { return dC * base.value(x) + C * base.dtau(x); };

    const CouplingSet c{g};
    const cplx E = fit_generalized_eigenvalue(base, kappa, Coords{0.7, 0.0}, c, dom);
    const cplx shift = I * pi * kappa / (2.0 * l * l) * dC / C;
    const Coords x{1.1, 0.25};
    CHECK(std::abs(nonstationary_residual(psi, kappa, E + shift, x, c, dom)) / std::abs(psi.value(x)) < 1e-8);
    // without the factor 1/2 the residual does not vanish
    CHECK(std::abs(nonstationary_residual(psi, kappa, E + 2.0 * shift, x, c, dom)) / std::abs(psi.value(x)) > 1e-3);
}

TEST_CASE("translation covariance")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const double g = 2.0, k = 1.7;
    const int n = 3;
    const auto base = ground_state_field(g, dom);
    SmoothField psi;
    psi.value = [base, k](const Coords& x) {
        cplx s = 0.0;
        for (auto v : x)
            s += v;
        return std::exp(I * k * s) * base.value(x);
    };
    psi.dtau = [base, k](const Coords& x) {
        cplx s = 0.0;
        for (auto v : x)
            s += v;
        return std::exp(I * k * s) * base.dtau(x);
    };
    const Coords ref{0.8, 0.1, -0.6};
    const cplx E = fit_generalized_eigenvalue(base, n * g, ref, CouplingSet{g}, dom);
    const Coords x{0.9, 0.3, -0.45};
    const cplx r = nonstationary_residual(psi, n * g, E + 0.5 * n * k * k, x, CouplingSet{g}, dom);
    CHECK(std::abs(r) / std::abs(psi.value(x)) < 1e-8);
}

TEST_CASE("permutation symmetry of H")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const Coords c{0.3, cplx(-0.2, 0.1), 0.5};
    const auto psi = exp_field(c, 1.0);
    const Coords x{0.6, -0.1, 0.25};
    // sigma: swap the first two coordinates in both the function and the point
    const auto perm = exp_field(Coords{c[1], c[0], c[2]}, 1.0);
    const Coords xs{x[1], x[0], x[2]};
    const CouplingSet cs{2.5};
    CHECK(std::abs(apply_ecs(psi, x, cs, dom) - apply_ecs(perm, xs, cs, dom)) < 1e-12);
    CHECK_THROWS_AS(apply_ecs(psi, Coords{0.3, 0.3, 0.1}, cs, dom), Error);
}

TEST_CASE("Lame residual")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const double k = 1.3;
    CHECK(std::abs(lame_residual(plane_wave({k}), k * k, 0.4, 0.0, dom, false)) < 1e-8);
    for (double x : {-0.9, -0.2, 0.3, 0.77, 1.5})
        CHECK(std::abs(wp1_shifted(x, 2, dom).imag()) < 1e-12);
}

TEST_CASE("Heun residual special cases")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const auto f = exp_field({cplx(0.4, 0.1)}, 1.0);
    const double g = 2.5;
    const cplx E{1.7, 0.2};
    const cplx x{0.31, 0.04};

    CouplingSet only0;
    only0.g_nu = {g, 0.0, 0.0, 0.0};
    CHECK(std::abs(heun_residual(f, E, x, only0, dom) - lame_residual(f, E, x, g, dom, false)) < 1e-13);

    // phi(X) Lame at X = 2x; psi(x) = phi(2x) solves Heun with all g_nu = g and energy 4E
    SmoothField h;
    h.value = [f](const Coords& y) { return f.value(Coords{2.0 * y[0]}); };
    h.d2 = [f](const Coords& y) { return Coords{4.0 * f.d2(Coords{2.0 * y[0]})[0]}; };
    CouplingSet all;
    all.g_nu = {g, g, g, g};
    CHECK(std::abs(heun_residual(h, 4.0 * E, x, all, dom) - 4.0 * lame_residual(f, E, 2.0 * x, g, dom, false)) <
          1e-9);

    // trigonometric limit: Poschl-Teller with ground state sin^a cos^b
    const double l = 1.2, g0 = 2.5, g1 = 1.5;
    const auto trig = EllipticDomain::from_nome(l, 0.0);
    const double kk = pi / (2.0 * l);
    SmoothField pt;
    pt.value = [=](const Coords& y) { return std::pow(std::sin(kk * y[0]), g0) * std::pow(std::cos(kk * y[0]), g1); };
    CouplingSet c;
    c.g_nu = {g0, g1, 3.0, 0.7};
    const double Ept = kk * kk * (g0 + g1) * (g0 + g1);
    for (double y : {0.2, 0.5, 0.9})
        CHECK(std::abs(heun_residual(pt, Ept, y, c, trig)) < 1e-7);
}

TEST_CASE("deformed operator reductions and duality")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const double g = 1.8;
    const Coords cx{0.3, cplx(-0.2, 0.1)}, ct{cplx(0.1, -0.3), 0.25};

    const Coords x{0.6, -0.1}, xt{0.35, -0.7};
    const auto fx = exp_field(cx, 1.0);
    CHECK(std::abs(apply_deformed_ecs(fx, x, {}, g, dom) - apply_ecs(fx, x, CouplingSet{g}, dom)) < 1e-12);

    const auto ft = exp_field(ct, 1.0);
    CHECK(std::abs(apply_deformed_ecs(ft, {}, xt, g, dom) + g * apply_ecs(ft, xt, CouplingSet{1.0 / g}, dom)) <
          1e-10);

    // (N, M) = (1, 1): swap roles of the two families
    const auto f11 = exp_field({cx[0], ct[0]}, 1.0);
    const auto f11s = exp_field({ct[0], cx[0]}, 1.0);
    const cplx a = apply_deformed_ecs(f11, {x[0]}, {xt[0]}, g, dom);
    const cplx b = apply_deformed_ecs(f11s, {xt[0]}, {x[0]}, 1.0 / g, dom);
    CHECK(std::abs(a + g * b) < 1e-10);

    // (2, 2)
    const auto f22 = exp_field({cx[0], cx[1], ct[0], ct[1]}, 1.0);
    const auto f22s = exp_field({ct[0], ct[1], cx[0], cx[1]}, 1.0);
    CHECK(std::abs(apply_deformed_ecs(f22, x, xt, g, dom) + g * apply_deformed_ecs(f22s, xt, x, 1.0 / g, dom)) <
          1e-10);
}

TEST_CASE("generalized operator and Calogero trick")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const double g = 2.2, d = dom.delta();
    const Coords c{0.3, cplx(-0.2, 0.1), 0.15, cplx(0.05, 0.2)};
    const auto f = exp_field(c, 1.0);
    const Coords pts{0.6, -0.1, 0.35, -0.7};

    CHECK(std::abs(apply_generalized_ecs({4, 0, 0, 0}, f, pts, g, dom) - apply_ecs(f, pts, CouplingSet{g}, dom)) <
          1e-12);

    // (2,0,2,0) on (x, y) equals H_4 on (x, y - i delta) for psi(u) = f(u_x, u_y + i delta)
    SmoothField shifted;
    shifted.value = [f, d](const Coords& u) { return f.value({u[0], u[1], u[2] + I * d, u[3] + I * d}); };
    shifted.d2 = [f, d](const Coords& u) { return f.d2({u[0], u[1], u[2] + I * d, u[3] + I * d}); };
    const Coords moved{pts[0], pts[1], pts[2] - I * d, pts[3] - I * d};
    const cplx a = apply_generalized_ecs({2, 0, 2, 0}, f, pts, g, dom);
    const cplx b = apply_ecs(shifted, moved, CouplingSet{g}, dom);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));

    // empty cross family contributes nothing
    CHECK(std::abs(apply_generalized_ecs({2, 0, 0, 0}, exp_field({c[0], c[1]}, 1.0), {pts[0], pts[1]}, g, dom) -
                   apply_ecs(exp_field({c[0], c[1]}, 1.0), {pts[0], pts[1]}, CouplingSet{g}, dom)) < 1e-13);

    CHECK_THROWS_AS(apply_generalized_ecs({2, 0, 1, 0}, f, pts, g, dom), Error);
}

TEST_CASE("Ruijsenaars difference operator at p = 0")
{
    const RuijsenaarsParams par{0.0, 0.5, 0.3};
    const LaurentFn one = [](const Coords&) { return cplx(1.0); };
    const LaurentFn e1 = [](const Coords& z) { return z[0] + z[1]; };
    for (const Coords& z : {Coords{std::exp(I * 0.3), std::exp(I * 1.9)}, Coords{cplx(0.4, 1.2), cplx(-0.8, 0.1)}}) {
        CHECK(std::abs(apply_ruijsenaars_D(one, z, par, 1) - (1.0 + par.t)) < 1e-12);
        // brute-force symbolic diagonalization gives 1 + q t on z1 + z2
        CHECK(std::abs(apply_ruijsenaars_D(e1, z, par, 1) - (1.0 + par.q * par.t) * e1(z)) < 1e-12);
    }

    // shifting by q then by 1/q lands on the original point
    const Coords z{std::exp(I * 0.7), std::exp(I * 2.2)};
    const LaurentFn probe = [&](const Coords& w) {
        Coords back = w;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] != z[i])
                back[i] = w[i] / par.q;
        return cplx(back == z ? 1.0 : 0.0);
    };
    CHECK(apply_ruijsenaars_D(probe, z, par, 1) == apply_ruijsenaars_D(one, z, par, 1));

    // D(q,t) and D(1/q,1/t) commute on symmetric Laurent polynomials of degree <= 2
    const std::vector<LaurentFn> basis{
        one,
        e1,
        [](const Coords& w) { return w[0] * w[1]; },
        [](const Coords& w) { return w[0] * w[0] + w[1] * w[1]; },
        [](const Coords& w) { return w[0] / w[1] + w[1] / w[0]; },
        [](const Coords& w) { return 1.0 / w[0] + 1.0 / w[1]; },
    };
    for (const auto& f : basis) {
        const LaurentFn dp = [&](const Coords& w) { return apply_ruijsenaars_D(f, w, par, 1); };
        const LaurentFn dm = [&](const Coords& w) { return apply_ruijsenaars_D(f, w, par, -1); };
        const cplx a = apply_ruijsenaars_D(dm, z, par, 1);
        const cplx b = apply_ruijsenaars_D(dp, z, par, -1);
        CHECK(std::abs(a - b) < 1e-10);
    }

    CHECK_THROWS_AS(apply_ruijsenaars_D(one, Coords{z[0], z[0]}, par, 1), Error);
}

TEST_CASE("kernel identity residuals")
{
    const auto dom = EllipticDomain::from_nome(1.0, 0.05);
    const double g = 1.6;

    const cplx r22 = kernel_identity_residual({2, 2, g}, {0.7, -0.2}, {0.3, cplx(-0.6, 0.1)}, dom);
    CHECK(std::abs(r22) < 1e-8);

    const std::vector<std::pair<Coords, Coords>> cfg{
        {{0.7, -0.2}, {0.3}},
        {{1.1, 0.4}, {cplx(-0.5, 0.2)}},
        {{cplx(0.2, 0.1), -0.9}, {0.55}},
        {{0.05, 0.6}, {cplx(1.3, -0.15)}},
        {{-0.4, 0.9}, {cplx(0.1, 0.3)}},
    };
    std::vector<cplx> vals;
    for (const auto& [x, y] : cfg)
        vals.push_back(kernel_identity_residual({2, 1, g}, x, y, dom));
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            CHECK(std::abs(vals[i] - vals[j]) < 1e-8);

    // (N, 0) reproduces the generalized eigenvalue of psi0 at kappa = N g
    for (int n : {2, 3}) {
        Coords x(n);
        for (int i = 0; i < n; ++i)
            x[i] = 0.8 - 0.5 * i;
        const cplx r = kernel_identity_residual({n, 0, g}, x, {}, dom);
        const cplx E = fit_generalized_eigenvalue(ground_state_field(g, dom), n * g, x, CouplingSet{g}, dom);
        CHECK(std::abs(r - E) < 1e-8);
    }
    CHECK(std::abs(kernel_identity_residual({2, 0, g}, {0.8, 0.3}, {}, dom) - g * g * heat_constant_c0(dom)) <
          1e-10);

    CHECK_THROWS_AS(kernel_identity_residual({2, 1, g}, {0.3, -0.2}, {0.3}, dom), Error);
}
