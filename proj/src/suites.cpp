#include "ellipcmr/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ellipcmr/error.hpp"
#include "ellipcmr/kernels.hpp"
#include "ellipcmr/operators.hpp"

namespace ellipcmr {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

// prod exp(c_i z_i) with z = exp(i pi x/l); analytic second partials
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

cplx grid_point(int i, double l, double im_step, int im_mod)
{
    return l * (0.08 + 0.09 * i) + I * (im_step * l * (i % im_mod));
}

SuiteReport heat(const SuiteConfig& cfg)
{
    const auto dom = EllipticDomain::from_nome(cfg.ell, cfg.p);
    const double l = dom.ell();
    const double c0 = heat_constant_c0(dom);
    double res = 0.0;
    for (int i = 0; i < 20; ++i) {
        const cplx x = grid_point(i, l, 0.05, 4);
        const auto j = theta1_jet(x, dom);
        const cplx r = I * pi * theta1_dtau(x, dom) - (j.zeta * j.zeta - j.wp) * j.value - c0 * j.value;
        res = std::max(res, std::abs(r) / std::abs(j.value));
    }
    SuiteReport rep{"heat", {}};
    rep.lines.push_back({"heat equation, max relative residual", res, cfg.tol});
    const double cross = std::abs(c0 - (2.0 * eta1_over_omega1(dom) + pi * pi / (12.0 * l * l)));
    rep.lines.push_back({"c0 = 2 eta1/omega1 + pi^2/12l^2", cross / std::max(1.0, std::abs(c0)), cfg.tol});
    return rep;
}

SuiteReport quasi_periodicity(const SuiteConfig& cfg)
{
    const auto dom = EllipticDomain::from_nome(cfg.ell, cfg.p);
    const double l = dom.ell();
    double real_shift = 0.0, imag_shift = 0.0, wp = 0.0;
    for (int i = 0; i < 20; ++i) {
        const cplx x = grid_point(i, l, 0.03, 7);
        const cplx t = theta1(x, dom);
        real_shift = std::max(real_shift, std::abs(theta1(x + 2.0 * l, dom) + t) / std::abs(t));
        if (!dom.trigonometric()) {
            const double d = dom.delta();
            const cplx r = -std::exp(pi * d / l) * std::exp(-I * pi * x / l) * t;
            imag_shift = std::max(imag_shift, std::abs(theta1(x + 2.0 * I * d, dom) - r) / std::abs(r));
        }
        // Richardson on the 5-point second difference of ln theta1
        auto lt = [&](cplx y) { return std::log(theta1(y, dom)); };
        auto fd2 = [&](double h) {
            return (-lt(x + 2.0 * h) + 16.0 * lt(x + h) - 30.0 * lt(x) + 16.0 * lt(x - h) - lt(x - 2.0 * h)) /
                   (12.0 * h * h);
        };
        const double h = 2e-3 * l;
        const cplx ref = -(16.0 * fd2(h / 2) - fd2(h)) / 15.0;
        const cplx w = wp1(x, dom);
        wp = std::max(wp, std::abs(w - ref) / std::max(1.0, std::abs(ref)));
    }
    SuiteReport rep{"quasi-periodicity", {}};
    rep.lines.push_back({"theta1(x + 2l) = -theta1(x)", real_shift, cfg.tol});
    if (!dom.trigonometric())
        rep.lines.push_back({"theta1(x + 2i delta) = -e^{pi delta/l} e^{-i pi x/l} theta1(x)", imag_shift, cfg.tol});
    rep.lines.push_back({"wp1 = -(ln theta1)''", wp, cfg.tol});
    return rep;
}

SuiteReport limits(const SuiteConfig& cfg)
{
    const double l = cfg.ell;
    SuiteReport rep{"limits", {}};
    for (double p : {1e-2, 1e-3, 1e-4}) {
        const auto dom = EllipticDomain::from_nome(l, p);
        double wp = 0.0, ratio = 0.0;
        const cplx y = 0.5 * l;
        for (int i = 0; i < 20; ++i) {
            const double x = l * (0.08 + 0.09 * i);
            const double s = std::sin(pi * x / (2.0 * l));
            const double trig = std::pow(pi / (2.0 * l), 2) / (s * s);
            wp = std::max(wp, std::pow(l / pi, 2) * std::abs(wp1(x, dom) - trig));
            const double tr = s / std::sin(pi * y.real() / (2.0 * l));
            ratio = std::max(ratio, std::abs(theta1(x, dom) / theta1(y, dom) - tr) / std::abs(tr));
        }
        const std::string tag = " at p = " + std::to_string(p).substr(0, 6);
        rep.lines.push_back({"wp1 vs (pi/2l)^2/sin^2 in units of (pi/l)^2" + tag, wp, 5.0 * p});
        rep.lines.push_back({"theta1 ratio vs sine ratio, relative" + tag, ratio, 5.0 * p});
    }

    // periodized (k/sinh)^2 sum minus wp1 is independent of x
    const double p = cfg.p > 0.0 ? cfg.p : 0.05;
    const auto dom = EllipticDomain::from_nome(l, p);
    const double d = dom.delta(), k = pi / (2.0 * d);
    auto sum = [&](cplx x) {
        cplx s = 0.0;
        for (int n = -60; n <= 60; ++n)
            s += k * k / std::pow(std::sinh(k * (x - 2.0 * l * double(n))), 2);
        return s;
    };
    const cplx a = l * cplx(0.31, 0.05), b = l * cplx(0.77, -0.12), c = l * cplx(1.4, 0.2);
    const cplx ca = sum(a) - wp1(a, dom), cb = sum(b) - wp1(b, dom), cc = sum(c) - wp1(c, dom);
    rep.lines.push_back(
        {"sinh^-2 lattice sum - wp1 is constant", std::max(std::abs(ca - cb), std::abs(ca - cc)), cfg.tol});
    return rep;
}

double spread(const std::vector<cplx>& v)
{
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            s = std::max(s, std::abs(v[i] - v[j]));
    return s;
}

void kernel_case(int n, int m, const SuiteConfig& cfg, const EllipticDomain& dom, SuiteReport& rep)
{
    const double l = dom.ell(), g = cfg.g;
    const std::string tag = " (N,M) = (" + std::to_string(n) + "," + std::to_string(m) + ")";
    if (m == 0) {
        Coords x(n);
        for (int i = 0; i < n; ++i)
            x[i] = l * (0.8 - 0.5 * i);
        const cplx r = kernel_identity_residual({n, 0, g}, x, {}, dom);
        const cplx E = fit_generalized_eigenvalue(ground_state_field(g, dom), n * g, x, CouplingSet{g}, dom);
        rep.lines.push_back({"psi0 generalized eigenvalue" + tag, std::abs(r - E), cfg.tol});
        return;
    }
    // five configurations, N and M coordinates each
    std::vector<cplx> vals;
    for (int c = 0; c < 5; ++c) {
        Coords x(n), y(m);
        for (int i = 0; i < n; ++i)
            x[i] = l * cplx(0.7 - 0.45 * i + 0.11 * c, 0.02 * ((i + c) % 3));
        for (int j = 0; j < m; ++j)
            y[j] = l * cplx(0.3 - 0.6 * j - 0.13 * c, 0.05 * ((j + 2 * c) % 3) - 0.04);
        vals.push_back(kernel_identity_residual({n, m, g}, x, y, dom));
    }
    if (n == m) {
        double r = 0.0;
        for (auto v : vals)
            r = std::max(r, std::abs(v));
        rep.lines.push_back({"kernel identity residual" + tag, r, cfg.tol});
    } else {
        rep.lines.push_back({"kernel identity constancy spread" + tag, spread(vals), cfg.tol});
    }
}

SuiteReport kernel_identity(const SuiteConfig& cfg)
{
    const auto dom = EllipticDomain::from_nome(cfg.ell, cfg.p);
    SuiteReport rep{"kernel-identity", {}};
    if (cfg.n >= 1 && cfg.m >= 0) {
        kernel_case(cfg.n, cfg.m, cfg, dom, rep);
        return rep;
    }
    kernel_case(2, 2, cfg, dom, rep);
    kernel_case(2, 1, cfg, dom, rep);
    kernel_case(2, 0, cfg, dom, rep);
    kernel_case(3, 0, cfg, dom, rep);
    return rep;
}

SuiteReport duality(const SuiteConfig& cfg)
{
    const auto dom = EllipticDomain::from_nome(cfg.ell, cfg.p);
    const double g = cfg.g, l = dom.ell(), tol = std::min(cfg.tol, 1e-10);
    const Coords cx{0.3, cplx(-0.2, 0.1)}, ct{cplx(0.1, -0.3), 0.25};
    const Coords x{0.6 * l, -0.1 * l}, xt{0.35 * l, -0.7 * l};

    auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
    SuiteReport rep{"duality", {}};
    const auto fx = exp_field(cx, l);
    rep.lines.push_back(
        {"M = 0 reduces to H_N(g)", rel(apply_deformed_ecs(fx, x, {}, g, dom), apply_ecs(fx, x, CouplingSet{g}, dom)),
         tol});
    const auto ft = exp_field(ct, l);
    rep.lines.push_back({"N = 0 reduces to -g H_M(1/g)",
                         rel(apply_deformed_ecs(ft, {}, xt, g, dom), -g * apply_ecs(ft, xt, CouplingSet{1.0 / g}, dom)),
                         tol});
    const auto f11 = exp_field({cx[0], ct[0]}, l), f11s = exp_field({ct[0], cx[0]}, l);
    rep.lines.push_back({"H(g) = -g H(1/g) with families swapped, (1,1)",
                         rel(apply_deformed_ecs(f11, {x[0]}, {xt[0]}, g, dom),
                             -g * apply_deformed_ecs(f11s, {xt[0]}, {x[0]}, 1.0 / g, dom)),
                         tol});
    const auto f22 = exp_field({cx[0], cx[1], ct[0], ct[1]}, l), f22s = exp_field({ct[0], ct[1], cx[0], cx[1]}, l);
    rep.lines.push_back(
        {"H(g) = -g H(1/g) with families swapped, (2,2)",
         rel(apply_deformed_ecs(f22, x, xt, g, dom), -g * apply_deformed_ecs(f22s, xt, x, 1.0 / g, dom)), tol});
    return rep;
}

SuiteReport calogero_trick(const SuiteConfig& cfg)
{
    const double p = cfg.p > 0.0 ? cfg.p : 0.05;
    const auto dom = EllipticDomain::from_nome(cfg.ell, p);
    const double g = cfg.g, l = dom.ell(), d = dom.delta(), tol = std::min(cfg.tol, 1e-10);
    const Coords c{0.3, cplx(-0.2, 0.1), 0.15, cplx(0.05, 0.2)};
    const auto f = exp_field(c, l);
    const Coords pts{0.6 * l, -0.1 * l, 0.35 * l, -0.7 * l};

    SuiteReport rep{"calogero-trick", {}};
    const cplx h4 = apply_ecs(f, pts, CouplingSet{g}, dom);
    rep.lines.push_back({"(4,0,0,0) equals H_4",
                         std::abs(apply_generalized_ecs({4, 0, 0, 0}, f, pts, g, dom) - h4) / std::max(1.0, std::abs(h4)),
                         tol});

    // (2,0,2,0) on (x, y) equals H_4 on (x, y - i delta) for the shifted field
    SmoothField shifted;
    shifted.value = [f, d](const Coords& u) { return f.value({u[0], u[1], u[2] + I * d, u[3] + I * d}); };
    shifted.d2 = [f, d](const Coords& u) { return f.d2({u[0], u[1], u[2] + I * d, u[3] + I * d}); };
    const Coords moved{pts[0], pts[1], pts[2] - I * d, pts[3] - I * d};
    const cplx a = apply_generalized_ecs({2, 0, 2, 0}, f, pts, g, dom);
    const cplx b = apply_ecs(shifted, moved, CouplingSet{g}, dom);
    rep.lines.push_back({"(2,0,2,0) equals H_4 after y -> y - i delta", std::abs(a - b) / std::max(1.0, std::abs(a)), tol});
    return rep;
}

SuiteReport theta_power(const SuiteConfig& cfg)
{
    const auto dom = EllipticDomain::from_nome(cfg.ell, cfg.p);
    const double g = cfg.g, l = dom.ell();
    SuiteReport rep{"nonstationary-theta-power", {}};
    for (int n : {2, 3}) {
        const auto psi = ground_state_field(g, dom);
        Coords ref(n);
        for (int i = 0; i < n; ++i)
            ref[i] = l * (0.9 - 0.4 * i);
        const cplx E = fit_generalized_eigenvalue(psi, n * g, ref, CouplingSet{g}, dom);
        double res = 0.0;
        for (int t = 0; t < 10; ++t) {
            Coords x(n);
            for (int i = 0; i < n; ++i)
                x[i] = l * (0.95 - (0.35 + 0.02 * t) * i + 0.01 * t);
            res = std::max(res, std::abs(nonstationary_residual(psi, n * g, E, x, CouplingSet{g}, dom)) /
                                    std::abs(psi.value(x)));
        }
        rep.lines.push_back({"prod theta1^g at kappa = N g, N = " + std::to_string(n), res, cfg.tol});
        if (n == 2)
            rep.lines.push_back({"N = 2 eigenvalue equals g^2 c0",
                                 std::abs(E - g * g * heat_constant_c0(dom)) / std::max(1.0, std::abs(E)), cfg.tol});
    }
    return rep;
}

} // namespace

bool SuiteReport::pass() const
{
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& c) { return c.pass(); });
}

double SuiteReport::max_residual() const
{
    double r = 0.0;
    for (const auto& c : lines)
        r = std::max(r, c.value);
    return r;
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"heat",     "quasi-periodicity", "limits", "kernel-identity",
                                                "duality",  "calogero-trick",    "nonstationary-theta-power"};
    return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg)
{
    if (name == "heat")
        return heat(cfg);
    if (name == "quasi-periodicity")
        return quasi_periodicity(cfg);
    if (name == "limits")
        return limits(cfg);
    if (name == "kernel-identity")
        return kernel_identity(cfg);
    if (name == "duality")
        return duality(cfg);
    if (name == "calogero-trick")
        return calogero_trick(cfg);
    if (name == "nonstationary-theta-power")
        return theta_power(cfg);
    fail(ErrorCode::domain, "unknown suite: " + name);
}

} // namespace ellipcmr
