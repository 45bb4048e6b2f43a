#include "ellipcmr/lame_bethe.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "ellipcmr/error.hpp"
#include "ellipcmr/kernels.hpp"
#include "ellipcmr/operators.hpp"

namespace ellipcmr {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

void check_roots(const std::vector<cplx>& t, const EllipticDomain& dom, double tol, ErrorCode code)
{
    const double l = dom.ell();
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (lattice_distance(t[j], dom) < tol * l)
            fail(code, "Bethe root on the period lattice");
        for (std::size_t k = j + 1; k < t.size(); ++k)
            if (lattice_distance(t[j] - t[k], dom) < tol * l) {
                std::ostringstream os;
                os << "Bethe roots " << t[j] << " and " << t[k] << " coincide modulo the lattice";
                fail(code, os.str());
            }
    }
}

cplx reduce(cplx t, const EllipticDomain& dom)
{
    const double l = dom.ell();
    double re = t.real() - 2.0 * l * std::floor(t.real() / (2.0 * l));
    double im = t.imag();
    if (!dom.trigonometric()) {
        const double d = dom.delta();
        im -= 2.0 * d * std::floor(im / (2.0 * d));
    }
    return {re, im};
}

struct NewtonResult {
    bool ok = false;
    int iterations = 0;
};

// Newton with t[0] fixed.
NewtonResult newton(std::vector<cplx>& t, const EllipticDomain& dom, const BetheOptions& opt,
                    const TruncationPolicy& pol)
{
    const int n = static_cast<int>(t.size());
    NewtonResult r;
    if (n == 1) {
        r.ok = true;
        return r;
    }
    const int m = n - 1;
    for (int it = 1; it <= opt.max_newton; ++it) {
        r.iterations = it;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (lattice_distance(t[j] - t[k], dom) < 1e-8 * dom.ell() || lattice_distance(t[j], dom) < 1e-8 * dom.ell())
                    return r;
        const auto R = bethe_residuals(t, dom, pol);
        std::vector<cplx> wp_t(n);
        for (int j = 0; j < n; ++j)
            wp_t[j] = wp1(t[j], dom, pol);
        Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(m, m);
        Eigen::VectorXcd rhs(m);
        for (int a = 0; a < m; ++a) {
            const int j = a + 1;
            rhs(a) = R[j];
            cplx diag = 0.0;
            for (int k = 0; k < n; ++k) {
                if (k == j)
                    continue;
                const cplx w = wp1(t[j] - t[k], dom, pol);
                diag += wp_t[j] - w;
                if (k >= 1)
                    J(a, k - 1) = w - wp_t[k];
            }
            J(a, a) = diag;
        }
        const Eigen::VectorXcd dx = J.fullPivLu().solve(rhs);
        if (!dx.allFinite())
            return r;
        double step = 0.0;
        for (int a = 0; a < m; ++a) {
            t[a + 1] = reduce(t[a + 1] - dx(a), dom);
            step = std::max(step, std::abs(dx(a)));
            if (!std::isfinite(t[a + 1].imag()) || std::abs(t[a + 1].imag()) > 50.0 * dom.ell())
                return r;
        }
        if (step <= opt.newton_tol * dom.ell()) {
            r.ok = true;
            return r;
        }
    }
    return r;
}

std::vector<cplx> default_seed(int n, const EllipticDomain& dom, std::mt19937_64& rng)
{
    const double l = dom.ell();
    const double span = dom.trigonometric() ? l : std::min(dom.delta(), l);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> t(n);
    for (int j = 0; j < n; ++j)
        t[j] = cplx(2.0 * l * (j + 0.2 + 0.6 * u(rng)) / (n + 1), span * (0.1 + 0.8 * u(rng)));
    return t;
}

std::vector<cplx> check_points(const BetheState& s, const EllipticDomain& dom, cplx x_ref)
{
    const double l = dom.ell();
    std::vector<cplx> pts;
    auto far = [&](cplx x) {
        if (lattice_distance(x, dom) < 0.15 * l)
            return false;
        for (const cplx& tj : s.t)
            if (lattice_distance(x - tj, dom) < 0.15 * l)
                return false;
        return true;
    };
    for (int k = 1; pts.size() < 10 && k < 200; ++k) {
        const cplx x = x_ref + l * cplx(0.173 * k, 0.031 * ((k * 7) % 11) - 0.15);
        if (far(x))
            pts.push_back(x);
    }
    return pts;
}

// psi'' by the Cauchy formula on a circle clear of the pole lattice; independent of
// the logarithmic-derivative algebra used for E
cplx contour_d2(const std::function<cplx(cplx)>& f, cplx x, double r)
{
    const int nodes = 64;
    cplx acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const cplx e = std::exp(I * (2.0 * pi * k / nodes));
        acc += f(x + r * e) / (e * e);
    }
    return 2.0 * acc / (double(nodes) * r * r);
}

cplx energy_at(cplx x, const BetheState& s, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const int n = s.n;
    const Theta1Jet j0 = theta1_jet(x, dom, pol);
    cplx L = s.xi - double(n) * j0.zeta;
    cplx wsum = 0.0;
    for (const cplx& tj : s.t) {
        const Theta1Jet j = theta1_jet(x - tj, dom, pol);
        L += j.zeta;
        wsum += j.wp;
    }
    return double(n) * n * j0.wp + wsum - L * L;
}

} // namespace

std::vector<cplx> bethe_residuals(const std::vector<cplx>& t, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    check_roots(t, dom, 1e-12, ErrorCode::coincident);
    const std::size_t n = t.size();
    std::vector<cplx> z(n);
    for (std::size_t j = 0; j < n; ++j)
        z[j] = theta1_logderiv(t[j], dom, pol);
    std::vector<cplx> r(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            const cplx zjk = theta1_logderiv(t[j] - t[k], dom, pol);
            r[j] += zjk - z[j] + z[k];
            r[k] += -zjk - z[k] + z[j];
        }
    return r;
}

cplx hermite_logderiv(cplx x, const BetheState& s, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    cplx L = s.xi - double(s.n) * theta1_logderiv(x, dom, pol);
    for (const cplx& tj : s.t)
        L += theta1_logderiv(x - tj, dom, pol);
    return L;
}

cplx hermite_psi(cplx x, const BetheState& s, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    if (lattice_distance(x, dom) < 1e-12 * dom.ell())
        fail(ErrorCode::pole, "Hermite eigenfunction has a pole on the lattice");
    const cplx th = theta1(x, dom, pol);
    cplx v = std::exp(s.xi * x);
    for (const cplx& tj : s.t)
        v *= theta1(x - tj, dom, pol) / th;
    return v;
}

std::pair<cplx, cplx> bloch_multipliers(const BetheState& s, const EllipticDomain& dom)
{
    const double l = dom.ell();
    const cplx bl = std::exp(2.0 * l * s.xi);
    if (dom.trigonometric())
        return {bl, cplx(std::nan(""), std::nan(""))};
    cplx sum = 0.0;
    for (const cplx& tj : s.t)
        sum += tj;
    const cplx bd = std::exp(2.0 * I * dom.delta() * s.xi + I * pi * sum / l);
    return {bl, bd};
}

EnergyReport energy_from_roots(const BetheState& s, const EllipticDomain& dom, cplx x_ref,
                               const TruncationPolicy& pol)
{
    const double l = dom.ell();
    if (lattice_distance(x_ref, dom) < 0.01 * l)
        fail(ErrorCode::pole, "energy reference point too close to a pole");
    for (const cplx& tj : s.t)
        if (lattice_distance(x_ref - tj, dom) < 0.01 * l)
            fail(ErrorCode::pole, "energy reference point too close to a root");
    EnergyReport rep;
    rep.E = energy_at(x_ref, s, dom, pol);
    rep.spread = 0.0;
    for (const cplx& x : check_points(s, dom, x_ref))
        rep.spread = std::max(rep.spread, std::abs(energy_at(x, s, dom, pol) - rep.E));
    cplx wsum = 0.0;
    for (const cplx& tj : s.t)
        wsum += wp1(tj, dom, pol);
    rep.constant = rep.E + double(2 * s.n - 1) * wsum;
    return rep;
}

cplx saddle_G(const std::vector<cplx>& t, cplx xi, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const double l = dom.ell();
    auto real_in = [&](cplx v) { return std::abs(v.imag()) <= 1e-14 * l && v.real() > 0.0 && v.real() < 2.0 * l; };
    const double n = static_cast<double>(t.size());
    cplx G = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (!real_in(t[j]))
            fail(ErrorCode::branch, "ln theta1 needs real arguments in (0, 2l)");
        G += xi * t[j] - n * std::log(theta1(t[j].real(), dom, pol).real());
        for (std::size_t k = j + 1; k < t.size(); ++k) {
            if (!real_in(t[j] - t[k]))
                fail(ErrorCode::branch, "ln theta1(t_j - t_k) needs t_j - t_k real in (0, 2l)");
            G += std::log(theta1((t[j] - t[k]).real(), dom, pol).real());
        }
    }
    return G;
}

std::vector<cplx> saddle_gradient(const std::vector<cplx>& t, cplx xi, const EllipticDomain& dom,
                                  const TruncationPolicy& pol)
{
    check_roots(t, dom, 1e-12, ErrorCode::coincident);
    const std::size_t n = t.size();
    std::vector<cplx> g(n);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = xi - double(n) * theta1_logderiv(t[j], dom, pol);
        for (std::size_t k = 0; k < n; ++k)
            if (k != j)
                g[j] += theta1_logderiv(t[j] - t[k], dom, pol);
    }
    return g;
}

BetheState certify_bethe(std::vector<cplx> t, const EllipticDomain& dom, const BetheOptions& opt,
                         const TruncationPolicy& pol)
{
    if (t.empty())
        fail(ErrorCode::domain, "need at least one Bethe root");
    check_roots(t, dom, 1e-12, ErrorCode::coincident);
    const double l = dom.ell();
    BetheState s;
    s.n = static_cast<int>(t.size());
    s.t = std::move(t);
    s.xi = 0.0;
    for (const cplx& tj : s.t)
        s.xi += theta1_logderiv(tj, dom, pol);

    double br = 0.0;
    for (const cplx& r : bethe_residuals(s.t, dom, pol))
        br = std::max(br, std::abs(r));
    s.bethe_residual = br;

    const cplx x_ref = opt.x_ref * l;
    const EnergyReport e = energy_from_roots(s, dom, x_ref, pol);
    s.E = e.E;
    s.constant = e.constant;
    s.energy_spread = e.spread;

    // independent check of the ODE, psi'' from contour integrals of psi
    const std::function<cplx(cplx)> psi = [&](cplx x) { return hermite_psi(x, s, dom, pol); };
    SmoothField f;
    f.value = [&](const Coords& x) { return psi(x[0]); };
    f.d2 = [&](const Coords& x) { return Coords{contour_d2(psi, x[0], 0.5 * lattice_distance(x[0], dom))}; };
    s.ode_residual = 0.0;
    for (const cplx& x : check_points(s, dom, x_ref)) {
        const cplx r = lame_residual(f, s.E, x, -double(s.n), dom, false, pol);
        s.ode_residual = std::max(s.ode_residual, std::abs(r) / std::abs(psi(x)));
    }

    // residue of L^2 at x = 0 equals -2n (xi - sum zeta1(t_j))
    double rad = 0.5 * l;
    for (const cplx& tj : s.t)
        rad = std::min(rad, 0.4 * lattice_distance(tj, dom));
    const int nodes = 256;
    cplx res = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const cplx x = rad * std::exp(I * (2.0 * pi * k / nodes));
        const cplx L = hermite_logderiv(x, s, dom, pol);
        res += L * L * x;
    }
    res /= double(nodes);
    s.xi_residual = std::abs(res) / (2.0 * s.n);

    double gmax = 0.0;
    for (const cplx& g : saddle_gradient(s.t, s.xi, dom, pol))
        gmax = std::max(gmax, std::abs(g));
    s.saddle_gradient = gmax;

    s.wronskian_ratio = std::abs(hermite_logderiv(x_ref, s, dom, pol) + hermite_logderiv(-x_ref, s, dom, pol));
    s.degenerate = s.wronskian_ratio <= 1e-8;
    return s;
}

BetheState solve_bethe(int n, const EllipticDomain& dom, const std::optional<std::vector<cplx>>& seed,
                       const BetheOptions& opt, const TruncationPolicy& pol)
{
    if (n < 1)
        fail(ErrorCode::domain, "n must be at least 1");
    if (seed && static_cast<int>(seed->size()) != n)
        fail(ErrorCode::domain, "seed has the wrong number of roots");
    const double l = dom.ell();
    const double p = dom.p();

    if (n == 1) {
        std::vector<cplx> t = seed ? *seed : std::vector<cplx>{l * cplx(0.31, 0.0) + I * (dom.trigonometric() ? 0.07 * l : 0.07 * dom.delta())};
        return certify_bethe(t, dom, opt, pol);
    }

    std::vector<cplx> t;
    int total_iters = 0, steps = 0;
    if (seed) {
        t = *seed;
        const NewtonResult r = newton(t, dom, opt, pol);
        if (!r.ok)
            fail(ErrorCode::convergence, "Newton did not converge from the supplied seed");
        total_iters = r.iterations;
    } else {
        // start near the trigonometric degeneration, then continue in p
        const double p0 = (p == 0.0) ? 0.0 : std::min(opt.p_start, p);
        const EllipticDomain start = EllipticDomain::from_nome(l, p0);
        std::mt19937_64 rng(0x5eed0000ULL + n);
        bool found = false;
        for (int attempt = 0; attempt < 64 && !found; ++attempt) {
            t = default_seed(n, start, rng);
            const NewtonResult r = newton(t, start, opt, pol);
            if (!r.ok)
                continue;
            try {
                check_roots(t, start, 1e-6, ErrorCode::collision);
            } catch (const Error&) {
                continue;
            }
            found = true;
            total_iters += r.iterations;
        }
        if (!found)
            fail(ErrorCode::convergence, "no starting configuration converged at the initial nome");
        for (auto& tj : t)
            tj = reduce(tj, start);

        double pc = p0;
        while (pc < p) {
            double next = std::min(p, pc * opt.step_factor);
            int halvings = 0;
            for (;;) {
                std::vector<cplx> trial = t;
                const EllipticDomain d = EllipticDomain::from_nome(l, next);
                const NewtonResult r = newton(trial, d, opt, pol);
                bool ok = r.ok;
                if (ok) {
                    try {
                        check_roots(trial, d, 1e-6, ErrorCode::collision);
                    } catch (const Error&) {
                        fail(ErrorCode::collision, "Bethe roots collided during continuation");
                    }
                }
                if (ok) {
                    t = trial;
                    for (auto& tj : t)
                        tj = reduce(tj, d);
                    total_iters += r.iterations;
                    pc = next;
                    ++steps;
                    break;
                }
                if (++halvings > 8) {
                    std::ostringstream os;
                    os << "continuation stalled at p = " << pc;
                    fail(ErrorCode::convergence, os.str());
                }
                next = std::sqrt(pc * next);
            }
        }
    }

    for (auto& tj : t)
        tj = reduce(tj, dom);
    check_roots(t, dom, 1e-6, ErrorCode::collision);
    BetheState s = certify_bethe(t, dom, opt, pol);
    s.newton_iterations = total_iters;
    s.homotopy_steps = steps;
    return s;
}

} // namespace ellipcmr
