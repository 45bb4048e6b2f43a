#include "ellipcmr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ellipcmr/error.hpp"

namespace ellipcmr {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

double sup_arg(cplx z)
{
    const double a = std::abs(z);
    return std::max(a, 1.0 / a);
}

void check_factor(cplx f, const char* what)
{
    if (std::abs(f) < 1e-300)
        fail(ErrorCode::pole, std::string("vanishing factor in ") + what);
}

} // namespace

cplx theta_q(cplx z, double p, const TruncationPolicy& pol)
{
    if (z == cplx(0.0))
        fail(ErrorCode::zero_argument, "theta(z;p) needs z != 0");
    const int nt = pol.terms(p, sup_arg(z));
    cplx prod = 1.0 - z;
    double pn = 1.0;
    for (int n = 1; n <= nt; ++n) {
        pn *= p;
        prod *= (1.0 - pn * z) * (1.0 - pn / z);
    }
    return prod;
}

ThetaQLogJet theta_q_log_jet(cplx w, double p, const TruncationPolicy& pol)
{
    if (w == cplx(0.0))
        fail(ErrorCode::zero_argument, "theta(w;p) needs w != 0");
    const int nt = pol.terms(p, sup_arg(w));
    const cplx d0 = 1.0 - w;
    check_factor(d0, "theta(w;p) log-derivative");
    ThetaQLogJet j{-w / d0, -w / (d0 * d0), 0.0};
    double pn = 1.0;
    for (int n = 1; n <= nt; ++n) {
        pn *= p;
        const cplx u = pn * w, v = pn / w;
        const cplx du = 1.0 - u, dv = 1.0 - v;
        check_factor(du, "theta(w;p) log-derivative");
        check_factor(dv, "theta(w;p) log-derivative");
        j.first += -u / du + v / dv;
        j.second -= u / (du * du) + v / (dv * dv);
        j.nome -= double(n) * (u / du + v / dv);
    }
    return j;
}

cplx log_theta_q(cplx w, double p, const TruncationPolicy& pol)
{
    const double a = std::abs(w);
    if (!(a > p && a < 1.0)) {
        std::ostringstream os;
        os << "|w| = " << a << " outside the annulus (" << p << ", 1)";
        fail(ErrorCode::window, os.str());
    }
    const int nt = pol.terms(p, sup_arg(w));
    cplx s = std::log(1.0 - w);
    double pn = 1.0;
    for (int n = 1; n <= nt; ++n) {
        pn *= p;
        s += std::log(1.0 - pn * w) + std::log(1.0 - pn / w);
    }
    return s;
}

double lattice_distance(cplx x, const EllipticDomain& dom)
{
    const double l2 = 2.0 * dom.ell();
    double a = std::remainder(x.real(), l2);
    double b = x.imag();
    if (!dom.trigonometric())
        b = std::remainder(b, 2.0 * dom.delta());
    return std::hypot(a, b);
}

cplx theta1(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const double l = dom.ell(), p = dom.p();
    const cplx z = std::exp(I * pi * x / l);
    const int nt = pol.terms(p, sup_arg(z));
    cplx prod = 2.0 * std::sin(pi * x / (2.0 * l));
    double pn = 1.0;
    for (int n = 1; n <= nt; ++n) {
        pn *= p;
        prod *= (1.0 - pn * z) * (1.0 - pn / z);
    }
    return prod;
}

Theta1Jet theta1_jet(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const double l = dom.ell(), p = dom.p();
    if (lattice_distance(x, dom) < 1e-12 * l)
        fail(ErrorCode::pole, "argument on the period lattice");
    const cplx w = pi * x / (2.0 * l);
    const cplx s = std::sin(w), c = std::cos(w);
    const cplx z = std::exp(I * pi * x / l);
    const int nt = pol.terms(p, sup_arg(z));
    const double k = pi / (2.0 * l);

    Theta1Jet j;
    cplx prod = 2.0 * s;
    cplx zs = 0.0, ws = 0.0, ts = 0.0;
    double pn = 1.0;
    for (int n = 1; n <= nt; ++n) {
        pn *= p;
        const cplx u = pn * z, v = pn / z;
        const cplx du = 1.0 - u, dv = 1.0 - v;
        prod *= du * dv;
        zs += -u / du + v / dv;
        ws += u / (du * du) + v / (dv * dv);
        ts += double(n) * (u / du + v / dv);
    }
    j.value = prod;
    j.zeta = k * c / s + (I * pi / l) * zs;
    j.wp = k * k / (s * s) - (pi / l) * (pi / l) * ws;
    j.dtau_log = -2.0 * pi * I * ts;
    return j;
}

cplx theta1_logderiv(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    return theta1_jet(x, dom, pol).zeta;
}

cplx theta1_dtau(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const double l = dom.ell(), p = dom.p();
    const cplx z = std::exp(I * pi * x / l);
    const int nt = pol.terms(p, sup_arg(z));
    cplx prod = 2.0 * std::sin(pi * x / (2.0 * l));
    cplx dprod = 0.0;
    double pn = 1.0;
    // d/dtau = 2 pi i p d/dp, applied factor by factor (product rule)
    for (int n = 1; n <= nt; ++n) {
        pn *= p;
        const cplx u = pn * z, v = pn / z;
        const cplx f = (1.0 - u) * (1.0 - v);
        const cplx df = double(n) * (-u * (1.0 - v) - v * (1.0 - u));
        dprod = dprod * f + prod * df;
        prod *= f;
    }
    return 2.0 * pi * I * dprod;
}

cplx theta1_pow(cplx x, double g, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    if (g == std::round(g) && std::abs(g) < 1e9)
        return std::pow(theta1(x, dom, pol), static_cast<int>(g));
    const double l = dom.ell();
    if (std::abs(x.imag()) > 1e-14 * l || !(x.real() > 0.0 && x.real() < 2.0 * l)) {
        std::ostringstream os;
        os << "theta1^g with non-integer g = " << g << " needs real x in (0, 2l); got " << x;
        fail(ErrorCode::branch, os.str());
    }
    const double v = theta1(cplx(x.real(), 0.0), dom, pol).real();
    return std::pow(v, g);
}

cplx wp1(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    return theta1_jet(x, dom, pol).wp;
}

cplx wp1_prime(cplx x, const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const double l = dom.ell(), p = dom.p();
    if (lattice_distance(x, dom) < 1e-12 * l)
        fail(ErrorCode::pole, "argument on the period lattice");
    const cplx w = pi * x / (2.0 * l);
    const cplx s = std::sin(w), c = std::cos(w);
    const cplx z = std::exp(I * pi * x / l);
    const int nt = pol.terms(p, sup_arg(z));
    const double k = pi / (2.0 * l);
    cplx acc = 0.0;
    double pn = 1.0;
    for (int n = 1; n <= nt; ++n) {
        pn *= p;
        const cplx u = pn * z, v = pn / z;
        const cplx du = 1.0 - u, dv = 1.0 - v;
        acc += u * (1.0 + u) / (du * du * du) - v * (1.0 + v) / (dv * dv * dv);
    }
    return -2.0 * k * k * k * c / (s * s * s) - (pi / l) * (pi / l) * (I * pi / l) * acc;
}

double WpFourierMode::plus_value(double p) const
{
    double s = 0.0;
    for (auto it = plus.rbegin(); it != plus.rend(); ++it)
        s = s * p + *it;
    return s;
}

double WpFourierMode::minus_value(double p) const
{
    double s = 0.0;
    for (auto it = minus.rbegin(); it != minus.rend(); ++it)
        s = s * p + *it;
    return s;
}

std::vector<WpFourierMode> wp1_fourier_coeffs(const EllipticDomain& dom, const TruncationPolicy& pol,
                                              int m_max, int k_max)
{
    if (m_max < 1)
        fail(ErrorCode::domain, "m_max must be at least 1");
    const double c = -(pi / dom.ell()) * (pi / dom.ell());
    const int nt = pol.terms(dom.p(), 1.0);
    std::vector<WpFourierMode> modes;
    modes.reserve(m_max);
    for (int m = 1; m <= m_max; ++m) {
        const int order = k_max >= 0 ? k_max : m * nt;
        WpFourierMode md{m, std::vector<double>(order + 1, 0.0), std::vector<double>(order + 1, 0.0)};
        md.plus[0] = c * m;
        for (int k = m; k <= order; k += m) {
            md.plus[k] = c * m;
            md.minus[k] = c * m;
        }
        modes.push_back(std::move(md));
    }
    return modes;
}

double heat_constant_c0(const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const double p = dom.p(), k = pi / dom.ell();
    double s = 0.0, pn = 1.0;
    for (int n = 1; p > 0 && n <= pol.max_terms; ++n) {
        pn *= p;
        const double t = n * pn / (1.0 - pn);
        s += t;
        if (t < 1e-3 * pol.tail_tol)
            break;
    }
    return k * k * (0.25 - 2.0 * s);
}

double eta1_over_omega1(const EllipticDomain& dom, const TruncationPolicy& pol)
{
    const double p = dom.p(), k = pi / dom.ell();
    double s = 0.0, pn = 1.0;
    for (int n = 1; p > 0 && n <= pol.max_terms; ++n) {
        pn *= p;
        const double t = pn / ((1.0 - pn) * (1.0 - pn));
        s += t;
        if (t < 1e-3 * pol.tail_tol)
            break;
    }
    return k * k * (1.0 / 12.0 - s);
}

cplx elliptic_gamma(cplx z, const RuijsenaarsParams& par, const TruncationPolicy& pol)
{
    par.validate();
    if (z == cplx(0.0))
        fail(ErrorCode::zero_argument, "elliptic Gamma needs z != 0");
    const double p = par.p, q = par.q;
    const double s = std::max(std::abs(z), p * q / std::abs(z));
    const int np = pol.terms(p, 2.0 * s / (1.0 - q));
    const int nq = pol.terms(q, 2.0 * s / (1.0 - p));
    cplx num = 1.0, den = 1.0;
    double pn = 1.0;
    for (int n = 0; n <= np; ++n) {
        double pqm = pn;
        for (int m = 0; m <= nq; ++m) {
            const cplx d = 1.0 - pqm * z;
            if (std::abs(d) < 1e-14)
                fail(ErrorCode::pole, "elliptic Gamma evaluated at a pole z = p^-n q^-m");
            den *= d;
            num *= 1.0 - p * q * pqm / z;
            pqm *= q;
        }
        pn *= p;
    }
    return num / den;
}

namespace {

void check_torus(const std::vector<cplx>& z)
{
    for (size_t i = 0; i < z.size(); ++i) {
        if (std::abs(std::abs(z[i]) - 1.0) > 1e-12)
            fail(ErrorCode::domain, "weight arguments must be unimodular");
        for (size_t j = 0; j < i; ++j)
            if (std::abs(z[i] - z[j]) < 1e-14)
                fail(ErrorCode::coincident, "coincident weight arguments");
    }
}

} // namespace

double weight_W(const std::vector<cplx>& z, double g, double p, const TruncationPolicy& pol)
{
    check_torus(z);
    cplx prod = 1.0;
    for (size_t i = 0; i < z.size(); ++i)
        for (size_t j = 0; j < z.size(); ++j)
            if (i != j)
                prod *= theta_q(z[i] / z[j], p, pol);
    const double scale = std::abs(prod);
    if (std::abs(prod.imag()) > 1e-12 * std::max(scale, 1.0) || prod.real() < -1e-12 * std::max(scale, 1.0))
        fail(ErrorCode::domain, "weight is not real non-negative on the torus");
    return std::pow(std::max(prod.real(), 0.0), g);
}

cplx weight_Wrel(const std::vector<cplx>& z, const RuijsenaarsParams& par, const TruncationPolicy& pol)
{
    check_torus(z);
    cplx prod = 1.0;
    for (size_t i = 0; i < z.size(); ++i)
        for (size_t j = 0; j < z.size(); ++j)
            if (i != j) {
                const cplx w = z[i] / z[j];
                prod *= elliptic_gamma(par.t * w, par, pol) / elliptic_gamma(w, par, pol);
            }
    return prod;
}

} // namespace ellipcmr
