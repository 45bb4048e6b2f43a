#include "ellipcmr/transform.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "ellipcmr/error.hpp"
#include "ellipcmr/kernels.hpp"

namespace ellipcmr {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

void check_nodes(int nodes)
{
    if (nodes < 64 || (nodes & (nodes - 1)) != 0)
        fail(ErrorCode::domain, "quadrature node count must be a power of two >= 64");
}

void check_unimodular(const std::array<cplx, 2>& z)
{
    for (const cplx& v : z)
        if (std::abs(std::abs(v) - 1.0) > 1e-12)
            fail(ErrorCode::window, "contour transforms need |z_i| = 1");
}

void check_p(double p)
{
    if (!(p >= 0.0 && p < 1.0))
        fail(ErrorCode::domain, "nome must lie in [0, 1)");
}

// Total argument change of the sampled closed curve, in turns.
double winding(const std::vector<cplx>& v)
{
    double acc = 0.0;
    for (std::size_t m = 0; m < v.size(); ++m)
        acc += std::arg(v[(m + 1) % v.size()] / v[m]);
    return acc / (2.0 * pi);
}

void check_no_winding(const std::vector<cplx>& theta_vals)
{
    if (std::abs(winding(theta_vals)) > 0.5)
        fail(ErrorCode::branch, "theta winds around 0 on the contour");
}

std::vector<cplx> circle(double r, int n)
{
    std::vector<cplx> xi(n);
    for (int m = 0; m < n; ++m)
        xi[m] = std::polar(r, 2.0 * pi * m / n);
    return xi;
}

cplx ipow(cplx x, int n)
{
    return n >= 0 ? std::pow(x, n) : 1.0 / std::pow(x, -n);
}

// Per-node data of -g ln theta(z_i/xi) on one circle.
struct CircleFactor {
    std::vector<cplx> value;           // prod_i theta(z_i/xi)^{-g}
    std::array<std::vector<cplx>, 2> a;  // -g (w d/dw) ln theta at w = z_i/xi
    std::array<std::vector<cplx>, 2> b;  // -g (w d/dw)^2 ln theta
    std::vector<cplx> nome;            // -g sum_i p d/dp ln theta
};

CircleFactor circle_factor(const std::vector<cplx>& xi, const std::array<cplx, 2>& z, double g, double p,
                           const TruncationPolicy& pol)
{
    const std::size_t n = xi.size();
    CircleFactor f;
    f.value.assign(n, 1.0);
    f.nome.assign(n, 0.0);
    for (int i = 0; i < 2; ++i) {
        f.a[i].resize(n);
        f.b[i].resize(n);
        std::vector<cplx> th(n);
        for (std::size_t m = 0; m < n; ++m) {
            const cplx w = z[i] / xi[m];
            th[m] = theta_q(w, p, pol);
            f.value[m] *= std::exp(-g * log_theta_q(w, p, pol));
            const ThetaQLogJet j = theta_q_log_jet(w, p, pol);
            f.a[i][m] = -g * j.first;
            f.b[i][m] = -g * j.second;
            f.nome[m] += -g * j.nome;
        }
        check_no_winding(th);
    }
    return f;
}

struct Moments {
    cplx m0;
    std::array<cplx, 2> m1{};
    std::array<cplx, 2> m2{};
    cplx mp;
};

PJet jet_from_moments(const Moments& m, int l2, const std::array<cplx, 2>& z)
{
    const cplx Z = ipow(z[0] * z[1], l2);
    const double L = l2;
    PJet j;
    j.value = Z * m.m0;
    for (int i = 0; i < 2; ++i) {
        j.e1[i] = Z * (L * m.m0 + m.m1[i]);
        j.e2[i] = Z * (L * L * m.m0 + 2.0 * L * m.m1[i] + m.m2[i]);
    }
    j.nome = Z * m.mp;
    return j;
}

// Double-contour sums C[d] = sum_{m2} A[m2 + d] B[m2] e^{i phi S m2}, for
// every combination of per-circle weights the jets need.
struct DoubleGrid {
    int n2;             // nodes on the fine grid
    double R1, R2;
    std::vector<cplx> T; // theta(xi1/xi2)^g by d = m1 - m2 mod n2
    enum { c0, a1, a2, b1, b2, aa1, aa2, bb1, bb2, ab1, ab2, count };
    std::array<std::vector<cplx>, count> fine, coarse;
};

DoubleGrid double_grid(int S, const std::array<cplx, 2>& z, double g, double p, const ContourConfig& c,
                       const TruncationPolicy& pol)
{
    DoubleGrid G;
    G.n2 = 2 * c.nodes;
    G.R1 = c.R1;
    G.R2 = c.R2;
    const int n2 = G.n2;
    const auto x1 = circle(c.R1, n2), x2 = circle(c.R2, n2);
    const CircleFactor A = circle_factor(x1, z, g, p, pol);
    const CircleFactor B = circle_factor(x2, z, g, p, pol);

    G.T.resize(n2);
    {
        std::vector<cplx> th(n2);
        for (int d = 0; d < n2; ++d) {
            const cplx w = std::polar(c.R1 / c.R2, 2.0 * pi * d / n2);
            th[d] = theta_q(w, p, pol);
            G.T[d] = std::exp(g * log_theta_q(w, p, pol));
        }
        check_no_winding(th);
    }

    // per-circle weight vectors
    std::array<std::vector<cplx>, DoubleGrid::count> wa, wb;
    for (auto& v : wa)
        v = A.value;
    for (auto& v : wb)
        v = B.value;
    for (int m = 0; m < n2; ++m) {
        const cplx e = std::polar(1.0, 2.0 * pi * double(S) * m / n2);
        for (auto& v : wb)
            v[m] *= e;
        for (int i = 0; i < 2; ++i) {
            wa[DoubleGrid::a1 + i][m] *= A.a[i][m];
            wb[DoubleGrid::b1 + i][m] *= B.a[i][m];
            wa[DoubleGrid::aa1 + i][m] *= A.a[i][m] * A.a[i][m] + A.b[i][m];
            wb[DoubleGrid::bb1 + i][m] *= B.a[i][m] * B.a[i][m] + B.b[i][m];
            wa[DoubleGrid::ab1 + i][m] *= A.a[i][m];
            wb[DoubleGrid::ab1 + i][m] *= B.a[i][m];
        }
    }
    for (int t = 0; t < DoubleGrid::count; ++t) {
        G.fine[t].assign(n2, 0.0);
        G.coarse[t].assign(n2, 0.0);
        for (int d = 0; d < n2; ++d) {
            cplx acc = 0.0, acc_c = 0.0;
            for (int m2 = 0; m2 < n2; ++m2) {
                const cplx v = wa[t][(m2 + d) % n2] * wb[t][m2];
                acc += v;
                if (m2 % 2 == 0)
                    acc_c += v;
            }
            G.fine[t][d] = acc;
            if (d % 2 == 0)
                G.coarse[t][d] = acc_c;
        }
    }
    return G;
}

struct DoubleMoments {
    Moments fine, coarse;
};

DoubleMoments double_moments(const DoubleGrid& G, int m1, int m2)
{
    const int n2 = G.n2;
    DoubleMoments out;
    std::array<cplx, DoubleGrid::count> sf{}, sc{};
    for (int d = 0; d < n2; ++d) {
        const cplx e = std::polar(1.0, 2.0 * pi * double(m1) * d / n2) * G.T[d];
        for (int t = 0; t < DoubleGrid::count; ++t) {
            sf[t] += e * G.fine[t][d];
            if (d % 2 == 0)
                sc[t] += e * G.coarse[t][d];
        }
    }
    const double scale = std::pow(G.R1, m1) * std::pow(G.R2, m2);
    auto fill = [&](Moments& M, const std::array<cplx, DoubleGrid::count>& s, double nn) {
        const double w = scale / (nn * nn);
        M.m0 = w * s[DoubleGrid::c0];
        for (int i = 0; i < 2; ++i) {
            M.m1[i] = w * (s[DoubleGrid::a1 + i] + s[DoubleGrid::b1 + i]);
            M.m2[i] = w * (s[DoubleGrid::aa1 + i] + s[DoubleGrid::bb1 + i] + 2.0 * s[DoubleGrid::ab1 + i]);
        }
        M.mp = 0.0;
    };
    fill(out.fine, sf, n2);
    fill(out.coarse, sc, n2 / 2);
    return out;
}

void check_table(const Partition2& lambda, const PSeriesTable& t, double g, int K)
{
    if (lambda.l1 < lambda.l2)
        fail(ErrorCode::domain, "partition needs l1 >= l2");
    if (std::abs(t.s1 - (lambda.l1 + 0.5 * g)) > 1e-12 || std::abs(t.s2 - (lambda.l2 - 0.5 * g)) > 1e-12 ||
        std::abs(t.gamma - g * (g - 1.0)) > 1e-12 || t.variant != Variant::I)
        fail(ErrorCode::mismatch, "table was not solved at s = (l1 + g/2, l2 - g/2), gamma = g(g-1), Variant I");
    if (K < 0 || K > t.K)
        fail(ErrorCode::mismatch, "requested order exceeds the table's truncation");
}

std::array<cplx, 2> z_of(const Coords& x, double l)
{
    if (x.size() != 2)
        fail(ErrorCode::domain, "N = 2 fields take two coordinates");
    return {std::exp(I * pi * x[0] / l), std::exp(I * pi * x[1] / l)};
}

// psi_0 P with P evaluated once per point
SmoothField product_field(std::function<PJet(const std::array<cplx, 2>&)> jet, double g, const EllipticDomain& dom,
                          const TruncationPolicy& pol, bool has_tau)
{
    const SmoothField g0 = ground_state_field(g, dom, pol);
    const double l = dom.ell();
    auto cache = std::make_shared<std::pair<Coords, PJet>>();
    auto eval = [jet, cache, l](const Coords& x) -> const PJet& {
        if (cache->first != x) {
            cache->second = jet(z_of(x, l));
            cache->first = x;
        }
        return cache->second;
    };
    const double k = pi / l;
    SmoothField f;
    f.value = [g0, eval](const Coords& x) { return g0.value(x) * eval(x).value; };
    f.d1 = [g0, eval, k](const Coords& x) {
        const PJet& j = eval(x);
        const cplx v0 = g0.value(x);
        const Coords d0 = g0.d1(x);
        Coords out(2);
        for (int i = 0; i < 2; ++i)
            out[i] = d0[i] * j.value + v0 * I * k * j.e1[i];
        return out;
    };
    f.d2 = [g0, eval, k](const Coords& x) {
        const PJet& j = eval(x);
        const cplx v0 = g0.value(x);
        const Coords d0 = g0.d1(x), dd0 = g0.d2(x);
        Coords out(2);
        for (int i = 0; i < 2; ++i)
            out[i] = dd0[i] * j.value + 2.0 * d0[i] * I * k * j.e1[i] - v0 * k * k * j.e2[i];
        return out;
    };
    if (has_tau)
        f.dtau = [g0, eval](const Coords& x) {
            const PJet& j = eval(x);
            return g0.dtau(x) * j.value + g0.value(x) * 2.0 * pi * I * j.nome;
        };
    return f;
}

// 1/Gamma, zero at the poles
double rgamma(double x)
{
    if (x <= 0.0 && x == std::round(x))
        return 0.0;
    return 1.0 / std::tgamma(x);
}

} // namespace

cplx kernel_K(const KernelSpec& spec, const Coords& x, const Coords& y, const EllipticDomain& dom,
              const TruncationPolicy& pol)
{
    if (static_cast<int>(x.size()) != spec.n || static_cast<int>(y.size()) != spec.m)
        fail(ErrorCode::domain, "coordinate counts do not match the kernel spec");
    if (spec.n < 0 || spec.m < 0 || spec.n + spec.m <= 0)
        fail(ErrorCode::domain, "kernel needs N, M >= 0 and N + M > 0");
    const double g = spec.g, l = dom.ell();
    auto factor = [&](cplx u) {
        if (lattice_distance(u, dom) < 1e-12 * l)
            fail(ErrorCode::pole, "kernel argument on the period lattice");
        return theta1_pow(u, g, dom, pol);
    };
    cplx v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            v *= factor(x[i] - x[j]);
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j)
            v *= factor(y[i] - y[j]);
    for (const cplx& a : x)
        for (const cplx& b : y)
            v /= factor(a - b);
    return v;
}

CircleContour resolve(const CircleContour& c, double p)
{
    check_p(p);
    check_nodes(c.nodes);
    CircleContour r = c;
    if (r.radius == 0.0)
        r.radius = p > 0.0 ? 1.0 / std::sqrt(p) : 2.0;
    if (!(r.radius > 1.0 && (p == 0.0 || r.radius < 1.0 / p))) {
        std::ostringstream os;
        os << "contour radius " << r.radius << " outside the window (1, 1/p)";
        fail(ErrorCode::window, os.str());
    }
    return r;
}

ContourConfig resolve(const ContourConfig& c, double p)
{
    check_p(p);
    check_nodes(c.nodes);
    ContourConfig r = c;
    if (r.R1 == 0.0 && r.R2 == 0.0) {
        r.R1 = p > 0.0 ? std::pow(p, -1.0 / 3.0) : 2.0;
        r.R2 = p > 0.0 ? std::pow(p, -2.0 / 3.0) : 4.0;
    }
    if (!(1.0 < r.R1 && r.R1 < r.R2 && (p == 0.0 || r.R2 < 1.0 / p))) {
        std::ostringstream os;
        os << "radii (" << r.R1 << ", " << r.R2 << ") violate 1 < R1 < R2 < 1/p";
        fail(ErrorCode::window, os.str());
    }
    return r;
}

PJet single_contour_jet(int lam, int l2, const std::array<cplx, 2>& z, double g, double p, const CircleContour& c0,
                        const TruncationPolicy& pol)
{
    if (lam < 0)
        fail(ErrorCode::domain, "single-contour exponent l1 - l2 must be >= 0");
    check_unimodular(z);
    const CircleContour c = resolve(c0, p);
    const int n2 = 2 * c.nodes;
    const auto xi = circle(c.radius, n2);
    const CircleFactor f = circle_factor(xi, z, g, p, pol);

    Moments fine{}, coarse{};
    for (int m = 0; m < n2; ++m) {
        const cplx v = ipow(xi[m], lam) * f.value[m];
        auto add = [&](Moments& M) {
            M.m0 += v;
            for (int i = 0; i < 2; ++i) {
                M.m1[i] += v * f.a[i][m];
                M.m2[i] += v * (f.a[i][m] * f.a[i][m] + f.b[i][m]);
            }
            M.mp += v * f.nome[m];
        };
        add(fine);
        if (m % 2 == 0)
            add(coarse);
    }
    auto scale = [](Moments& M, double s) {
        M.m0 *= s;
        M.mp *= s;
        for (int i = 0; i < 2; ++i) {
            M.m1[i] *= s;
            M.m2[i] *= s;
        }
    };
    scale(fine, 1.0 / n2);
    scale(coarse, 2.0 / n2);
    PJet j = jet_from_moments(fine, l2, z);
    j.node_delta = std::abs(j.value - jet_from_moments(coarse, l2, z).value);
    return j;
}

ContourValue n2_single_contour_P(int lam, int l2, const std::array<cplx, 2>& z, double g, double p,
                                 const CircleContour& c, const TruncationPolicy& pol)
{
    const PJet j = single_contour_jet(lam, l2, z, g, p, c, pol);
    return {j.value, j.node_delta};
}

ContourValue contour_F_lambda(int m1, int m2, const std::array<cplx, 2>& z, double g, double p,
                              const ContourConfig& c0, const TruncationPolicy& pol)
{
    check_unimodular(z);
    const ContourConfig c = resolve(c0, p);
    const DoubleGrid G = double_grid(m1 + m2, z, g, p, c, pol);
    const DoubleMoments M = double_moments(G, m1, m2);
    return {M.fine.m0, std::abs(M.fine.m0 - M.coarse.m0)};
}

PJet assemble_P_jet(const Partition2& lambda, const PSeriesTable& table, const std::array<cplx, 2>& z, double g,
                    double p, int K, const ContourConfig& c0, const TruncationPolicy& pol)
{
    check_table(lambda, table, g, K);
    check_unimodular(z);
    const ContourConfig c = resolve(c0, p);
    const DoubleGrid G = double_grid(lambda.l1 + lambda.l2, z, g, p, c, pol);

    PJet out, coarse;
    double pk = 1.0;
    for (int k = 0; k <= K; ++k, pk *= p) {
        if (pk == 0.0)
            break;
        for (int n = -k; n <= lambda.l2 + K - k; ++n) {
            const cplx a = table.at(n, k) * pk;
            if (a == 0.0)
                continue;
            const DoubleMoments M = double_moments(G, lambda.l1 + n, lambda.l2 - n);
            const PJet jf = jet_from_moments(M.fine, 0, z), jc = jet_from_moments(M.coarse, 0, z);
            out.value += a * jf.value;
            coarse.value += a * jc.value;
            for (int i = 0; i < 2; ++i) {
                out.e1[i] += a * jf.e1[i];
                out.e2[i] += a * jf.e2[i];
            }
        }
    }
    out.node_delta = std::abs(out.value - coarse.value);
    return out;
}

ContourValue assemble_P_lambda(const Partition2& lambda, const PSeriesTable& table, const std::array<cplx, 2>& z,
                               double g, double p, int K, const ContourConfig& c, const TruncationPolicy& pol)
{
    const PJet j = assemble_P_jet(lambda, table, z, g, p, K, c, pol);
    return {j.value, j.node_delta};
}

SmoothField single_contour_field(int lam, int l2, double g, const EllipticDomain& dom, const CircleContour& c,
                                 const TruncationPolicy& pol)
{
    const double p = dom.p();
    return product_field(
        [=](const std::array<cplx, 2>& z) { return single_contour_jet(lam, l2, z, g, p, c, pol); }, g, dom, pol,
        !dom.trigonometric());
}

SmoothField assembled_field(const Partition2& lambda, const PSeriesTable& table, double g, const EllipticDomain& dom,
                            int K, const ContourConfig& c, const TruncationPolicy& pol)
{
    check_table(lambda, table, g, K);
    const double p = dom.p();
    return product_field(
        [=](const std::array<cplx, 2>& z) { return assemble_P_jet(lambda, table, z, g, p, K, c, pol); }, g, dom,
        pol, false);
}

cplx assembled_energy(const PSeriesTable& table, const EllipticDomain& dom, int K)
{
    if (K < 0 || K > table.K)
        fail(ErrorCode::mismatch, "requested order exceeds the table's truncation");
    cplx e = 0.0;
    double pk = 1.0;
    for (int k = 0; k <= K; ++k, pk *= dom.p())
        e += table.eps[k] * pk;
    const double s = pi / dom.ell();
    return s * s * e;
}

TransformValue kernel_transform(const KernelSpec& spec, const std::function<cplx(const Coords&)>& source,
                                const LineContour& contour, const Coords& x, const EllipticDomain& dom,
                                const TruncationPolicy& pol)
{
    const int M = spec.m;
    if (static_cast<int>(x.size()) != spec.n || spec.n < 0 || M < 0 || spec.n + M <= 0)
        fail(ErrorCode::domain, "coordinate counts do not match the kernel spec");
    if (M > 2)
        fail(ErrorCode::domain, "kernel_transform supports M <= 2");
    if (static_cast<int>(contour.eps.size()) != M)
        fail(ErrorCode::domain, "one line offset per integration variable");
    check_nodes(contour.nodes);
    const double g = spec.g, l = dom.ell();

    // constant x-x part
    cplx xx = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            xx *= theta1_pow(x[i] - x[j], g, dom, pol);
    if (M == 0)
        return {xx * source({}), 0.0, 0.0};

    const int n2 = 2 * contour.nodes;
    auto y_at = [&](int j, int m) { return -l + 2.0 * l * m / n2 - I * contour.eps[j]; };
    auto log_theta1 = [&](cplx u) {
        const cplx v = theta1(u, dom, pol);
        if (std::abs(v) < 1e-14)
            fail(ErrorCode::pole, "kernel factor vanishes on the contour");
        return std::log(v);
    };
    // continue ln theta1 along a sampled path starting at index start
    auto unwrap = [](std::vector<cplx>& v, int start) {
        for (int m = start + 1; m < int(v.size()); ++m)
            v[m] = {v[m].real(), v[m - 1].imag() + std::remainder(v[m].imag() - v[m - 1].imag(), 2.0 * pi)};
        for (int m = start - 1; m >= 0; --m)
            v[m] = {v[m].real(), v[m + 1].imag() + std::remainder(v[m].imag() - v[m + 1].imag(), 2.0 * pi)};
    };

    // L_xy[j][m] = sum_i ln theta1(x_i - y_j(m)), m = 0..n2
    std::vector<std::vector<cplx>> Lxy(M, std::vector<cplx>(n2 + 1, 0.0));
    for (int j = 0; j < M; ++j)
        for (const cplx& xi : x) {
            std::vector<cplx> v(n2 + 1);
            for (int m = 0; m <= n2; ++m)
                v[m] = log_theta1(xi - y_at(j, m));
            unwrap(v, 0);
            for (int m = 0; m <= n2; ++m)
                Lxy[j][m] += v[m];
        }
    // ln theta1(y_0 - y_1) as a function of m0 - m1 in [-n2, n2]
    std::vector<cplx> Lyy;
    if (M == 2) {
        if (contour.eps[0] == contour.eps[1])
            fail(ErrorCode::domain, "line offsets must differ");
        Lyy.resize(2 * n2 + 1);
        for (int s = -n2; s <= n2; ++s)
            Lyy[s + n2] = log_theta1(2.0 * l * s / n2 - I * (contour.eps[0] - contour.eps[1]));
        unwrap(Lyy, n2);
    }

    auto integrand = [&](int m0, int m1) {
        cplx lg = -Lxy[0][m0];
        Coords y{y_at(0, m0)};
        if (M == 2) {
            lg += Lyy[m0 - m1 + n2] - Lxy[1][m1];
            y.push_back(y_at(1, m1));
        }
        return std::exp(g * lg) * source(y);
    };

    // seam: closing each line must return to the starting value
    double seam = 0.0;
    for (int j = 0; j < M; ++j)
        for (int other : {0, n2 / 4, n2 / 2}) {
            if (M == 1 && other != 0)
                break;
            const cplx a = j == 0 ? integrand(0, other) : integrand(other, 0);
            const cplx b = j == 0 ? integrand(n2, other) : integrand(other, n2);
            seam = std::max(seam, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
        }
    if (seam > contour.seam_tol) {
        std::ostringstream os;
        os << "integrand does not close up across the contour seam (relative jump " << seam << ")";
        fail(ErrorCode::seam, os.str());
    }

    cplx fine = 0.0, coarse = 0.0;
    if (M == 1) {
        for (int m = 0; m < n2; ++m) {
            const cplx v = integrand(m, 0);
            fine += v;
            if (m % 2 == 0)
                coarse += v;
        }
    } else {
        for (int m0 = 0; m0 < n2; ++m0)
            for (int m1 = 0; m1 < n2; ++m1) {
                const cplx v = integrand(m0, m1);
                fine += v;
                if (m0 % 2 == 0 && m1 % 2 == 0)
                    coarse += v;
            }
    }
    const double len = std::pow(2.0 * l, M);
    const double wf = len / std::pow(double(n2), M), wc = len / std::pow(double(n2 / 2), M);
    TransformValue r;
    r.value = xx * wf * fine;
    r.node_delta = std::abs(r.value - xx * wc * coarse);
    r.seam_mismatch = seam;
    return r;
}

std::vector<double> jack_coefficients(const Partition2& lambda, double g)
{
    if (lambda.l1 < lambda.l2 || lambda.l2 < 0)
        fail(ErrorCode::domain, "partition needs l1 >= l2 >= 0");
    if (!(g > 0.0))
        fail(ErrorCode::domain, "Jack oracle needs g > 0");
    // Fourier coefficients of |1 - e^{i phi}|^{2g}: (-1)^k Gamma(2g+1)/(Gamma(g+k+1) Gamma(g-k+1))
    auto w = [g](int k) {
        return (k % 2 == 0 ? 1.0 : -1.0) * std::tgamma(2.0 * g + 1.0) * rgamma(g + k + 1.0) * rgamma(g - k + 1.0);
    };
    const int J = (lambda.l1 - lambda.l2) / 2;
    // m_j = m_{(l1 - j, l2 + j)} as a list of z1 exponents (the z2 exponent is fixed by the degree)
    auto terms = [&](int j) {
        const int a = lambda.l1 - j, b = lambda.l2 + j;
        return a == b ? std::vector<int>{a} : std::vector<int>{a, b};
    };
    auto inner = [&](int i, int j) {
        double s = 0.0;
        for (int a : terms(i))
            for (int b : terms(j))
                s += w(a - b);
        return s;
    };
    std::vector<double> c{1.0};
    if (J == 0)
        return c;
    Eigen::MatrixXd A(J, J);
    Eigen::VectorXd rhs(J);
    for (int i = 1; i <= J; ++i) {
        rhs(i - 1) = -inner(0, i);
        for (int j = 1; j <= J; ++j)
            A(i - 1, j - 1) = inner(j, i);
    }
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    for (int j = 0; j < J; ++j)
        c.push_back(sol(j));
    return c;
}

cplx jack_gram_schmidt(const Partition2& lambda, double g, const std::array<cplx, 2>& z)
{
    const auto c = jack_coefficients(lambda, g);
    cplx v = 0.0;
    for (int j = 0; j < int(c.size()); ++j) {
        const int a = lambda.l1 - j, b = lambda.l2 + j;
        cplx m = std::pow(z[0], a) * std::pow(z[1], b);
        if (a != b)
            m += std::pow(z[0], b) * std::pow(z[1], a);
        v += c[j] * m;
    }
    return v;
}

} // namespace ellipcmr
