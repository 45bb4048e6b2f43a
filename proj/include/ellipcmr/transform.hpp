#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ellipcmr/domain.hpp"
#include "ellipcmr/operators.hpp"
#include "ellipcmr/perturbative.hpp"

namespace ellipcmr {

// prod_{i<j} theta1(x_ij)^g prod_{i<j} theta1(y_ij)^g / prod_{i,j} theta1(x_i - y_j)^g
cplx kernel_K(const KernelSpec& spec, const Coords& x, const Coords& y, const EllipticDomain& dom,
              const TruncationPolicy& pol = {});

struct Partition2 {
    int l1 = 0;
    int l2 = 0;
};

// Trapezoid on |xi| = radius; radius 0 picks the default p^{-1/2} (2 at p = 0).
struct CircleContour {
    double radius = 0.0;
    int nodes = 256;
};

// Two circles 1 < R1 < R2 < 1/p; zeros pick p^{-1/3}, p^{-2/3} (2, 4 at p = 0).
struct ContourConfig {
    double R1 = 0.0;
    double R2 = 0.0;
    int nodes = 256;
};

// value from 2*nodes, node_delta = |value(2 nodes) - value(nodes)|
struct ContourValue {
    cplx value;
    double node_delta = 0.0;
};

CircleContour resolve(const CircleContour& c, double p);
ContourConfig resolve(const ContourConfig& c, double p);

// (z1 z2)^{l2} oint dxi/(2 pi i xi) xi^{lam} / (theta(z1/xi)^g theta(z2/xi)^g), lam = l1 - l2 >= 0
ContourValue n2_single_contour_P(int lam, int l2, const std::array<cplx, 2>& z, double g, double p,
                                 const CircleContour& c = {}, const TruncationPolicy& pol = {});

// oint oint dxi1 dxi2/((2 pi i)^2 xi1 xi2) xi1^{m1} xi2^{m2} theta(xi1/xi2)^g / prod theta(z_i/xi_j)^g
ContourValue contour_F_lambda(int m1, int m2, const std::array<cplx, 2>& z, double g, double p,
                              const ContourConfig& c = {}, const TruncationPolicy& pol = {});

// P with its Euler derivatives (z_i d/dz_i) and (z_i d/dz_i)^2, and p d/dp where defined.
struct PJet {
    cplx value;
    std::array<cplx, 2> e1{};
    std::array<cplx, 2> e2{};
    cplx nome{0.0, 0.0};
    double node_delta = 0.0;
};

PJet single_contour_jet(int lam, int l2, const std::array<cplx, 2>& z, double g, double p,
                        const CircleContour& c = {}, const TruncationPolicy& pol = {});

// sum_{k <= K} sum_n a_{n,k} F_{l1+n, l2-n} p^k with n <= l2 + K - k, the terms
// through total order p^K. The table must come from solve_variant_I at
// s = (l1 + g/2, l2 - g/2), gamma = g(g-1), with table.K >= K.
PJet assemble_P_jet(const Partition2& lambda, const PSeriesTable& table, const std::array<cplx, 2>& z, double g,
                    double p, int K, const ContourConfig& c = {}, const TruncationPolicy& pol = {});
ContourValue assemble_P_lambda(const Partition2& lambda, const PSeriesTable& table, const std::array<cplx, 2>& z,
                               double g, double p, int K, const ContourConfig& c = {},
                               const TruncationPolicy& pol = {});

// psi_0(x) P(z(x)) as a field on real coordinates, with analytic derivatives.
SmoothField single_contour_field(int lam, int l2, double g, const EllipticDomain& dom, const CircleContour& c = {},
                                 const TruncationPolicy& pol = {});
SmoothField assembled_field(const Partition2& lambda, const PSeriesTable& table, double g, const EllipticDomain& dom,
                            int K, const ContourConfig& c = {}, const TruncationPolicy& pol = {});

// (pi/l)^2 sum_{k <= K} eps_k p^k
cplx assembled_energy(const PSeriesTable& table, const EllipticDomain& dom, int K);

// y_j = -l + 2 l t - i eps_j, t in [0, 1), trapezoid in each t.
struct LineContour {
    std::vector<double> eps;
    int nodes = 256;
    double seam_tol = 1e-10;
};

struct TransformValue {
    cplx value;
    double node_delta = 0.0;
    double seam_mismatch = 0.0; // relative jump of the integrand across t = 0 ~ 1
};

// int_C K(x, y) source(y) dy with the powers of theta1 continued along the
// lines. Throws ErrorCode::seam when the integrand does not close up.
TransformValue kernel_transform(const KernelSpec& spec, const std::function<cplx(const Coords&)>& source,
                                const LineContour& contour, const Coords& x, const EllipticDomain& dom,
                                const TruncationPolicy& pol = {});

// Jack polynomial P^{(1/g)}_lambda(z1, z2), monic in m_lambda, by Gram-Schmidt
// of monomial symmetric functions in the weight |1 - z1/z2|^{2g} on the torus.
cplx jack_gram_schmidt(const Partition2& lambda, double g, const std::array<cplx, 2>& z);
// coefficients c_j of m_{(l1 - j, l2 + j)}, j = 0..floor((l1-l2)/2), c_0 = 1
std::vector<double> jack_coefficients(const Partition2& lambda, double g);

} // namespace ellipcmr
