#include "ellipcmr/domain.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ellipcmr/error.hpp"

namespace ellipcmr {

const char* code_name(ErrorCode c) noexcept
{
    switch (c) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::truncation: return "truncation";
    case ErrorCode::zero_argument: return "zero_argument";
    case ErrorCode::pole: return "pole";
    case ErrorCode::branch: return "branch";
    case ErrorCode::coincident: return "coincident";
    case ErrorCode::fd_inconsistent: return "fd_inconsistent";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::collision: return "collision";
    case ErrorCode::resonance: return "resonance";
    case ErrorCode::small_divisor: return "small_divisor";
    case ErrorCode::window: return "window";
    case ErrorCode::seam: return "seam";
    case ErrorCode::quadrature: return "quadrature";
    case ErrorCode::mismatch: return "mismatch";
    case ErrorCode::extrapolation: return "extrapolation";
    }
    return "unknown";
}

int TruncationPolicy::terms(double p, double sup_u) const
{
    if (!(tail_tol > 0) || max_terms < 0)
        fail(ErrorCode::domain, "truncation policy needs tail_tol > 0 and max_terms >= 0");
    if (p == 0.0)
        return 0;
    if (!(p > 0 && p < 1) || !std::isfinite(sup_u))
        fail(ErrorCode::truncation, "nome outside [0,1) or unbounded factor argument");
    const double lp = std::log(p);
    const double scale = std::log(std::max(sup_u, 1e-300) / (1.0 - p));
    // p^(N+1) * scale <= tol
    double n = std::ceil((std::log(tail_tol) - scale) / lp) - 1.0;
    if (n < 0)
        n = 0;
    if (n > max_terms) {
        std::ostringstream os;
        os << "tail bound needs " << n << " factors at p=" << p << ", policy allows " << max_terms;
        fail(ErrorCode::truncation, os.str());
    }
    return static_cast<int>(n);
}

EllipticDomain EllipticDomain::from_half_periods(double ell, double delta)
{
    if (!(ell > 0) || !std::isfinite(ell))
        fail(ErrorCode::domain, "half period ell must be positive and finite");
    if (!(delta > 0))
        fail(ErrorCode::domain, "half period delta must be positive");
    const double p = std::isinf(delta) ? 0.0 : std::exp(-2.0 * std::numbers::pi * delta / ell);
    if (!(p < 1))
        fail(ErrorCode::domain, "nome rounds to 1");
    return EllipticDomain(ell, delta, p);
}

EllipticDomain EllipticDomain::from_nome(double ell, double p)
{
    if (!(ell > 0) || !std::isfinite(ell))
        fail(ErrorCode::domain, "half period ell must be positive and finite");
    if (!(p >= 0 && p < 1))
        fail(ErrorCode::domain, "nome must lie in [0,1)");
    if (p == 0.0)
        return EllipticDomain(ell, std::numeric_limits<double>::infinity(), 0.0);
    const double delta = -ell * std::log(p) / (2.0 * std::numbers::pi);
    const double back = std::exp(-2.0 * std::numbers::pi * delta / ell);
    if (std::abs(back - p) > 8 * std::numeric_limits<double>::epsilon() * p)
        fail(ErrorCode::domain, "nome does not round-trip through delta");
    return EllipticDomain(ell, delta, p);
}

cplx EllipticDomain::half_period(int nu) const
{
    switch (nu) {
    case 0: return {0.0, 0.0};
    case 1: return {ell_, 0.0};
    case 2: return {0.0, delta_};
    case 3: return {-ell_, -delta_};
    }
    fail(ErrorCode::domain, "half period index must be 0..3");
}

void RuijsenaarsParams::validate() const
{
    if (!(p >= 0 && p < 1))
        fail(ErrorCode::domain, "Ruijsenaars nome p must lie in [0,1)");
    if (!(q > 0 && q < 1))
        fail(ErrorCode::domain, "q must lie in (0,1)");
    // t = 1 is the free point
    if (!(t > 0 && t <= 1))
        fail(ErrorCode::domain, "t must lie in (0,1]");
}

} // namespace ellipcmr
