#pragma once

// Scalar-generic core of the N = 2 perturbative recursion. Instantiated with
// std::complex<double> and with a 50-digit complex type for the gauge route.

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "ellipcmr/error.hpp"

namespace ellipcmr::detail {

template <class C>
class RecursionCore {
public:
    // variant_I: a_{0,k} = 0 and the (0,k) equation yields eps_k.
    // Otherwise eps_k = 0 for k >= 1 and every (n,k) != (0,0) is divided out.
    RecursionCore(C s1, C s2, C gamma, C kappa, int K, int n_cap, bool variant_I, double resonance_tol)
        : s1_(s1), s2_(s2), gamma_(gamma), kappa_(kappa), K_(K), n_cap_(n_cap), variant_I_(variant_I),
          tol_(resonance_tol)
    {
        if (K < 0 || n_cap < 0)
            fail(ErrorCode::domain, "truncation order and n_cap must be non-negative");
        a_.resize(K + 1);
        filled_.resize(K + 1);
        for (int k = 0; k <= K; ++k) {
            a_[k].assign(n_max(k) + k + 1, C(0));
            filled_[k].assign(n_max(k) + k + 1, 0);
        }
        eps_.assign(K + 1, C(0));
    }

    int K() const { return K_; }
    int n_max(int k) const { return n_cap_ + 2 * K_ - k; }

    // Reads below the support are zero. Reads of unfilled or out-of-window
    // entries throw, which is how filling order is instrumented.
    const C& get(int n, int k) const
    {
        static const C zero(0);
        if (k < 0 || k > K_ || n > n_max(k)) {
            std::ostringstream os;
            os << "read of a(" << n << "," << k << ") outside the table window";
            fail(ErrorCode::window, os.str());
        }
        if (n < -k)
            return zero;
        if (!filled_[k][n + k]) {
            std::ostringstream os;
            os << "read of unfilled entry a(" << n << "," << k << ")";
            fail(ErrorCode::window, os.str());
        }
        return a_[k][n + k];
    }

    void run()
    {
        using std::abs;
        const C d = s1_ - s2_;
        eps_[0] = (s1_ * s1_ + s2_ * s2_) / C(2);
        set(0, 0, C(1));
        for (int k = 0; k <= K_; ++k) {
            for (int n = -k; n <= n_max(k); ++n) {
                if (n == 0 && k == 0)
                    continue;
                C src(0);
                double mag = 0.0;
                auto add = [&](const C& v) {
                    src += v;
                    mag += static_cast<double>(abs(v));
                };
                // eps_k a_{n,0} with n < 0 vanishes by support; eps_k itself
                // is only known after the n = 0 entry of this level
                for (int kp = 1; kp <= k; ++kp)
                    if (!(kp == k && n >= 0))
                        add(eps_[kp] * get(n, k - kp));
                for (int m = 1; m <= n + k; ++m)
                    add(gamma_ * C(m) * get(n - m, k));
                for (int nu = 1; nu <= k; ++nu)
                    for (int m = 1; m <= k / nu; ++m)
                        add(gamma_ * C(m) * (get(n - m, k - nu * m) + get(n + m, k - nu * m)));
                if (k >= 1 && n == 0 && variant_I_) {
                    eps_[k] = -src;
                    set(0, k, C(0));
                    continue;
                }
                if (k >= 1 && n > 0 && variant_I_)
                    add(eps_[k] * get(n, 0));

                const C div = C(n) * (C(n) + d) - C(k) * kappa_;
                if (static_cast<double>(abs(div)) < tol_) {
                    if (static_cast<double>(abs(src)) <= tol_ * mag) {
                        free_.emplace_back(n, k);
                        set(n, k, C(0));
                        continue;
                    }
                    std::ostringstream os;
                    os << "vanishing divisor at (n,k) = (" << n << "," << k << ") with non-zero source";
                    fail(variant_I_ ? ErrorCode::resonance : ErrorCode::small_divisor, os.str());
                }
                set(n, k, src / div);
            }
        }
    }

    const std::vector<std::vector<C>>& table() const { return a_; }
    const std::vector<C>& eps() const { return eps_; }
    const std::vector<std::pair<int, int>>& free_entries() const { return free_; }

private:
    void set(int n, int k, const C& v)
    {
        a_[k][n + k] = v;
        filled_[k][n + k] = 1;
    }

    C s1_, s2_, gamma_, kappa_;
    int K_, n_cap_;
    bool variant_I_;
    double tol_;
    std::vector<std::vector<C>> a_;
    std::vector<std::vector<char>> filled_;
    std::vector<C> eps_;
    std::vector<std::pair<int, int>> free_;
};

} // namespace ellipcmr::detail
