#pragma once

#include "trunclag/precision.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <vector>

namespace trunclag {

/// Exact rational scalar for the small-z Taylor data.
using Rational = boost::multiprecision::mpq_rational;

/// Taylor coefficients s_{n,k} of sigma_n(z) = sum_{m<n} b_m(z) about
/// z = 0, with the derived coefficients of a_n and b_n:
///   a_n(z) = sum_k (1-k) s_{n,k} z^k,   b_n(z) = sum_k (s_{n+1,k} - s_{n,k}) z^k.
/// Rows 0..nmax+1 are guaranteed filled through order kmax (extra rows
/// are built internally because each recursion order consumes the
/// neighbours of the row above).
template <class F>
struct SigmaSeries {
    F alpha;
    unsigned nmax = 0;
    unsigned kmax = 0;
    std::vector<std::vector<F>> s;

    const F& at(unsigned n, unsigned k) const {
        if (n > nmax + 1 || k > kmax)
            throw std::out_of_range("SigmaSeries: index outside the guaranteed block");
        return s[n][k];
    }
    F a_coeff(unsigned n, unsigned k) const { return (1 - F(k)) * at(n, k); }
    F b_coeff(unsigned n, unsigned k) const { return at(n + 1, k) - at(n, k); }
};

/// Build the table: closed forms
///   s_{n,1} = n(n+alpha)/(2n+alpha),
///   s_{n,2} = -n^2 (n+alpha)^2 / ((2n+alpha-1)(2n+alpha)^2(2n+alpha+1)),
/// and for k >= 3 the quadratic recursion
///   s_{n,k} = -1/((k-1)(k-2)) sum_{j=1}^{k-2} (k-1-j) s_{n,k-j}
///             (s_{n+1,j} - 2 s_{n,j} + s_{n-1,j}).
/// Row 0 is identically zero. Works over exact rationals or Real.
template <class F>
SigmaSeries<F> sigma_series(unsigned nmax, unsigned kmax, const F& alpha) {
    if (kmax < 2)
        throw std::invalid_argument("sigma_series: kmax must be >= 2");
    if (!(2 + alpha > 1))
        throw std::invalid_argument("sigma_series: alpha must be > -1");
    // each recursion order k loses the top row's two highest orders, so
    // pad enough rows that rows 0..nmax+1 survive to order kmax
    const unsigned rows = nmax + 1 + (kmax + 1) / 2;
    SigmaSeries<F> out;
    out.alpha = alpha;
    out.nmax = nmax;
    out.kmax = kmax;
    out.s.assign(rows + 1, std::vector<F>(kmax + 1, F(0)));
    std::vector<unsigned> maxk(rows + 1, 2);
    maxk[0] = kmax; // sigma_0 = 0 identically
    for (unsigned n = 1; n <= rows; ++n) {
        const F m = F(n) + alpha;
        const F t = F(n) + m; // 2n + alpha
        out.s[n][1] = F(n) * m / t;
        out.s[n][2] = -F(n) * F(n) * m * m / ((t - 1) * t * t * (t + 1));
    }
    for (unsigned k = 3; k <= kmax; ++k) {
        for (unsigned n = 1; n < rows; ++n) {
            if (maxk[n - 1] < k - 2 || maxk[n + 1] < k - 2 || maxk[n] < k - 1)
                continue;
            F acc(0);
            for (unsigned j = 1; j + 2 <= k; ++j)
                acc += F(k - 1 - j) * out.s[n][k - j] *
                       (out.s[n + 1][j] - 2 * out.s[n][j] + out.s[n - 1][j]);
            out.s[n][k] = -acc / (F(k - 1) * F(k - 2));
            maxk[n] = k;
        }
    }
    for (unsigned n = 0; n <= nmax + 1; ++n)
        if (maxk[n] < kmax)
            throw std::logic_error("sigma_series: row padding insufficient");
    return out;
}

/// Large-n limit of the Taylor coefficients:  s_{n,k} -> c_k n^{-k} with
///   c_k = ((-1)^k (4 alpha^2 - 1) - 1) / 2^{2k+3},   k >= 3.
Real c_asym(unsigned k, const Real& alpha);

} // namespace trunclag
