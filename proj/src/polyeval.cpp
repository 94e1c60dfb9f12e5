#include "trunclag/polyeval.hpp"

#include <algorithm>
#include <stdexcept>

namespace trunclag {

PolyValue eval_poly(const RecurrenceTable& t, unsigned n, const Real& x_in) {
    if (n > t.max_n())
        throw std::invalid_argument("eval_poly: degree exceeds the table");
    ScopedPrecision guard(t.ctx);
    const Real x = at_working_precision(x_in);
    PolyValue prev{Real(0), Real(0), Real(0)};
    PolyValue cur{Real(1), Real(0), Real(0)};
    for (unsigned k = 0; k < n; ++k) {
        const Real xb = x - t.b[k];
        PolyValue next;
        next.v = xb * cur.v - t.a[k] * prev.v;
        next.d1 = cur.v + xb * cur.d1 - t.a[k] * prev.d1;
        next.d2 = 2 * cur.d1 + xb * cur.d2 - t.a[k] * prev.d2;
        prev = cur;
        cur = next;
    }
    return cur;
}

PolyValue eval_sym(const SymmetricTable& t, unsigned n, const Real& x_in) {
    if (n >= 1 && n - 1 > t.max_gamma())
        throw std::invalid_argument("eval_sym: degree exceeds the table");
    ScopedPrecision guard(t.ctx);
    const Real x = at_working_precision(x_in);
    PolyValue prev{Real(0), Real(0), Real(0)};
    PolyValue cur{Real(1), Real(0), Real(0)};
    for (unsigned k = 0; k < n; ++k) {
        PolyValue next;
        next.v = x * cur.v - t.gamma[k] * prev.v;
        next.d1 = cur.v + x * cur.d1 - t.gamma[k] * prev.d1;
        next.d2 = 2 * cur.d1 + x * cur.d2 - t.gamma[k] * prev.d2;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

Real normalized(const Real& lhs, const std::vector<Real>& terms) {
    Real rhs(0), scale = abs(lhs);
    for (const Real& t : terms) {
        rhs += t;
        scale = (std::max)(scale, abs(t));
    }
    if (scale == 0) return abs(lhs - rhs);
    return abs(lhs - rhs) / scale;
}

Real c_coef(const RecurrenceTable& t, unsigned n, const Real& x, const Real& ae) {
    return t.a[n + 1] * (x + t.b[n + 1] - (2 * Real(n) + ae + t.params.z + 3));
}

Real delta_coef(const RecurrenceTable& t, unsigned n, const Real& x) {
    Real bsum(0);
    for (unsigned k = 0; k <= n; ++k) bsum += t.b[k];
    return Real(n + 1) * (x - t.params.z) + bsum - t.a[n + 1];
}

} // namespace

Real structure_residual(const RecurrenceTable& t, unsigned n, const Real& x_in) {
    if (n + 2 > t.max_n())
        throw std::invalid_argument("structure_residual: table too short");
    ScopedPrecision guard(t.ctx);
    const Real x = at_working_precision(x_in);
    const Real& z = t.params.z;
    const Real ae = effective_alpha(t.params);
    const Real phi = x * x - z * x;
    const Real diag = (t.a[n + 2] + t.a[n + 1] + t.b[n + 1] * t.b[n + 1] -
                       (z + ae + 2) * t.b[n + 1] + z * (1 + ae)) /
                      2;
    const Real sub = (t.b[n + 1] + t.b[n] - (z + ae + 2 + n)) * t.a[n + 1];
    const PolyValue p1 = eval_poly(t, n + 1, x);
    const Real lhs = phi * p1.d1;
    std::vector<Real> terms{Real(n + 1) * eval_poly(t, n + 2, x).v, diag * p1.v,
                            sub * eval_poly(t, n, x).v};
    if (n >= 1)
        terms.push_back(t.a[n + 1] * t.a[n] * eval_poly(t, n - 1, x).v);
    return normalized(lhs, terms);
}

Real structure_residual_sym(const SymmetricTable& t, unsigned n, const Real& x_in) {
    if (n < 4 || n + 2 > t.max_gamma())
        throw std::invalid_argument("structure_residual_sym: need 4 <= n <= max_gamma-2");
    ScopedPrecision guard(t.ctx);
    const Real x = at_working_precision(x_in);
    const Real& z = t.params.z;
    const Real& alpha = t.params.alpha;
    const std::vector<Real>& g = t.gamma;
    const Real Phi = x * (x * x - z);
    const Real gs = g[n + 1] + g[n];
    const Real diag = g[n + 2] * g[n + 1] + g[n] * g[n - 1] + gs * gs -
                      (z + alpha + 2) * gs + z * (1 + alpha);
    const Real sub = (2 * (g[n - 2] + g[n - 1] + g[n] + g[n + 1]) -
                      (2 * z + 2 * alpha + n + 2)) *
                     g[n] * g[n - 1];
    const Real sub2 = 2 * g[n] * g[n - 1] * g[n - 2] * g[n - 3];
    const PolyValue s = eval_sym(t, n, x);
    const Real lhs = Phi * s.d1;
    std::vector<Real> terms{Real(n) * eval_sym(t, n + 2, x).v, diag * s.v,
                            sub * eval_sym(t, n - 2, x).v,
                            sub2 * eval_sym(t, n - 4, x).v};
    return normalized(lhs, terms);
}

Real lowering_residual(const RecurrenceTable& t, unsigned n, const Real& x_in) {
    if (n + 1 > t.max_n())
        throw std::invalid_argument("lowering_residual: table too short");
    ScopedPrecision guard(t.ctx);
    const Real x = at_working_precision(x_in);
    const Real& z = t.params.z;
    const Real ae = effective_alpha(t.params);
    const Real phi = x * x - z * x;
    const PolyValue p1 = eval_poly(t, n + 1, x);
    const Real lhs = phi * p1.d1;
    std::vector<Real> terms{delta_coef(t, n, x) * p1.v,
                            c_coef(t, n, x, ae) * eval_poly(t, n, x).v};
    return normalized(lhs, terms);
}

Real holonomic_residual(const RecurrenceTable& t, unsigned n, const Real& x_in) {
    if (n < 1 || n + 1 > t.max_n())
        throw std::invalid_argument("holonomic_residual: need 1 <= n <= max_n-1");
    ScopedPrecision guard(t.ctx);
    const Real x = at_working_precision(x_in);
    const Real& z = t.params.z;
    const Real ae = effective_alpha(t.params);
    const Real phi = x * x - z * x;
    const Real Cn = c_coef(t, n, x, ae);
    const Real Cm = c_coef(t, n - 1, x, ae);
    const Real dn = delta_coef(t, n, x);
    const Real dm = delta_coef(t, n - 1, x);
    const Real E = dm + (Cm / t.a[n]) * (x - t.b[n]);
    const PolyValue p = eval_poly(t, n + 1, x);
    const std::vector<Real> terms{
        Cn * phi * phi * p.d2,
        phi * ((2 * x - z) * Cn - t.a[n + 1] * phi - dn * Cn - Cn * E) * p.d1,
        (E * dn * Cn + (Cm / t.a[n]) * Cn * Cn - Real(n + 1) * phi * Cn +
         t.a[n + 1] * phi * dn) *
            p.v};
    return normalized(Real(0), terms);
}

Real lowering_sym_residual(const SymmetricTable& t, unsigned n, const Real& x_in) {
    if (n < 2 || n + 2 > t.max_gamma())
        throw std::invalid_argument("lowering_sym_residual: need 2 <= n <= max_gamma-2");
    ScopedPrecision guard(t.ctx);
    const Real x = at_working_precision(x_in);
    const Real& z = t.params.z;
    const Real& alpha = t.params.alpha;
    const std::vector<Real>& g = t.gamma;
    const Real Phi = x * (x * x - z);
    const Real gs = g[n + 1] + g[n];
    const Real varphi = Real(n) * x * x + g[n + 2] * g[n + 1] - g[n] * g[n - 1] +
                        gs * gs - (z + alpha + n + 2) * gs + z * (1 + alpha);
    const Real Y = 2 * g[n] * g[n - 1] * (x * x + gs - (z + alpha + n + 1));
    const PolyValue s = eval_sym(t, n, x);
    const Real lhs = Phi * s.d1;
    std::vector<Real> terms{varphi * s.v, Y * eval_sym(t, n - 2, x).v};
    return normalized(lhs, terms);
}

std::vector<Real> probe_points(const Real& upper_in, unsigned n_random,
                               std::uint64_t seed) {
    const Real upper = at_working_precision(upper_in);
    std::vector<Real> pts{upper * Real("0.13"), upper / 2, upper * Real("0.87")};
    std::uint64_t state = seed;
    for (unsigned i = 0; i < n_random; ++i) {
        // SplitMix64
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t r = state;
        r = (r ^ (r >> 30)) * 0xBF58476D1CE4E5B9ull;
        r = (r ^ (r >> 27)) * 0x94D049BB133111EBull;
        r ^= r >> 31;
        const Real frac = Real("0.05") + Real("0.9") * (Real(r) / Real("18446744073709551616"));
        pts.push_back(upper * frac);
    }
    return pts;
}

} // namespace trunclag
