#include "trunclag/moments.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace trunclag {

void FunctionalParams::validate() const {
    if (!(alpha > -1))
        throw std::invalid_argument("FunctionalParams: alpha must be > -1");
    if (!(z > 0))
        throw std::invalid_argument("FunctionalParams: z must be > 0");
}

Real gamma_fn(const Real& x, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    Real out;
    mpfr_gamma(out.backend().data(), x.backend().data(), MPFR_RNDN);
    return out;
}

namespace {

// Extra mantissa bits absorbing the alternating-series cancellation,
// which peaks near k ~ z with terms of size ~ e^z.
unsigned series_guard_bits(const Real& z) {
    const double zd = static_cast<double>(z);
    return 64 + static_cast<unsigned>(std::ceil(1.5 * zd));
}

Real moment_series_raw(unsigned m, const Real& alpha_in, const Real& z_in,
                       const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx.mantissa_bits + series_guard_bits(z_in));
    const Real z = at_working_precision(z_in);
    const Real a = Real(m) + at_working_precision(alpha_in) + 1;
    Real term(1);     // z^k / k! factor, k = 0
    Real sum = 1 / a; // k = 0 contribution
    const Real stop = ctx.eps / 4;
    for (unsigned k = 1;; ++k) {
        if (k > 100000)
            throw std::runtime_error("moment_series: no convergence after 1e5 terms (z too "
                                     "large for the chosen precision)");
        term *= z / k;
        const Real contrib = term / (a + k);
        sum += (k % 2 == 0) ? contrib : -contrib;
        if (k >= 8 && term <= stop * abs(sum) * (a + k)) break;
    }
    return pow(z, a) * sum;
}

} // namespace

Real moment_series(unsigned m, const FunctionalParams& params, const PrecisionContext& ctx) {
    params.validate();
    ScopedPrecision guard(ctx);
    const unsigned shift = (params.variant == Variant::XL) ? 1 : 0;
    Real v = moment_series_raw(m + shift, params.alpha, params.z, ctx);
    return at_working_precision(v); // round away the guard bits
}

namespace {

// The forward recurrence carries a dominant solution growing like m!/z^m,
// so roundoff in ell_0, ell_1 is amplified by that factor by entry m.
unsigned recurrence_guard_bits(unsigned N, const Real& z) {
    const double zd = static_cast<double>(z);
    double bits = 8;
    for (unsigned m = 2; m <= N; ++m)
        bits += std::log2((std::max)(static_cast<double>(m) / zd, 1.0));
    return static_cast<unsigned>(std::ceil(bits));
}

MomentTable moment_table_attempt(unsigned N, const FunctionalParams& params_in,
                                 const PrecisionContext& ctx, unsigned* bad_m) {
    // run seeds and recurrence with headroom for the amplification, then
    // round the accepted entries back to the requested width
    const PrecisionContext work =
        make_context(ctx.mantissa_bits + recurrence_guard_bits(N, params_in.z));
    ScopedPrecision guard(work);
    const FunctionalParams params = params_in.rescoped();
    const Real& z = params.z;
    // XL moments are the L moments shifted by one index; the recurrence
    // index below is shifted to match.
    MomentTable table{params, {}, ctx};
    table.values.resize(N + 1);
    table.values[0] = moment_series(0, params, work);
    if (N >= 1) table.values[1] = moment_series(1, params, work);
    const unsigned shift = (params.variant == Variant::XL) ? 1 : 0;
    for (unsigned m = 2; m <= N; ++m) {
        const Real n = Real(m - 2 + shift); // recurrence index of the base functional
        table.values[m] = (n + z + 2 + params.alpha) * table.values[m - 1] -
                          z * (n + params.alpha + 1) * table.values[m - 2];
        const Real direct = moment_series(m, params, ctx);
        if (abs(table.values[m] - direct) > ctx.residual_tol * abs(direct)) {
            *bad_m = m;
            return table;
        }
    }
    *bad_m = N + 1; // sentinel: all good
    ScopedPrecision round_guard(ctx);
    table.params = params.rescoped();
    for (Real& v : table.values) v = at_working_precision(v);
    return table;
}

} // namespace

MomentTable moment_table(unsigned N, const FunctionalParams& params, const PrecisionContext& ctx) {
    if (N < 1) throw std::invalid_argument("moment_table: N must be >= 1");
    params.validate();
    unsigned bad_m = 0;
    MomentTable t = moment_table_attempt(N, params, ctx, &bad_m);
    if (bad_m <= N) {
        // one automatic precision doubling
        PrecisionContext ctx2 = make_context(2 * ctx.mantissa_bits);
        t = moment_table_attempt(N, params, ctx2, &bad_m);
        if (bad_m <= N)
            throw std::runtime_error(
                "moment_table: series/recurrence cross-check failed at m = " +
                std::to_string(bad_m) + " even after doubling precision");
        t.ctx = ctx2;
    }
    return t;
}

Real theta_moment_residual(unsigned m, const FunctionalParams& params_in,
                           const PrecisionContext& ctx) {
    params_in.validate();
    ScopedPrecision guard(ctx);
    const FunctionalParams params = params_in.rescoped();
    auto ell = [&](unsigned idx, const Real& z) {
        FunctionalParams p = params;
        p.z = z;
        return moment_series(idx, p, ctx);
    };
    const Real d = [&] {
        auto f = [&](const Real& z) { return ell(m, z); };
        const Real h = params.z * ctx.diff_step_scale;
        const Real fm2 = f(params.z - 2 * h), fm1 = f(params.z - h);
        const Real fp1 = f(params.z + h), fp2 = f(params.z + 2 * h);
        return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
    }();
    const Real alpha_eff = (params.variant == Variant::XL) ? params.alpha + 1 : params.alpha;
    return abs(params.z * d - (Real(m) + alpha_eff + 1) * ell(m, params.z) +
               ell(m + 1, params.z));
}

Real stieltjes_ode_residual(const Real& t_in, unsigned N, const FunctionalParams& params_in,
                            const PrecisionContext& ctx) {
    params_in.validate();
    if (N < 4) throw std::invalid_argument("stieltjes_ode_residual: N must be >= 4");
    ScopedPrecision guard(ctx);
    const FunctionalParams params = params_in.rescoped();
    const Real t = at_working_precision(t_in);
    MomentTable mt = moment_table(N + 1, params, ctx);
    Real S(0), dS(0);
    Real tp = t; // t^{n+1}
    for (unsigned n = 0; n <= N; ++n) {
        S += mt[n] / tp;
        dS -= (n + 1) * mt[n] / (tp * t);
        tp *= t;
    }
    const Real& z = params.z;
    const Real& alpha = params.alpha;
    const Real lhs = (t * t - z * t) * dS + (t * t - (z + alpha) * t + z * alpha) * S;
    const Real rhs = (t - z - alpha - 1) * mt[0] + mt[1];
    return abs(lhs - rhs);
}

} // namespace trunclag
