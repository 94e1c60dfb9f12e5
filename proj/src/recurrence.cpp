#include "trunclag/recurrence.hpp"

#include "trunclag/numerics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace trunclag {

namespace {

// One Gram-Schmidt pass at a fixed precision. Returns false on an
// invariant violation (lost positivity means the precision ran out).
bool moments_attempt(unsigned N, const FunctionalParams& params_in,
                     const PrecisionContext& ctx, RecurrenceTable& out) {
    ScopedPrecision guard(ctx);
    const FunctionalParams params = params_in.rescoped();
    const MomentTable mom = moment_table(2 * N + 1, params, ctx);
    out = RecurrenceTable{params, {}, {}, {}, {}, ctx};
    out.a.assign(N + 1, Real(0));
    out.b.assign(N + 1, Real(0));
    out.h.assign(N + 1, Real(0));
    out.sigma.assign(N + 1, Real(0));

    std::vector<Real> prev, cur{Real(1)};
    Real hprev(0);
    for (unsigned n = 0; n <= N; ++n) {
        std::vector<Real> sq(2 * n + 1, Real(0));
        for (unsigned i = 0; i <= n; ++i)
            for (unsigned j = 0; j <= n; ++j) sq[i + j] += cur[i] * cur[j];
        Real hn(0), tn(0);
        for (unsigned i = 0; i <= 2 * n; ++i) {
            hn += sq[i] * mom[i];
            tn += sq[i] * mom[i + 1];
        }
        if (!(hn > 0)) return false;
        const Real bn = tn / hn;
        if (!(bn > 0 && bn < params.z)) return false;
        if (n > 0) {
            out.a[n] = hn / hprev;
            if (!(out.a[n] > 0)) return false;
            out.sigma[n] = cur[n - 1];
        }
        out.b[n] = bn;
        out.h[n] = hn;

        std::vector<Real> next(n + 2, Real(0));
        for (unsigned i = 0; i <= n; ++i) {
            next[i + 1] += cur[i];
            next[i] -= bn * cur[i];
        }
        for (unsigned i = 0; i < prev.size(); ++i) next[i] -= out.a[n] * prev[i];
        prev = std::move(cur);
        cur = std::move(next);
        hprev = hn;
    }
    return true;
}

Real table_distance(const RecurrenceTable& u, const RecurrenceTable& v) {
    Real worst(0);
    for (unsigned n = 0; n <= u.max_n(); ++n) {
        worst = (std::max)(worst, abs(u.b[n] - v.b[n]) / abs(v.b[n]));
        if (n > 0) worst = (std::max)(worst, abs(u.a[n] - v.a[n]) / abs(v.a[n]));
    }
    return worst;
}

RecurrenceTable rounded_to(const RecurrenceTable& t, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    RecurrenceTable out{t.params.rescoped(), t.a, t.b, t.h, t.sigma, ctx};
    for (auto* v : {&out.a, &out.b, &out.h, &out.sigma})
        for (Real& x : *v) x = at_working_precision(x);
    return out;
}

} // namespace

RecurrenceTable recurrence_from_moments(unsigned N, const FunctionalParams& params,
                                        const PrecisionContext& ctx) {
    params.validate();
    // The raw-moment Gram-Schmidt loses up to ~20 mantissa bits per degree
    // (worst near small z), so run it with headroom and accept only once two
    // passes at different headroom agree to the requested tolerance.
    unsigned guard_bits = 64 + 20 * N;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const PrecisionContext lo = make_context(ctx.mantissa_bits + guard_bits);
        const PrecisionContext hi = make_context(ctx.mantissa_bits + 2 * guard_bits);
        RecurrenceTable coarse, fine;
        try {
            if (moments_attempt(N, params, lo, coarse) &&
                moments_attempt(N, params, hi, fine) &&
                table_distance(coarse, fine) <= ctx.residual_tol / 16)
                return rounded_to(fine, ctx);
        } catch (const std::runtime_error&) {
            // a failed moment cross-check is just another reason to escalate
        }
        guard_bits *= 2;
    }
    throw std::runtime_error("recurrence_from_moments: Gram-Schmidt did not stabilize for "
                             "degree " + std::to_string(N) + " at " +
                             std::to_string(ctx.mantissa_bits) + " bits");
}

namespace {

struct QuadRule {
    std::vector<Real> t; // nodes in (0, z)
    std::vector<Real> w; // weights, residual factor e^{-t} folded in
};

// Gauss rule for integrals over (0,z) against t^a e^{-t}: a Gauss rule
// for the weight (1+x)^a on (-1,1) (closed-form Jacobi recurrence),
// mapped by t = z(1+x)/2 with e^{-t} attached to the weights.
QuadRule gauss_rule_for(unsigned M, const Real& a_in, const Real& z_in,
                        const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    const Real a = at_working_precision(a_in);
    const Real z = at_working_precision(z_in);
    auto bJ = [&](unsigned n) -> Real {
        if (n == 0) return a / (a + 2);
        return a * a / ((2 * n + a) * (2 * n + a + 2));
    };
    auto aJ = [&](unsigned n) -> Real {
        const Real s = 2 * n + a;
        return 4 * n * n * (n + a) * (n + a) / (s * s * (s + 1) * (s - 1));
    };

    // locate the nodes with a cheap low-precision eigensolve, then polish
    // each by Newton on P_M at full width: the eigensolve cost grows fast
    // with the mantissa, while Newton doubles the correct bits per step
    std::vector<Real> nodes;
    {
        const PrecisionContext seed_ctx =
            make_context((std::min)(ctx.mantissa_bits, 128u));
        ScopedPrecision seed_guard(seed_ctx);
        const Real a_lo = at_working_precision(a);
        std::vector<Real> diag(M), offd(M - 1);
        for (unsigned j = 0; j < M; ++j)
            diag[j] = (j == 0) ? Real(a_lo / (a_lo + 2))
                               : Real(a_lo * a_lo / ((2 * j + a_lo) * (2 * j + a_lo + 2)));
        for (unsigned j = 1; j < M; ++j) {
            const Real s = 2 * j + a_lo;
            offd[j - 1] =
                sqrt(4 * j * j * (j + a_lo) * (j + a_lo) / (s * s * (s + 1) * (s - 1)));
        }
        nodes = tridiag_eigen(diag, offd, seed_ctx);
    }
    auto eval_PM = [&](const Real& x, Real* pM1_out) {
        Real pm(0), pc(1), dpm(0), dpc(0), pM1(1);
        for (unsigned n = 0; n < M; ++n) {
            if (n + 1 == M) pM1 = pc;
            const Real pn = (x - bJ(n)) * pc - (n ? aJ(n) : Real(0)) * pm;
            const Real dpn = pc + (x - bJ(n)) * dpc - (n ? aJ(n) : Real(0)) * dpm;
            pm = pc;
            pc = pn;
            dpm = dpc;
            dpc = dpn;
        }
        if (pM1_out) *pM1_out = pM1;
        return std::pair<Real, Real>{pc, dpc};
    };
    if (ctx.mantissa_bits > 128) {
        for (Real& x : nodes) {
            x = at_working_precision(x);
            for (int it = 0; it < 16; ++it) {
                const auto [p, dp] = eval_PM(x, nullptr);
                const Real dx = p / dp;
                x -= dx;
                if (abs(dx) <= ctx.eps * (1 + abs(x))) break;
            }
        }
    }

    Real hM1 = pow(Real(2), a + 1) / (a + 1); // mu_0
    for (unsigned n = 1; n < M; ++n) hM1 *= aJ(n);

    QuadRule rule;
    rule.t.resize(M);
    rule.w.resize(M);
    const Real scale = pow(z / 2, a + 1);
    for (unsigned k = 0; k < M; ++k) {
        const Real& x = nodes[k];
        Real pM1;
        const auto [pc, dpc] = eval_PM(x, &pM1);
        const Real wk = hM1 / (pM1 * dpc);
        const Real tk = z * (1 + x) / 2;
        rule.t[k] = tk;
        rule.w[k] = scale * wk * exp(-tk);
    }
    return rule;
}

bool stieltjes_attempt(unsigned N, const FunctionalParams& params_in, unsigned M,
                       const PrecisionContext& ctx, RecurrenceTable& out) {
    ScopedPrecision guard(ctx);
    const FunctionalParams params = params_in.rescoped();
    const Real a_eff =
        (params.variant == Variant::XL) ? params.alpha + 1 : params.alpha;
    const QuadRule rule = gauss_rule_for(M, a_eff, params.z, ctx);

    out = RecurrenceTable{params, {}, {}, {}, {}, ctx};
    out.a.assign(N + 1, Real(0));
    out.b.assign(N + 1, Real(0));
    out.h.assign(N + 1, Real(0));
    out.sigma.assign(N + 1, Real(0));

    std::vector<Real> prev(M, Real(0)), cur(M, Real(1));
    Real hprev(0), sig(0);
    for (unsigned n = 0; n <= N; ++n) {
        Real hn(0), tn(0);
        for (unsigned k = 0; k < M; ++k) {
            const Real p2 = rule.w[k] * cur[k] * cur[k];
            hn += p2;
            tn += rule.t[k] * p2;
        }
        if (!(hn > 0)) return false;
        const Real bn = tn / hn;
        if (!(bn > 0 && bn < params.z)) return false;
        if (n > 0) {
            out.a[n] = hn / hprev;
            if (!(out.a[n] > 0)) return false;
        }
        out.b[n] = bn;
        out.h[n] = hn;
        out.sigma[n] = sig;

        for (unsigned k = 0; k < M; ++k) {
            const Real next = (rule.t[k] - bn) * cur[k] - out.a[n] * prev[k];
            prev[k] = cur[k];
            cur[k] = next;
        }
        hprev = hn;
        sig -= bn;
    }
    return true;
}

} // namespace

RecurrenceTable recurrence_discretized(unsigned N, const FunctionalParams& params,
                                       const PrecisionContext& ctx) {
    params.validate();
    const unsigned M = 4 * N + 32;
    RecurrenceTable coarse, fine;
    if (!stieltjes_attempt(N, params, M, ctx, coarse) ||
        !stieltjes_attempt(N, params, 2 * M, ctx, fine))
        throw std::runtime_error("recurrence_discretized: positivity lost at " +
                                 std::to_string(ctx.mantissa_bits) + " bits");
    if (table_distance(coarse, fine) <= ctx.residual_tol) return fine;
    RecurrenceTable finer;
    if (stieltjes_attempt(N, params, 4 * M, ctx, finer) &&
        table_distance(fine, finer) <= ctx.residual_tol)
        return finer;
    throw std::runtime_error(
        "recurrence_discretized: node-count refinement did not converge");
}

SymmetricTable symmetrize(const RecurrenceTable& base, const RecurrenceTable* companion) {
    const unsigned N = base.max_n();
    SymmetricTable out{base.params, {}, {}, {}, base.ctx};
    ScopedPrecision guard(out.ctx);
    out.params = base.params.rescoped();
    out.gamma.assign(2 * N + 2, Real(0));
    out.gamma[1] = base.b[0];
    for (unsigned n = 1; n <= N; ++n) {
        out.gamma[2 * n] = base.a[n] / out.gamma[2 * n - 1];
        out.gamma[2 * n + 1] = base.b[n] - out.gamma[2 * n];
    }
    for (unsigned m = 1; m <= 2 * N + 1; ++m)
        if (!(out.gamma[m] > 0))
            throw std::runtime_error("symmetrize: gamma_" + std::to_string(m) +
                                     " is not positive; the split is not a chain sequence "
                                     "at this precision");

    out.c.assign(N + 1, Real(0));
    out.d.assign(N, Real(0));
    for (unsigned n = 1; n <= N; ++n)
        out.c[n] = out.gamma[2 * n + 1] * out.gamma[2 * n];
    for (unsigned n = 0; n < N; ++n)
        out.d[n] = out.gamma[2 * n + 2] + out.gamma[2 * n + 1];

    if (companion) {
        const Real tol =
            (std::max)(base.ctx.residual_tol, companion->ctx.residual_tol);
        const unsigned nd = std::min(N - 1, companion->max_n());
        const unsigned nc = std::min(N, companion->max_n());
        for (unsigned n = 0; n <= nd; ++n)
            if (abs(out.d[n] - companion->b[n]) > tol * abs(companion->b[n]))
                throw std::runtime_error("symmetrize: d_" + std::to_string(n) +
                                         " disagrees with the companion recurrence");
        for (unsigned n = 1; n <= nc; ++n)
            if (abs(out.c[n] - companion->a[n]) > tol * abs(companion->a[n]))
                throw std::runtime_error("symmetrize: c_" + std::to_string(n) +
                                         " disagrees with the companion recurrence");
    }
    return out;
}

} // namespace trunclag
