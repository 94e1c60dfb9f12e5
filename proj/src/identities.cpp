#include "trunclag/identities.hpp"

#include <algorithm>
#include <stdexcept>

namespace trunclag {

namespace {

// |sum of terms| / max |term|: scale-free residual of "sum = 0".
Real norm_residual(std::initializer_list<Real> terms) {
    Real sum(0), scale(0);
    for (const Real& t : terms) {
        sum += t;
        scale = (std::max)(scale, abs(t));
    }
    if (scale == 0) return abs(sum);
    return abs(sum) / scale;
}

ResidualReport report(std::string name, unsigned n, const FunctionalParams& p,
                      Real residual, Real tol) {
    ResidualReport r;
    r.identity_name = std::move(name);
    r.n = n;
    r.params = p;
    r.residual = std::move(residual);
    r.tolerance_used = std::move(tol);
    r.pass = (r.residual <= r.tolerance_used);
    return r;
}

} // namespace

TableSet build_tables(unsigned N, const Real& alpha_in, const Real& z_in,
                      const PrecisionContext& ctx, bool discretized) {
    ScopedPrecision scope(ctx);
    const Real alpha = at_working_precision(alpha_in);
    const Real z = at_working_precision(z_in);
    TableSet out;
    out.params = FunctionalParams{alpha, z, Variant::L};
    out.ctx = ctx;
    FunctionalParams companion{alpha, z, Variant::XL};
    if (discretized) {
        out.L = recurrence_discretized(N, out.params, ctx);
        out.XL = recurrence_discretized(N, companion, ctx);
    } else {
        out.L = recurrence_from_moments(N, out.params, ctx);
        out.XL = recurrence_from_moments(N, companion, ctx);
    }
    out.S = symmetrize(out.L, &out.XL);
    return out;
}

Real ZStencil::d1(const std::function<Real(const RecurrenceTable&)>& f) const {
    ScopedPrecision guard(ctx);
    return (f(t[0]) - 8 * f(t[1]) + 8 * f(t[3]) - f(t[4])) / (12 * h);
}

Real ZStencil::d2(const std::function<Real(const RecurrenceTable&)>& f) const {
    ScopedPrecision guard(ctx);
    return (-f(t[0]) + 16 * f(t[1]) - 30 * f(t[2]) + 16 * f(t[3]) - f(t[4])) /
           (12 * h * h);
}

Real ZStencil::fd_tolerance() const {
    ScopedPrecision guard(ctx);
    const Real step = params.z * ctx.diff_step_scale;
    const Real trunc = step * step * step * step;
    // second-derivative stencils also leave an eps/h^2 roundoff floor,
    // and the sigma forms carry large sixth-derivative coefficients
    const Real floor = pow(ctx.eps, Real(3) / 5);
    return 1000 * (trunc + floor);
}

ZStencil make_stencil(unsigned N, const FunctionalParams& params_in,
                      const PrecisionContext& ctx) {
    params_in.validate();
    ScopedPrecision guard(ctx);
    const FunctionalParams params = params_in.rescoped();
    ZStencil st;
    st.params = params;
    st.ctx = ctx;
    st.h = params.z * ctx.diff_step_scale;
    st.t.reserve(5);
    for (int j = -2; j <= 2; ++j) {
        FunctionalParams p = params;
        p.z = params.z + j * st.h;
        st.t.push_back(recurrence_from_moments(N, p, ctx));
    }
    return st;
}

Real sigma_of(const RecurrenceTable& t, unsigned n) {
    ScopedPrecision guard(t.ctx);
    Real s(0);
    for (unsigned k = 0; k < n; ++k) s += t.b[k];
    return s;
}

Real R_of(const RecurrenceTable& t, unsigned n) {
    ScopedPrecision guard(t.ctx);
    return (t.b[n] - (2 * Real(n) + t.params.alpha + 1)) / t.params.z;
}

Real r_of(const RecurrenceTable& t, unsigned n) {
    ScopedPrecision guard(t.ctx);
    return (t.a[n] - sigma_of(t, n)) / t.params.z;
}

std::vector<ResidualReport> lf_residuals(unsigned n, const TableSet& t) {
    if (n < 1 || n + 1 > t.L.max_n() || n + 1 > t.XL.max_n())
        throw std::invalid_argument("lf_residuals: need 1 <= n <= N-1");
    ScopedPrecision guard(t.ctx);
    const FunctionalParams& p = t.params;
    const Real& z = p.z;
    const Real& al = p.alpha;
    const Real tol = t.ctx.residual_tol;
    const std::vector<Real>&a = t.L.a, &b = t.L.b, &c = t.XL.a, &d = t.XL.b;
    std::vector<ResidualReport> out;

    out.push_back(report(
        "laguerre-freud-a", n, p,
        norm_residual({a[n + 1], -a[n - 1], b[n] * b[n], -b[n - 1] * b[n - 1],
                       (z + al + 2 * n) * (b[n - 1] - b[n]),
                       -2 * (b[n - 1] + b[n]), 2 * z}),
        tol));

    out.push_back(report(
        "laguerre-freud-b", n, p,
        norm_residual({(2 * n - b[n] + z + al + 2) * (a[n + 1] - a[n]),
                       (1 - b[n + 1]) * a[n + 1], (3 + b[n - 1]) * a[n],
                       b[n] * b[n], -z * b[n]}),
        tol));

    auto omega = [&](unsigned m) { return b[m] - al / 2 - z / 2 - m; };
    const Real wm = omega(n - 1), w0 = omega(n), wp = omega(n + 1);
    out.push_back(report("laguerre-freud-omega-a", n, p,
                         norm_residual({a[n + 1], -a[n - 1],
                                        (w0 + wm - 1) * (w0 - wm - 1),
                                        -2 * (al + 2 * n)}),
                         tol));
    out.push_back(report(
        "laguerre-freud-omega-b", n, p,
        norm_residual({a[n] * (w0 + wm), -a[n + 1] * (w0 + wp - 2),
                       (w0 + al / 2 + n) * (w0 + al / 2 + n), -z * z / 4}),
        tol));

    out.push_back(report(
        "laguerre-freud-companion-a", n, p,
        norm_residual({c[n + 1], -c[n - 1], d[n] * d[n], -d[n - 1] * d[n - 1],
                       (z + al + 1 + 2 * n) * (d[n - 1] - d[n]),
                       -2 * (d[n - 1] + d[n]), 2 * z}),
        tol));

    out.push_back(report(
        "laguerre-freud-companion-b", n, p,
        norm_residual({(2 * n - d[n] + z + al + 3) * (c[n + 1] - c[n]),
                       (1 - d[n + 1]) * c[n + 1], (3 + d[n - 1]) * c[n],
                       d[n] * d[n], -z * d[n]}),
        tol));

    {
        const Real lhs =
            (al - b[n] + 2 * n + 1) * (al - b[n - 1] + 2 * n - 1) * a[n];
        const Real inner = a[n] - a[n + 1] -
                           b[n] * (b[n] - (z + al + 2 * (n + 1))) -
                           (1 + al + 2 * n) * z;
        out.push_back(report("nonlinear-square", n, p,
                             norm_residual({lhs, -inner * inner / 4}), tol));
    }

    const Real sn = sigma_of(t.L, n);
    out.push_back(report(
        "factorized-lf-0", n, p,
        norm_residual({(b[n] - z) * b[n],
                       (2 * n + 3 + al + z - b[n] - b[n + 1]) * a[n + 1],
                       -(2 * n - 1 + al + z - b[n - 1] - b[n]) * a[n]}),
        tol));
    out.push_back(report(
        "factorized-lf-1", n, p,
        norm_residual({a[n] * (al + 2 * n - 1 - b[n - 1]) * (al + 1 + 2 * n - b[n]),
                       -(a[n] - sn) * (a[n] - sn)}),
        tol));
    out.push_back(report(
        "factorized-lf-2", n, p,
        norm_residual({(al + 1 + 2 * n) * z, a[n], a[n + 1],
                       -(al + 2 + 2 * n + z - b[n]) * b[n], -2 * sn}),
        tol));
    out.push_back(report(
        "factorized-lf-3", n, p,
        norm_residual({Real(n) * (al + n) * z,
                       -a[n] * (al + 2 * n + z - b[n - 1] - b[n]),
                       -(al + 2 * n) * sn}),
        tol));
    return out;
}

std::vector<ResidualReport> symmetric_lf_residuals(unsigned n, const SymmetricTable& s) {
    if (n < 2 || n + 3 > s.max_gamma())
        throw std::invalid_argument(
            "symmetric_lf_residuals: need 2 <= n <= max_gamma-3");
    ScopedPrecision guard(s.ctx);
    const FunctionalParams& p = s.params;
    const Real& z = p.z;
    const Real& al = p.alpha;
    const Real tol = s.ctx.residual_tol;
    const std::vector<Real>& g = s.gamma;
    std::vector<ResidualReport> out;

    out.push_back(report(
        "symmetric-laguerre-freud", n, p,
        norm_residual({g[n + 1] * (g[n + 2] + g[n + 1] + g[n] - (al + z + n + 2)),
                       -g[n - 1] * (g[n - 2] + g[n - 1] + g[n] - (al + z + n - 1)),
                       -g[n], z}),
        tol));

    {
        const Real sp = g[n + 1] + g[n], sm = g[n - 1] + g[n - 2];
        if (n >= 3)
            out.push_back(report(
                "symmetric-lf-sum", n, p,
                norm_residual({g[n + 2] * g[n + 1], sp * sp, -(z + al + n + 2) * sp,
                               -g[n - 2] * g[n - 3], -sm * sm,
                               (z + al + n - 2) * sm, 2 * z}),
                tol));
        // the product form as printed carries a sign slip on the second
        // term and an off-by-two in its constant; this is the version
        // that actually vanishes on the tables
        const Real up = g[n] + g[n + 1] + g[n + 2] + g[n + 3];
        const Real dn = g[n - 2] + g[n - 1] + g[n] + g[n + 1];
        out.push_back(report(
            "symmetric-lf-product", n, p,
            norm_residual({(n + z + al + 3 - up) * g[n + 2] * g[n + 1],
                           -(n + z + al - 1 - dn) * g[n] * g[n - 1],
                           sp * (sp - z)}),
            tol));
    }

    if (n % 2 == 0) {
        const unsigned k = n / 2;
        out.push_back(report(
            "symmetric-nonlinear-square", n, p,
            norm_residual({g[n] * ((al + n + 1) - (g[n + 1] + g[n])) *
                               ((al + n) - (g[n] + g[n - 1])),
                           -z * (Real(k) - g[n]) * (Real(k) - g[n])}),
            tol));
    } else {
        const unsigned k = (n - 1) / 2;
        out.push_back(report(
            "symmetric-nonlinear-square", n, p,
            norm_residual({g[n] * ((al + n + 1) - (g[n + 1] + g[n])) *
                               ((al + n) - (g[n] + g[n - 1])),
                           -z * (Real(k) + al + 1 - g[n]) *
                               (Real(k) + al + 1 - g[n])}),
            tol));
    }

    auto gg = [&](unsigned m) { return g[m] - al / 2 - Real(m) / 2 - Real(1) / 4; };
    const Real q = Real(1) / 4;
    {
        const Real u0 = gg(n) + gg(n + 1), u1 = 2 * gg(n) + al + n + Real(1) / 2;
        const Real v0 = gg(n - 2) + gg(n - 1),
                   v1 = 2 * gg(n - 1) + al + n - Real(1) / 2;
        // the printed right-hand side lacks the 1/4 from squaring
        const Real rhs = (u0 - z) * u1 + (v0 - z) * v1 + 2 * z * (n + al);
        out.push_back(report("symmetric-g-square", n, p,
                             norm_residual({u0 * u1 * v0 * v1, -rhs * rhs / 4}),
                             tol));
    }
    {
        // the sign of g_n inside the square alternates with the parity of n
        const Real sgn = (n % 2 == 0) ? 1 : -1;
        const Real inner = al / 2 + q + sgn * gg(n);
        out.push_back(report(
            "symmetric-g-painleve", n, p,
            norm_residual({(al / 2 + Real(n) / 2 + q + gg(n)) *
                               (gg(n) + gg(n + 1)) * (gg(n) + gg(n - 1)),
                           -z * inner * inner}),
            tol));
    }
    return out;
}

std::vector<ResidualReport> ladder_rr_residuals(unsigned n, const ZStencil& st) {
    const RecurrenceTable& t = st.center();
    if (n + 1 > t.max_n())
        throw std::invalid_argument("ladder_rr_residuals: need n <= N-1");
    ScopedPrecision guard(st.ctx);
    const FunctionalParams& p = st.params;
    const Real& z = p.z;
    const Real& al = p.alpha;
    const Real tol = st.ctx.residual_tol;
    const Real fdtol = st.fd_tolerance();
    std::vector<ResidualReport> out;

    const Real Rn = R_of(t, n), rn = r_of(t, n), rp = r_of(t, n + 1);

    if (n >= 1) {
        const Real Rm = R_of(t, n - 1);
        out.push_back(report("ratio-square", n, p,
                             norm_residual({rn * rn, -t.a[n] * Rn * Rm}), tol));
        out.push_back(report(
            "ratio-shift-square", n, p,
            norm_residual({(rn + n) * (rn + n + al),
                           -t.a[n] * (Rn - 1) * (Rm - 1)}),
            tol));
        out.push_back(report(
            "a-from-ratios", n, p,
            norm_residual({t.a[n], -rn * rn / Rn,
                           (rn + n) * (rn + n + al) / (Rn - 1)}),
            tol));
    }
    out.push_back(report(
        "ratio-sum", n, p,
        norm_residual({rp, rn, (2 * n + 1 + al - z + z * Rn) * Rn}), tol));

    // first-order ODE pair
    out.push_back(report(
        "ratio-ode-R", n, p,
        norm_residual({z * st.d1([&](const RecurrenceTable& u) { return R_of(u, n); }),
                       -2 * rn, -(2 * n + al - z + z * Rn) * Rn}),
        fdtol));
    if (n >= 1)
        out.push_back(report(
            "ratio-ode-r", n, p,
            norm_residual(
                {z * st.d1([&](const RecurrenceTable& u) { return r_of(u, n); }),
                 -Real(n) * (n + al), -(2 * n + al) * rn, -rn * rn / Rn,
                 -(n + rn) * (n + al + rn) / (Rn - 1)}),
            fdtol));

    // Toda pair in (R, r)
    if (n >= 1)
        out.push_back(report(
            "toda-ratio-a", n, p,
            norm_residual(
                {st.d1([&](const RecurrenceTable& u) { return log(u.a[n]); }),
                 R_of(t, n) - R_of(t, n - 1)}),
            fdtol));
    out.push_back(report(
        "toda-ratio-b", n, p,
        norm_residual({st.d1([&](const RecurrenceTable& u) { return u.b[n]; }),
                       rp - rn}),
        fdtol));
    return out;
}

std::vector<ResidualReport> sigma_ode_residuals(unsigned n, const ZStencil& st) {
    ScopedPrecision guard(st.ctx);
    const FunctionalParams& p = st.params;
    const Real& z = p.z;
    const Real& al = p.alpha;
    const Real fdtol = st.fd_tolerance();
    std::vector<ResidualReport> out;

    auto sig = [&](const RecurrenceTable& u) { return sigma_of(u, n); };
    const Real y = sig(st.center());
    const Real y1 = st.d1(sig);
    const Real y2 = st.d2(sig);

    {
        const Real bracket = Real(n) * (n + al) - y + (2 * y1 + z - 2 * n - al) * y1;
        out.push_back(report(
            "sigma-ode", n, p,
            norm_residual({z * y2 * z * y2,
                           4 * y1 * y1 * (n - y1) * (n + al - y1),
                           -bracket * bracket}),
            fdtol));
    }
    {
        const Real Y = -y + Real(n) * (n + al) / 2 - al * al / 8 + (2 * n + al) * z / 4;
        const Real Y1 = -y1 + Real(2 * n + al) / 4;
        const Real Y2 = -y2;
        const Real v1 = -Real(2 * n + al) / 4;
        const Real v3 = Real(2 * n - al) / 4;
        const Real v4 = (2 * n + 3 * al) / 4;
        const Real inner = Y + Y1 * (2 * Y1 - z);
        out.push_back(report(
            "sigma-ode-quartic", n, p,
            norm_residual({z * Y2 * z * Y2, -inner * inner,
                           4 * (Y1 + v1) * (Y1 + v1) * (Y1 + v3) * (Y1 + v4)}),
            fdtol));
    }
    return out;
}

std::vector<ResidualReport> toda_residuals(unsigned n, const ZStencil& st) {
    const RecurrenceTable& t = st.center();
    if (n + 1 > t.max_n())
        throw std::invalid_argument("toda_residuals: need n <= N-1");
    ScopedPrecision guard(st.ctx);
    const FunctionalParams& p = st.params;
    const Real& z = p.z;
    const Real fdtol = st.fd_tolerance();
    std::vector<ResidualReport> out;

    if (n >= 1)
        out.push_back(report(
            "toda-a", n, p,
            norm_residual(
                {z * st.d1([&](const RecurrenceTable& u) { return log(u.a[n]); }),
                 -2, t.b[n] - t.b[n - 1]}),
            fdtol));
    out.push_back(report(
        "toda-b", n, p,
        norm_residual({z * st.d1([&](const RecurrenceTable& u) { return u.b[n]; }),
                       -t.b[n], t.a[n + 1] - t.a[n]}),
        fdtol));
    if (n >= 1) {
        auto sig = [&](const RecurrenceTable& u) { return sigma_of(u, n); };
        const Real y = sig(t);
        const Real y1 = st.d1(sig);
        const Real y2 = st.d2(sig);
        const Real lap = sigma_of(t, n + 1) - 2 * y + sigma_of(t, n - 1);
        out.push_back(report("sigma-second-order", n, p,
                             norm_residual({z * z * y2, -(z * y1 - y) * (2 - lap)}),
                             fdtol));
    }
    return out;
}

std::vector<ResidualReport> hankel_sigma_residuals(unsigned n, const ZStencil& st) {
    if (n < 1)
        throw std::invalid_argument("hankel_sigma_residuals: need n >= 1");
    const RecurrenceTable& t = st.center();
    ScopedPrecision guard(st.ctx);
    const FunctionalParams& p = st.params;
    const Real& z = p.z;
    const Real& al = p.alpha;
    std::vector<ResidualReport> out;

    auto logH = [&](const RecurrenceTable& u) {
        Real s(0);
        for (unsigned k = 0; k < n; ++k) s += log(u.h[k]);
        return s;
    };
    out.push_back(report("hankel-sigma", n, p,
                         norm_residual({sigma_of(t, n), -Real(n) * (n + al),
                                        z * st.d1(logH)}),
                         st.fd_tolerance()));

    if (z <= Real("0.05")) {
        // small-z product formula, with the prefactor kept through order z^2
        const Real m = Real(n) + al;
        const Real tw = Real(n) + m; // 2n + alpha
        const Real gn = 1 - Real(n) * m / tw * z +
                        Real(n) * n * m * m / ((tw - 1) * (tw + 1)) * z * z / 2;
        Real logref = log(gn) + Real(n) * log(m) + Real(n) * m * log(z);
        for (unsigned j = 0; j < n; ++j) {
            Real logfact(0);
            for (unsigned i = 2; i <= j; ++i) logfact += log(Real(i));
            logref += 2 * logfact - Real(j + 1) * log(Real(j) + al + 1) -
                      Real(n - j) * log(Real(n) + j + al);
        }
        const Real rel = abs(logH(t) - logref);
        out.push_back(report("hankel-product", n, p, rel, 1000 * z * z * z));
    }
    return out;
}

} // namespace trunclag
