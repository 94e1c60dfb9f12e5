#include "trunclag/zeros.hpp"

#include "trunclag/numerics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace trunclag {

namespace {

// Minimal gap from points[k] to its neighbours, with the interval ends
// (lo, hi) standing in at the boundary.
Real local_spacing(const std::vector<Real>& pts, std::size_t k, const Real& lo,
                   const Real& hi) {
    const Real left = (k == 0) ? pts[k] - lo : pts[k] - pts[k - 1];
    const Real right = (k + 1 == pts.size()) ? hi - pts[k] : pts[k + 1] - pts[k];
    return (std::min)(left, right);
}

void verify_zero(const PolyValue& p, const Real& spacing, const Real& tol,
                 const char* what) {
    if (!(abs(p.v) <= tol * abs(p.d1) * spacing))
        throw std::runtime_error(std::string(what) +
                                 ": eigenvalue failed the evaluation check");
}

} // namespace

ZeroSet zeros(unsigned n, const RecurrenceTable& t) {
    if (n < 1 || n > t.max_n())
        throw std::invalid_argument("zeros: need 1 <= n <= N");
    ScopedPrecision guard(t.ctx);
    const Real& z = t.params.z;

    std::vector<Real> diag(t.b.begin(), t.b.begin() + n);
    std::vector<Real> offd(n >= 1 ? n - 1 : 0);
    for (unsigned i = 1; i < n; ++i) offd[i - 1] = sqrt(t.a[i]);
    std::vector<Real> pts = tridiag_eigen(diag, offd, t.ctx);

    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (!(pts[k] > 0 && pts[k] < z))
            throw std::runtime_error("zeros: eigenvalue escaped (0, z)");
        if (k > 0 && !(pts[k] > pts[k - 1]))
            throw std::runtime_error("zeros: eigenvalues not strictly increasing");
        verify_zero(eval_poly(t, n, pts[k]),
                    local_spacing(pts, k, Real(0), z), t.ctx.residual_tol, "zeros");
    }
    return ZeroSet{n, Family::P, std::move(pts), t.params};
}

ZeroSet zeros_sym(unsigned n, const TableSet& t) {
    if (n < 1)
        throw std::invalid_argument("zeros_sym: need n >= 1");
    ScopedPrecision guard(t.ctx);
    const Real sz = sqrt(t.params.z);

    std::vector<Real> pts;
    if (n % 2 == 0) {
        for (const Real& x : zeros(n / 2, t.L).points) {
            const Real r = sqrt(x);
            pts.push_back(-r);
            pts.push_back(r);
        }
    } else {
        pts.push_back(Real(0));
        if (n >= 3)
            for (const Real& x : zeros((n - 1) / 2, t.XL).points) {
                const Real r = sqrt(x);
                pts.push_back(-r);
                pts.push_back(r);
            }
    }
    std::sort(pts.begin(), pts.end());

    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (!(abs(pts[k]) < sz))
            throw std::runtime_error("zeros_sym: point escaped (-sqrt z, sqrt z)");
        if (pts[k] == 0) continue; // exact by the parity of the recurrence
        verify_zero(eval_sym(t.S, n, pts[k]),
                    local_spacing(pts, k, -sz, sz), t.ctx.residual_tol, "zeros_sym");
    }
    ZeroSet out{n, Family::S, std::move(pts), t.params};
    return out;
}

QuadratureRule gauss_rule(unsigned n, const RecurrenceTable& t,
                          const MomentTable& moments) {
    if (moments.max_index() + 1 < 2 * n)
        throw std::invalid_argument("gauss_rule: moment table too short for the "
                                    "exactness check");
    QuadratureRule rule{zeros(n, t), {}};
    ScopedPrecision guard(t.ctx);
    rule.weights.reserve(n);
    for (const Real& x : rule.nodes.points) {
        const Real w = t.h[n - 1] / (eval_poly(t, n - 1, x).v * eval_poly(t, n, x).d1);
        if (!(w > 0))
            throw std::runtime_error("gauss_rule: non-positive weight (precision "
                                     "exhausted)");
        rule.weights.push_back(w);
    }
    const Real tol = t.ctx.residual_tol * moments[0];
    for (unsigned d = 0; d + 1 <= 2 * n; ++d) {
        Real s(0);
        for (unsigned k = 0; k < n; ++k)
            s += rule.weights[k] * pow(rule.nodes.points[k], static_cast<int>(d));
        if (!(abs(s - moments[d]) <= tol))
            throw std::runtime_error("gauss_rule: exactness lost at degree " +
                                     std::to_string(d));
    }
    return rule;
}

namespace {

Real gradient_residual(const std::vector<Real>& pair_pts, const Real& x,
                       const std::vector<Real>& field_terms) {
    Real sum(0), scale(0);
    for (const Real& y : pair_pts) {
        if (y == x) continue;
        const Real term = 2 / (y - x);
        sum += term;
        scale = (std::max)(scale, abs(term));
    }
    for (const Real& term : field_terms) {
        sum += term;
        scale = (std::max)(scale, abs(term));
    }
    return abs(sum) / scale;
}

void guard_distance(const Real& x, const Real& pole, const Real& del,
                    const char* what) {
    if (!(abs(x - pole) > del * (1 + abs(x) + abs(pole))))
        throw std::runtime_error(std::string("electrostatic_residual: zero too close "
                                             "to the ") +
                                 what + " charge");
}

} // namespace

std::vector<Real> electrostatic_residual(unsigned n, Family family, const TableSet& t) {
    ScopedPrecision guard(t.ctx);
    const Real& z = t.params.z;
    const Real& al = t.params.alpha;
    const Real del = ldexp(Real(1), -static_cast<int>(t.ctx.mantissa_bits / 4));
    std::vector<Real> out;

    if (family == Family::P) {
        if (n > t.L.max_n())
            throw std::invalid_argument("electrostatic_residual: table too short");
        const ZeroSet zs = zeros(n, t.L);
        const Real beta = (2 * Real(n) + al + z + 1) - t.L.b[n];
        for (const Real& x : zs.points) {
            guard_distance(x, z, del, "endpoint");
            guard_distance(x, Real(0), del, "origin");
            guard_distance(x, beta, del, "external");
            out.push_back(gradient_residual(
                zs.points, x,
                {-1 / (x - z), -1 / x, 1 / (x - beta), Real(1), -al / x}));
        }
        return out;
    }

    if (n + 1 > t.S.max_gamma())
        throw std::invalid_argument("electrostatic_residual: gamma table too short");
    const ZeroSet ys = zeros_sym(n, t);
    const Real rho2 = (Real(n) + z + al + 1) - t.S.gamma[n] - t.S.gamma[n + 1];
    if (!(rho2 > z))
        throw std::runtime_error("electrostatic_residual: external charge fell "
                                 "inside the support");
    const Real sq = sqrt(rho2), sz = sqrt(z);
    for (const Real& y : ys.points) {
        if (y == 0) continue; // the origin carries the weight's own charge
        guard_distance(y, sz, del, "endpoint");
        guard_distance(y, -sz, del, "endpoint");
        guard_distance(y, Real(0), del, "origin");
        out.push_back(gradient_residual(ys.points, y,
                                        {1 / (y - sq), 1 / (y + sq), -1 / (y - sz),
                                         -1 / (y + sz), 2 * y, -(2 * al + 1) / y}));
    }
    return out;
}

ZeroFlow zero_flow(unsigned n, unsigned k, const FunctionalParams& params,
                   const Real& z0_in, const Real& z1_in, const Real& tol_in,
                   const PrecisionContext& ctx) {
    params.validate();
    if (n < 1 || k < 1 || k > n)
        throw std::invalid_argument("zero_flow: need 1 <= k <= n");
    ScopedPrecision guard(ctx);
    const FunctionalParams p = params.rescoped();
    const Real z0 = at_working_precision(z0_in);
    const Real z1 = at_working_precision(z1_in);
    const Real tol = at_working_precision(tol_in);
    if (!(z0 > 0 && z1 > 0))
        throw std::invalid_argument("zero_flow: the span must stay positive");

    // the field only needs b_n(z), which is smooth in z; a coarse table
    // per evaluation is enough, with the endpoints checked at full width
    const PrecisionContext fast = make_context(128);
    const Real del = ldexp(Real(1), -static_cast<int>(ctx.mantissa_bits / 4));
    const OdeField field = [&](const Real& zc, const OdeState& y) -> OdeState {
        FunctionalParams pz = p;
        pz.z = zc;
        const RecurrenceTable tb = recurrence_from_moments(n, pz, fast);
        const Real shift = tb.b[n] - (2 * Real(n) + p.alpha + zc + 1);
        if (!(abs(y[0] + shift) > del * (1 + abs(y[0]) + abs(shift))))
            throw std::runtime_error("zero_flow: singular field near z = " +
                                     zc.str(20));
        return {(y[0] / zc) * (zc + shift) / (y[0] + shift)};
    };

    FunctionalParams p0 = p;
    p0.z = z0;
    const Real x0 = zeros(n, recurrence_from_moments(n, p0, ctx)).points[k - 1];
    const std::vector<OdeSample> samples = integrate_ode(field, {x0}, z0, z1, tol, ctx);

    ZeroFlow out;
    out.n = n;
    out.k = k;
    out.path.reserve(samples.size());
    for (const OdeSample& s : samples) out.path.emplace_back(s.z, s.y[0]);
    const int dir = (z1 >= z0) ? 1 : -1;
    for (std::size_t i = 1; i < out.path.size(); ++i)
        if (!(dir * (out.path[i].second - out.path[i - 1].second) > 0))
            out.monotone = false;

    FunctionalParams p1 = p;
    p1.z = z1;
    const Real x1 = zeros(n, recurrence_from_moments(n, p1, ctx)).points[k - 1];
    out.endpoint_error = abs(out.path.back().second - x1);
    out.endpoint_ok = (out.endpoint_error <= 10 * tol);
    return out;
}

} // namespace trunclag
