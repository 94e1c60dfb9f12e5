#include "trunclag/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace trunclag {

Real differentiate(const std::function<Real(const Real&)>& f, const Real& z0_in,
                   int order, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    const Real z0 = at_working_precision(z0_in);
    if (z0 <= 0)
        throw std::invalid_argument("differentiate: z0 must be positive");
    if (order != 1 && order != 2)
        throw std::invalid_argument("differentiate: order must be 1 or 2");

    const Real h = z0 * ctx.diff_step_scale;
    const Real fm2 = f(z0 - 2 * h);
    const Real fm1 = f(z0 - h);
    const Real fp1 = f(z0 + h);
    const Real fp2 = f(z0 + 2 * h);
    if (order == 1)
        return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
    const Real f0 = f(z0);
    return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
}

namespace {

// Number of eigenvalues of the tridiagonal matrix strictly below x,
// by the classic LDL^T pivot-sign count (off-diagonal entries squared).
int count_below(const std::vector<Real>& diag, const std::vector<Real>& off2,
                const Real& x, const Real& tiny) {
    int count = 0;
    Real d = diag[0] - x;
    if (d < 0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        if (abs(d) < tiny) d = (d < 0) ? -tiny : tiny;
        d = diag[i] - x - off2[i - 1] / d;
        if (d < 0) ++count;
    }
    return count;
}

} // namespace

std::vector<Real> tridiag_eigen(const std::vector<Real>& diag_in,
                                const std::vector<Real>& offdiag,
                                const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    const std::size_t n = diag_in.size();
    if (n == 0) return {};
    if (offdiag.size() + 1 != n)
        throw std::invalid_argument("tridiag_eigen: offdiag must have length n-1");

    std::vector<Real> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = at_working_precision(diag_in[i]);
    std::vector<Real> off2(offdiag.size());
    for (std::size_t i = 0; i < offdiag.size(); ++i) {
        const Real o = at_working_precision(offdiag[i]);
        off2[i] = o * o;
    }

    // Gershgorin bounds
    Real lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        Real r(0);
        if (i > 0) r += abs(offdiag[i - 1]);
        if (i + 1 < n) r += abs(offdiag[i]);
        lo = (std::min)(lo, diag[i] - r);
        hi = (std::max)(hi, diag[i] + r);
    }
    const Real span = hi - lo;
    const Real tiny = ctx.eps * ctx.eps * (1 + abs(lo) + abs(hi));

    std::vector<Real> eig(n);
    const Real width_scale = ctx.eps * ldexp(Real(1), 16);
    for (std::size_t k = 0; k < n; ++k) {
        Real a = lo - span * ctx.eps, b = hi + span * ctx.eps;
        // bisection on the count function: find lambda_k (0-based)
        while (true) {
            const Real mid = (a + b) / 2;
            const Real target_width = (std::max)(abs(mid), Real(1)) * width_scale;
            if (b - a <= target_width) break;
            if (count_below(diag, off2, mid, tiny) <= static_cast<int>(k))
                a = mid;
            else
                b = mid;
        }
        eig[k] = (a + b) / 2;
    }
    return eig;
}

std::vector<OdeSample> integrate_ode(const OdeField& field, const OdeState& y0_in,
                                     const Real& z0_in, const Real& z1_in,
                                     const Real& tol_in, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    const Real z0 = at_working_precision(z0_in);
    const Real z1 = at_working_precision(z1_in);
    const Real tol = at_working_precision(tol_in);
    OdeState y0(y0_in.size());
    for (std::size_t i = 0; i < y0.size(); ++i) y0[i] = at_working_precision(y0_in[i]);
    if (z0 <= 0 || z1 <= 0)
        throw std::invalid_argument("integrate_ode: span must stay positive");
    if (tol <= 0)
        throw std::invalid_argument("integrate_ode: tol must be positive");

    std::vector<OdeSample> out;
    out.push_back({z0, y0});
    if (z0 == z1) return out;

    // Cash-Karp embedded 4(5) tableau, built as exact ratios at working
    // precision: rounded coefficients would keep sum(B5 - B4) from
    // cancelling and put an O(h) floor under the error estimate.
    static const long An[6][5] = {{0, 0, 0, 0, 0},
                                  {1, 0, 0, 0, 0},
                                  {3, 9, 0, 0, 0},
                                  {3, -9, 6, 0, 0},
                                  {-11, 5, -70, 35, 0},
                                  {1631, 175, 575, 44275, 253}};
    static const long Ad[6][5] = {{1, 1, 1, 1, 1},
                                  {5, 1, 1, 1, 1},
                                  {40, 40, 1, 1, 1},
                                  {10, 10, 5, 1, 1},
                                  {54, 2, 27, 27, 1},
                                  {55296, 512, 13824, 110592, 4096}};
    static const long Cn[6] = {0, 1, 3, 3, 1, 7}, Cd[6] = {1, 5, 10, 5, 1, 8};
    static const long B5n[6] = {37, 0, 250, 125, 0, 512},
                      B5d[6] = {378, 1, 621, 594, 1, 1771};
    static const long B4n[6] = {2825, 0, 18575, 13525, 277, 1},
                      B4d[6] = {27648, 1, 48384, 55296, 14336, 4};
    Real A[6][5], C[6], B5[6], B4[6];
    for (int s = 0; s < 6; ++s) {
        for (int j = 0; j < 5; ++j) A[s][j] = Real(An[s][j]) / Ad[s][j];
        C[s] = Real(Cn[s]) / Cd[s];
        B5[s] = Real(B5n[s]) / B5d[s];
        B4[s] = Real(B4n[s]) / B4d[s];
    }

    const int dir = (z1 > z0) ? 1 : -1;
    Real z = z0;
    OdeState y = y0;
    Real h = (z1 - z0) / 16;
    const Real hmin = abs(z1 - z0) * ctx.eps * 64;

    while (dir * (z1 - z) > 0) {
        if (dir * (z + h - z1) > 0) h = z1 - z;
        OdeState k[6];
        k[0] = field(z, y);
        for (int s = 1; s < 6; ++s) {
            OdeState ys = y;
            for (int j = 0; j < s; ++j) {
                if (A[s][j] == 0) continue;
                for (std::size_t i = 0; i < ys.size(); ++i)
                    ys[i] += h * A[s][j] * k[j][i];
            }
            k[s] = field(z + C[s] * h, ys);
        }
        OdeState y5 = y;
        Real err(0);
        for (std::size_t i = 0; i < y.size(); ++i) {
            Real d5(0), d4(0);
            for (int s = 0; s < 6; ++s) {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += h * d5;
            err = (std::max)(err, abs(h * (d5 - d4)));
        }
        if (err <= tol) {
            z += h;
            y = y5;
            out.push_back({z, y});
        }
        // standard PI-free step-size update with safety factor
        Real scale = (err > 0) ? Real(0.9) * pow(tol / err, Real(1) / 5) : Real(4);
        scale = (std::min)((std::max)(scale, Real(1) / 4), Real(4));
        h *= scale;
        if (abs(h) < hmin)
            throw std::runtime_error("integrate_ode: step-size underflow near z = " + z.str(20));
    }
    return out;
}

} // namespace trunclag
