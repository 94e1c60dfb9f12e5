#pragma once

#include "trunclag/recurrence.hpp"

#include <functional>
#include <string>
#include <vector>

namespace trunclag {

/// One verified identity instance. residual is normalized by the
/// magnitude of the largest additive term, so pass thresholds are
/// scale-free.
struct ResidualReport {
    std::string identity_name;
    unsigned n = 0;
    FunctionalParams params;
    Real residual;
    Real tolerance_used;
    bool pass = false;
};

/// Base family, companion family, and the symmetrized split, built
/// consistently for one (alpha, z).
struct TableSet {
    FunctionalParams params; // base functional
    RecurrenceTable L;
    RecurrenceTable XL;
    SymmetricTable S;
    PrecisionContext ctx;
};

TableSet build_tables(unsigned N, const Real& alpha, const Real& z,
                      const PrecisionContext& ctx, bool discretized = false);

/// Five recurrence tables on the z-stencil z0 + j*h, j = -2..2, shared by
/// every finite-difference residual at one (alpha, z).
struct ZStencil {
    FunctionalParams params;
    PrecisionContext ctx;
    Real h;
    std::vector<RecurrenceTable> t; // size 5, center at index 2

    const RecurrenceTable& center() const { return t[2]; }
    Real d1(const std::function<Real(const RecurrenceTable&)>& f) const;
    Real d2(const std::function<Real(const RecurrenceTable&)>& f) const;
    /// 10^3 (z h/z ... )^4: the error floor of the order-4 stencils.
    Real fd_tolerance() const;
};

ZStencil make_stencil(unsigned N, const FunctionalParams& params,
                      const PrecisionContext& ctx);

/// sum_{k<n} b_k: the negated subleading coefficient of the monic P_n.
Real sigma_of(const RecurrenceTable& t, unsigned n);
/// R_n = (b_n - (2n+alpha+1))/z and r_n = (a_n - sigma_n)/z.
Real R_of(const RecurrenceTable& t, unsigned n);
Real r_of(const RecurrenceTable& t, unsigned n);

/// Laguerre-Freud equations for the base and companion families, the
/// omega-forms, the nonlinear square relation, and the factorized
/// first-integral forms L0..L3. Needs 1 <= n <= N-1.
std::vector<ResidualReport> lf_residuals(unsigned n, const TableSet& t);

/// Symmetric-side relations in the gamma's: the Laguerre-Freud equation,
/// its two summed/multiplied corollaries, the parity-split square
/// relations, and the g_n forms. Needs 2 <= n <= max_gamma - 3.
std::vector<ResidualReport> symmetric_lf_residuals(unsigned n, const SymmetricTable& s);

/// (R_n, r_n) system: the three algebraic relations, the closed form for
/// a_n, the first-order ODE pair, and the Toda forms in (R, r).
std::vector<ResidualReport> ladder_rr_residuals(unsigned n, const ZStencil& st);

/// Nonlinear sigma ODE and its quartic (Jimbo-Miwa-Okamoto) rewrite.
std::vector<ResidualReport> sigma_ode_residuals(unsigned n, const ZStencil& st);

/// Toda pair in (a_n, b_n) plus the second-order sigma equation.
std::vector<ResidualReport> toda_residuals(unsigned n, const ZStencil& st);

/// sigma_n = n(n+alpha) - theta ln(prod_{k<n} h_k); for z <= 0.05 also the
/// small-z product formula for the Hankel determinant, to relative O(z^3).
std::vector<ResidualReport> hankel_sigma_residuals(unsigned n, const ZStencil& st);

} // namespace trunclag
