#pragma once

#include "trunclag/identities.hpp"
#include "trunclag/moments.hpp"
#include "trunclag/polyeval.hpp"

#include <vector>

namespace trunclag {

enum class Family { P, S };

/// Zeros of one polynomial, strictly increasing. For the base family they
/// sit inside (0, z); for the symmetrized family inside (-sqrt(z), sqrt(z)),
/// symmetric about the origin with 0 present exactly when n is odd.
struct ZeroSet {
    unsigned n = 0;
    Family family = Family::P;
    std::vector<Real> points;
    FunctionalParams params;
};

/// Zeros of the degree-n polynomial of the table's family, as eigenvalues
/// of the n x n Jacobi matrix (diag b_0..b_{n-1}, offdiag sqrt(a_1)..).
/// Each point is verified against the recurrence evaluation:
///   |P_n(x)| <= residual_tol * |P_n'(x)| * spacing.
ZeroSet zeros(unsigned n, const RecurrenceTable& t);

/// Zeros of the symmetrized S_n, assembled as signed square roots of the
/// base-family zeros (even n) or companion-family zeros plus the origin
/// (odd n), and verified against the gamma-recurrence evaluation.
ZeroSet zeros_sym(unsigned n, const TableSet& t);

/// Gauss rule for the truncated weight on the zeros of degree n:
/// w_k = h_{n-1} / (P_{n-1}(x_k) P_n'(x_k)). Weights are checked positive
/// and moment-exact for degrees 0..2n-1 to residual_tol * ell_0.
struct QuadratureRule {
    ZeroSet nodes;
    std::vector<Real> weights;
};

QuadratureRule gauss_rule(unsigned n, const RecurrenceTable& t, const MomentTable& moments);

/// Normalized gradient of the discrete energy at each zero: the pairwise
/// repulsion plus the field of the endpoint charges, the external charge
/// (beta_{n-1} for the base family, +-rho_n for the symmetric one), and
/// the weight's own potential. All entries should sit at residual_tol.
std::vector<Real> electrostatic_residual(unsigned n, Family family, const TableSet& t);

/// Trajectory of the k-th zero (1-based) of P_n from z0 to z1 under
///   dx/dz = (x/z) (z + b_n - (2n+alpha+z+1)) / (x + b_n - (2n+alpha+z+1)),
/// with b_n(z) rebuilt at a coarse fast-path precision per field call and
/// the endpoint checked against an independent zero computation at z1.
struct ZeroFlow {
    unsigned n = 0;
    unsigned k = 0;
    std::vector<std::pair<Real, Real>> path; // (z, x) at accepted steps
    Real endpoint_error;
    bool endpoint_ok = false;
    bool monotone = true; // observed property, not enforced
};

ZeroFlow zero_flow(unsigned n, unsigned k, const FunctionalParams& params,
                   const Real& z0, const Real& z1, const Real& tol,
                   const PrecisionContext& ctx);

} // namespace trunclag
