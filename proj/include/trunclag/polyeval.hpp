#pragma once

#include "trunclag/recurrence.hpp"

#include <cstdint>
#include <vector>

namespace trunclag {

/// Value and first two x-derivatives of a polynomial at one point.
struct PolyValue {
    Real v;
    Real d1;
    Real d2;
};

/// Monic P_n (or Q_n, depending on the table's functional) with
/// derivatives, by running the three-term recurrence and its
/// differentiated companions. Requires n <= t.max_n().
PolyValue eval_poly(const RecurrenceTable& t, unsigned n, const Real& x);

/// Monic symmetrized S_n with derivatives:  S_{n+1} = x S_n - gamma_n S_{n-1}.
/// Requires n - 1 <= t.max_gamma() for n >= 1.
PolyValue eval_sym(const SymmetricTable& t, unsigned n, const Real& x);

/// Relative residual of the structure relation
///   phi P'_{n+1} = (n+1) P_{n+2} + alpha_{n+1,n+1} P_{n+1}
///                  + (b_{n+1}+b_n-(z+ae+2+n)) a_{n+1} P_n + a_{n+1} a_n P_{n-1},
/// phi = x^2 - zx, ae the effective weight exponent, alpha_{n+1,n+1} =
/// (a_{n+2}+a_{n+1}+b_{n+1}^2-(z+ae+2)b_{n+1}+z(1+ae))/2. Needs n+2 <= max_n.
Real structure_residual(const RecurrenceTable& t, unsigned n, const Real& x);

/// Relative residual of the symmetric structure relation
///   Phi S'_n = n S_{n+2} + [...] S_n + [...] S_{n-2} + 2 gggg S_{n-4},
/// Phi = x(x^2 - z). Needs n+2 <= max_gamma and n >= 4.
Real structure_residual_sym(const SymmetricTable& t, unsigned n, const Real& x);

/// Relative residual of the lowering relation L_n P_{n+1} = P_n in the
/// cleared form  phi P'_{n+1} - delta_n P_{n+1} - C_n P_n = 0,
///   C_n = a_{n+1}[x + b_{n+1} - (2n+ae+z+3)],
///   delta_n = (n+1)(x-z) + sum_{k<=n} b_k - a_{n+1}. Needs n+1 <= max_n.
Real lowering_residual(const RecurrenceTable& t, unsigned n, const Real& x);

/// Relative residual of the second-order holonomic equation
/// D_{n+1} P_{n+1} = 0 built from C, delta at indices n and n-1.
/// Needs 1 <= n and n+1 <= max_n.
Real holonomic_residual(const RecurrenceTable& t, unsigned n, const Real& x);

/// Relative residual of the symmetric lowering relation M_n S_n = S_{n-2}
/// in the cleared form  Phi S'_n - varphi_n S_n - Y_n S_{n-2} = 0,
///   varphi_n = n x^2 + g_{n+2}g_{n+1} - g_n g_{n-1} + (g_{n+1}+g_n)^2
///              - (z+alpha+n+2)(g_{n+1}+g_n) + z(1+alpha),
///   Y_n = 2 g_n g_{n-1} (x^2 + g_n + g_{n+1} - [z+alpha+n+1]).
/// Needs 2 <= n and n+2 <= max_gamma.
Real lowering_sym_residual(const SymmetricTable& t, unsigned n, const Real& x);

/// Evaluation points in (0, upper): the fixed fractions 0.13, 0.5, 0.87
/// plus n_random seeded pseudo-random fractions in (0.05, 0.95), so runs
/// are reproducible.
std::vector<Real> probe_points(const Real& upper, unsigned n_random = 5,
                               std::uint64_t seed = 0x5851f42d4c957f2dULL);

} // namespace trunclag
