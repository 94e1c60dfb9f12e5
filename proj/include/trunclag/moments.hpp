#pragma once

#include "trunclag/precision.hpp"

#include <vector>

namespace trunclag {

enum class Variant { L, XL }; // the functional itself, or x times it

/// Parameters of the truncated-gamma functional: integrals of
/// p(x) x^alpha e^{-x} over (0, z).
struct FunctionalParams {
    Real alpha;
    Real z;
    Variant variant = Variant::L;

    void validate() const;

    /// Copy with alpha and z re-scoped to the active default precision;
    /// see at_working_precision.
    FunctionalParams rescoped() const {
        return FunctionalParams{at_working_precision(alpha), at_working_precision(z), variant};
    }
};

/// Moments ell_0 .. ell_N for one functional at one precision.
struct MomentTable {
    FunctionalParams params;
    std::vector<Real> values;
    PrecisionContext ctx;

    const Real& operator[](std::size_t m) const { return values.at(m); }
    std::size_t max_index() const { return values.size() - 1; }
};

/// Exponent of x in the weight actually integrated against.
inline Real effective_alpha(const FunctionalParams& p) {
    return (p.variant == Variant::XL) ? p.alpha + 1 : p.alpha;
}

/// Gamma function at full working precision (MPFR).
Real gamma_fn(const Real& x, const PrecisionContext& ctx);

/// m-th moment by direct power series
///   ell_m = z^{m+alpha+1} sum_k (-1)^k z^k / ((m+alpha+1+k) k!).
/// Summed with guard precision until terms fall below eps times the
/// partial sum (at least 8 terms).
Real moment_series(unsigned m, const FunctionalParams& params, const PrecisionContext& ctx);

/// ell_0, ell_1 from the series, the rest by the forward recurrence
///   ell_{m+2} = (m+z+2+alpha) ell_{m+1} - z(m+alpha+1) ell_m,
/// with every entry cross-checked against the series. On a cross-check
/// failure the precision is doubled once before reporting the offending m.
MomentTable moment_table(unsigned N, const FunctionalParams& params, const PrecisionContext& ctx);

/// | z dell_m/dz - (m+alpha+1) ell_m + ell_{m+1} | with the z-derivative
/// taken by finite differences.
Real theta_moment_residual(unsigned m, const FunctionalParams& params, const PrecisionContext& ctx);

/// Residual of the first-order ODE satisfied by the Stieltjes function,
///   (t^2 - zt) S' + (t^2 - (z+alpha) t + z alpha) S = (t-z-alpha-1) ell_0 + ell_1,
/// with S truncated at degree N and differentiated term by term.
Real stieltjes_ode_residual(const Real& t, unsigned N, const FunctionalParams& params,
                            const PrecisionContext& ctx);

} // namespace trunclag
