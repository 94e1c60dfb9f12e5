#pragma once

#include "trunclag/precision.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace trunclag {

/// Central finite-difference derivative of order 1 or 2 on the 5-point
/// stencil z0 +- j*h, h = z0 * ctx.diff_step_scale. Error O(h^4).
Real differentiate(const std::function<Real(const Real&)>& f, const Real& z0,
                   int order, const PrecisionContext& ctx);

/// theta = z d/dz applied through differentiate.
inline Real theta(const std::function<Real(const Real&)>& f, const Real& z0,
                  const PrecisionContext& ctx) {
    return z0 * differentiate(f, z0, 1, ctx);
}

/// All eigenvalues of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal, strictly increasing, located by Sturm-sequence
/// bisection to width <= max(|lambda|,1) * eps * 2^16.
std::vector<Real> tridiag_eigen(const std::vector<Real>& diag,
                                const std::vector<Real>& offdiag,
                                const PrecisionContext& ctx);

using OdeState = std::vector<Real>;
using OdeField = std::function<OdeState(const Real& z, const OdeState& y)>;

struct OdeSample {
    Real z;
    OdeState y;
};

/// Adaptive embedded Runge-Kutta 4(5) (Cash-Karp pair). Local error per
/// accepted step <= tol; the returned samples are the accepted steps,
/// ending exactly at z1.
std::vector<OdeSample> integrate_ode(const OdeField& field, const OdeState& y0,
                                     const Real& z0, const Real& z1,
                                     const Real& tol, const PrecisionContext& ctx);

} // namespace trunclag
