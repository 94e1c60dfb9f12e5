#pragma once

#include "trunclag/moments.hpp"

#include <vector>

namespace trunclag {

/// Three-term recurrence data for the monic orthogonal family of one
/// functional:  x P_n = P_{n+1} + b_n P_n + a_n P_{n-1},  a_0 = 0.
/// h_n is the squared norm <P_n, P_n>; sigma_n the coefficient of
/// x^{n-1} in P_n (sigma_0 = 0), so b_n = sigma_n - sigma_{n+1}.
struct RecurrenceTable {
    FunctionalParams params;
    std::vector<Real> a;
    std::vector<Real> b;
    std::vector<Real> h;
    std::vector<Real> sigma;
    PrecisionContext ctx;

    unsigned max_n() const { return static_cast<unsigned>(b.size()) - 1; }
};

/// Coefficients a_0..a_N, b_0..b_N by Gram-Schmidt on the raw moments:
/// carry the monomial coefficients of each P_n and read off
///   h_n = <P_n^2>,  b_n = <x P_n^2> / h_n,  a_n = h_n / h_{n-1}.
/// Positivity of h_n, a_n and b_n in (0, z) are checked; on a violation
/// the precision is doubled once before giving up.
RecurrenceTable recurrence_from_moments(unsigned N, const FunctionalParams& params,
                                        const PrecisionContext& ctx);

/// Same coefficients by the discretized Stieltjes procedure: a Gauss
/// quadrature rule with weight (1+x)^alpha on (-1,1), mapped to (0,z),
/// carries the residual factor e^{-t} (and t itself for the companion
/// functional). Node counts M and 2M must agree to the residual
/// tolerance; M is doubled once more if they do not.
RecurrenceTable recurrence_discretized(unsigned N, const FunctionalParams& params,
                                       const PrecisionContext& ctx);

/// Recurrence data of the symmetrized family  x S_n = S_{n+1} + gamma_n S_{n-1}
/// (gamma_0 = 0), obtained by splitting the base coefficients:
///   gamma_1 = b_0,  gamma_{2n} = a_n / gamma_{2n-1},  gamma_{2n+1} = b_n - gamma_{2n}.
/// d_n and c_n are the recurrence coefficients of the companion family
/// (the one orthogonal with respect to x times the base functional):
///   d_n = gamma_{2n+2} + gamma_{2n+1},  c_n = gamma_{2n+1} gamma_{2n}.
struct SymmetricTable {
    FunctionalParams params; // of the base functional
    std::vector<Real> gamma; // indices 0 .. 2*max_n()+1
    std::vector<Real> c;
    std::vector<Real> d;
    PrecisionContext ctx;

    unsigned max_gamma() const { return static_cast<unsigned>(gamma.size()) - 1; }
};

/// Split a base-family table into gamma's. If a companion table (built
/// independently from the shifted functional) is supplied, its a_n, b_n
/// are cross-checked against c_n, d_n.
SymmetricTable symmetrize(const RecurrenceTable& base,
                          const RecurrenceTable* companion = nullptr);

} // namespace trunclag
