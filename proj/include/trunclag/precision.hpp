#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace trunclag {

namespace mp = boost::multiprecision;

/// Arbitrary-precision real. Working precision is set per scope through
/// ScopedPrecision; freshly constructed values pick up the active default.
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

inline unsigned digits10_for_bits(unsigned mantissa_bits) {
    // round up bits -> decimal digits, plus guard digits
    return static_cast<unsigned>(std::ceil(mantissa_bits * 0.30102999566398)) + 6;
}

/// Mantissa width and the tolerances derived from it. All numerical
/// routines take a context; eps is the unit roundoff at mantissa_bits.
struct PrecisionContext {
    unsigned mantissa_bits = 0;
    Real eps;            // 2^(1 - mantissa_bits)
    Real residual_tol;   // default eps^(1/2)
    Real diff_step_scale; // default eps^(1/5), for 5-point stencils
};

/// RAII guard: sets the thread default precision, restores on exit.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned mantissa_bits)
        : saved_(Real::default_precision()) {
        Real::default_precision(digits10_for_bits(mantissa_bits));
    }
    explicit ScopedPrecision(const PrecisionContext& ctx)
        : ScopedPrecision(ctx.mantissa_bits) {}
    ~ScopedPrecision() { Real::default_precision(saved_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_;
};

/// Copy of x carried at the active default precision. Arithmetic on
/// variable-precision operands inherits the operands' width, so a value
/// built under a narrower scope would silently drag whole computations
/// down to its own precision; public entry points re-scope their Real
/// inputs with this before using them.
inline Real at_working_precision(Real x) {
    x.precision(Real::default_precision());
    return x;
}

inline PrecisionContext make_context(unsigned mantissa_bits) {
    if (mantissa_bits < 64)
        throw std::invalid_argument(
            "make_context: mantissa_bits must be >= 64, got " + std::to_string(mantissa_bits));
    ScopedPrecision guard(mantissa_bits);
    PrecisionContext ctx;
    ctx.mantissa_bits = mantissa_bits;
    ctx.eps = ldexp(Real(1), 1 - static_cast<int>(mantissa_bits));
    ctx.residual_tol = sqrt(ctx.eps);
    ctx.diff_step_scale = pow(ctx.eps, Real(1) / 5);
    return ctx;
}

/// Default mantissa width for building tables up to degree N.
/// Raw-moment Gram-Schmidt loses roughly O(n) digits per degree, so give
/// about 4N decimal digits of headroom over the 64-bit floor.
inline unsigned default_bits_for_degree(unsigned n) {
    return 64 + static_cast<unsigned>(std::ceil(13.3 * n));
}

/// Fixed 40-significant-digit decimal rendering, independent of the
/// internal precision, so golden files stay stable.
inline std::string to_decimal40(const Real& x) {
    return x.str(40, std::ios_base::scientific);
}

} // namespace trunclag
