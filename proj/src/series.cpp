#include "trunclag/series.hpp"

namespace trunclag {

Real c_asym(unsigned k, const Real& alpha_in) {
    const Real alpha = at_working_precision(alpha_in);
    const Real sign = (k % 2 == 0) ? 1 : -1;
    return (sign * (4 * alpha * alpha - 1) - 1) / ldexp(Real(1), 2 * static_cast<int>(k) + 3);
}

} // namespace trunclag
