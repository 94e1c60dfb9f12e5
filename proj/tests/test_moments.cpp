#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trunclag/moments.hpp"

#include <mpfr.h>

#include <functional>
#include <vector>

using namespace trunclag;

namespace {

bool close(const Real& a, const Real& b, const Real& tol) {
    return abs(a - b) <= tol * (std::max)(Real(1), abs(b));
}

// integral of x^m e^{-x} over (0, z) by repeated integration by parts:
//   m! (1 - e^{-z} sum_{k<=m} z^k / k!)
Real poly_weight_integral(unsigned m, const Real& z) {
    Real fact(1), sum(0), zk(1), kfact(1);
    for (unsigned k = 0; k <= m; ++k) {
        if (k > 0) {
            zk *= z;
            kfact *= k;
        }
        sum += zk / kfact;
    }
    for (unsigned k = 2; k <= m; ++k) fact *= k;
    return fact * (1 - exp(-z) * sum);
}

// lower incomplete gamma from the MPFR upper incomplete gamma, as an
// oracle from outside the module under test
Real lower_gamma(const Real& a, const Real& z) {
    Real full, upper;
    mpfr_gamma(full.backend().data(), a.backend().data(), MPFR_RNDN);
    mpfr_gamma_inc(upper.backend().data(), a.backend().data(), z.backend().data(),
                   MPFR_RNDN);
    return full - upper;
}

// adaptive Simpson on [a, b]
Real simpson(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
             const Real& tol, int depth = 0) {
    const Real m = (a + b) / 2;
    const Real fa = f(a), fm = f(m), fb = f(b);
    const Real whole = (b - a) / 6 * (fa + 4 * fm + fb);
    const Real lm = (a + m) / 2, rm = (m + b) / 2;
    const Real left = (m - a) / 6 * (fa + 4 * f(lm) + fm);
    const Real right = (b - m) / 6 * (fm + 4 * f(rm) + fb);
    if (depth > 40 || abs(left + right - whole) <= 15 * tol)
        return left + right;
    return simpson(f, a, m, tol / 2, depth + 1) + simpson(f, m, b, tol / 2, depth + 1);
}

// integral of x^{m+alpha} e^{-x} over (0, z) with the substitution
// x = t^10, which absorbs the endpoint singularity for alpha > -1:
// the new integrand is 10 t^{10(m+alpha)+9} e^{-t^10}, smooth at 0.
Real quadrature_moment(unsigned m, const Real& alpha, const Real& z, const Real& tol) {
    const Real p = 10 * (m + alpha) + 9;
    auto f = [&](const Real& t) { return 10 * pow(t, p) * exp(-pow(t, 10)); };
    return simpson(f, Real(0), pow(z, Real(1) / 10), tol);
}

} // namespace

TEST_CASE("parameter validation") {
    const FunctionalParams bad_alpha{Real(-1), Real(1), Variant::L};
    const FunctionalParams bad_z{Real(0), Real(0), Variant::L};
    const FunctionalParams edge{Real("-0.999"), Real("0.001"), Variant::L};
    CHECK_THROWS_AS(bad_alpha.validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad_z.validate(), std::invalid_argument);
    CHECK_NOTHROW(edge.validate());
}

TEST_CASE("integer-alpha moments match integration by parts") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    for (const char* zs : {"0.3", "1", "7.5"}) {
        const Real z(zs);
        const FunctionalParams p{Real(0), z, Variant::L};
        const MomentTable mom = moment_table(6, p, ctx);
        for (unsigned m = 0; m <= 6; ++m)
            CHECK(close(mom[m], poly_weight_integral(m, z), ctx.residual_tol));
    }
}

TEST_CASE("companion functional shifts the moment index by one") {
    const PrecisionContext ctx = make_context(192);
    ScopedPrecision guard(ctx);
    const Real z("2.7"), alpha("0.4");
    const MomentTable base =
        moment_table(5, FunctionalParams{alpha, z, Variant::L}, ctx);
    const MomentTable shifted =
        moment_table(4, FunctionalParams{alpha, z, Variant::XL}, ctx);
    for (unsigned m = 0; m <= 4; ++m)
        CHECK(close(shifted[m], base[m + 1], ctx.residual_tol));
}

TEST_CASE("moments agree with the incomplete gamma function") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    for (const char* as : {"-0.5", "0", "1.7"}) {
        const Real alpha(as);
        for (const char* zs : {"0.1", "1", "10"}) {
            const Real z(zs);
            const MomentTable mom =
                moment_table(4, FunctionalParams{alpha, z, Variant::L}, ctx);
            for (unsigned m = 0; m <= 4; ++m)
                CHECK(close(mom[m], lower_gamma(m + alpha + 1, z), ctx.residual_tol));
        }
    }
}

TEST_CASE("moments agree with adaptive quadrature near the singular endpoint") {
    const PrecisionContext ctx = make_context(192);
    ScopedPrecision guard(ctx);
    // Simpson is only fourth order, so the oracle tolerance is modest
    const Real alpha("-0.5"), z(2), qtol("1e-15");
    const MomentTable mom = moment_table(3, FunctionalParams{alpha, z, Variant::L}, ctx);
    for (unsigned m : {0u, 3u})
        CHECK(abs(mom[m] - quadrature_moment(m, alpha, z, qtol)) < 1000 * qtol);
}

TEST_CASE("series and table entries agree") {
    const PrecisionContext ctx = make_context(192);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real("1.2"), Real("4.4"), Variant::L};
    const MomentTable mom = moment_table(12, p, ctx);
    for (unsigned m = 0; m <= 12; ++m)
        CHECK(close(mom[m], moment_series(m, p, ctx), ctx.residual_tol));
}

TEST_CASE("positivity and log-convexity of the moment sequence") {
    const PrecisionContext ctx = make_context(320);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real(0), Real(10), Variant::L};
    const MomentTable mom = moment_table(30, p, ctx);
    Real prev_ratio(0);
    for (unsigned m = 0; m <= 30; ++m) CHECK(mom[m] > 0);
    for (unsigned m = 0; m + 1 <= 30; ++m) {
        const Real ratio = mom[m + 1] / mom[m];
        CHECK(ratio > prev_ratio);
        prev_ratio = ratio;
    }
}

TEST_CASE("moments stay below the full-line gamma values") {
    const PrecisionContext ctx = make_context(128);
    ScopedPrecision guard(ctx);
    const Real alpha("0.3"), z(5);
    const MomentTable mom = moment_table(5, FunctionalParams{alpha, z, Variant::L}, ctx);
    for (unsigned m = 0; m <= 5; ++m)
        CHECK(mom[m] < gamma_fn(m + alpha + 1, ctx));
}

TEST_CASE("theta derivative identity for the moments") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real("0.5"), Real(3), Variant::L};
    const Real step = p.z * ctx.diff_step_scale;
    const Real tol = 1000 * (pow(step, 4) + pow(ctx.eps, Real(3) / 5));
    for (unsigned m = 0; m <= 4; ++m)
        CHECK(theta_moment_residual(m, p, ctx) < tol);
}

TEST_CASE("Stieltjes-function ODE residual") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real("1.7"), Real(1), Variant::L};
    // outside the support the truncated series converges for |t| > z
    for (const char* ts : {"3", "5.5", "-4"})
        CHECK(stieltjes_ode_residual(Real(ts), 60, p, ctx) < Real("1e-15"));
}
