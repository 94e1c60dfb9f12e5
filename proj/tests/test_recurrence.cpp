#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trunclag/recurrence.hpp"

using namespace trunclag;

namespace {

bool close(const Real& a, const Real& b, const Real& tol) {
    return abs(a - b) <= tol * (std::max)(Real(1), abs(b));
}

} // namespace

TEST_CASE("low-degree coefficients match hand Gram-Schmidt") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real("0.5"), Real(3), Variant::L};
    const MomentTable mom = moment_table(4, p, ctx);
    const RecurrenceTable t = recurrence_from_moments(2, p, ctx);

    // P_0 = 1, P_1 = x - b_0 with b_0 = ell_1/ell_0
    const Real b0 = mom[1] / mom[0];
    CHECK(close(t.b[0], b0, ctx.residual_tol));
    CHECK(close(t.h[0], mom[0], ctx.residual_tol));

    // h_1 = <P_1, P_1>, b_1 = <x P_1, P_1> / h_1, a_1 = h_1 / h_0
    const Real h1 = mom[2] - 2 * b0 * mom[1] + b0 * b0 * mom[0];
    const Real b1 = (mom[3] - 2 * b0 * mom[2] + b0 * b0 * mom[1]) / h1;
    CHECK(close(t.h[1], h1, ctx.residual_tol));
    CHECK(close(t.b[1], b1, ctx.residual_tol));
    CHECK(close(t.a[1], h1 / mom[0], ctx.residual_tol));
}

TEST_CASE("coefficients stay inside their positivity windows") {
    const PrecisionContext ctx = make_context(320);
    ScopedPrecision guard(ctx);
    for (const char* as : {"-0.5", "0", "1.7"}) {
        for (const char* zs : {"0.1", "1", "10"}) {
            const FunctionalParams p{Real(as), Real(zs), Variant::L};
            const RecurrenceTable t = recurrence_from_moments(10, p, ctx);
            for (unsigned n = 0; n <= 10; ++n) {
                CHECK(t.b[n] > 0);
                CHECK(t.b[n] < p.z);
                CHECK(t.h[n] > 0);
                if (n > 0) CHECK(t.a[n] > 0);
            }
        }
    }
}

TEST_CASE("moment and discretized backends agree") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    for (const char* as : {"-0.5", "1.7"}) {
        for (const char* zs : {"0.4", "6"}) {
            const FunctionalParams p{Real(as), Real(zs), Variant::L};
            const RecurrenceTable u = recurrence_from_moments(12, p, ctx);
            const RecurrenceTable v = recurrence_discretized(12, p, ctx);
            for (unsigned n = 0; n <= 12; ++n) {
                CHECK(close(u.b[n], v.b[n], ctx.residual_tol));
                if (n > 0) CHECK(close(u.a[n], v.a[n], ctx.residual_tol));
            }
        }
    }
}

TEST_CASE("sigma column accumulates the b's") {
    const PrecisionContext ctx = make_context(192);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real(0), Real(2), Variant::L};
    const RecurrenceTable t = recurrence_from_moments(8, p, ctx);
    Real acc(0);
    for (unsigned n = 0; n <= 8; ++n) {
        CHECK(close(t.sigma[n], -acc, ctx.residual_tol));
        acc += t.b[n];
    }
}

TEST_CASE("companion functional has its own valid table") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real("0.3"), Real(4), Variant::XL};
    const RecurrenceTable t = recurrence_from_moments(8, p, ctx);
    const RecurrenceTable d = recurrence_discretized(8, p, ctx);
    for (unsigned n = 0; n <= 8; ++n) CHECK(close(t.b[n], d.b[n], ctx.residual_tol));
}

TEST_CASE("symmetrization splits and recombines") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const Real alpha("0.7"), z(5);
    const RecurrenceTable base =
        recurrence_from_moments(10, FunctionalParams{alpha, z, Variant::L}, ctx);
    const RecurrenceTable comp =
        recurrence_from_moments(10, FunctionalParams{alpha, z, Variant::XL}, ctx);
    const SymmetricTable s = symmetrize(base, &comp);

    for (unsigned m = 1; m <= s.max_gamma(); ++m) CHECK(s.gamma[m] > 0);
    // recombination: b_n = gamma_{2n} + gamma_{2n+1}, a_n = gamma_{2n} gamma_{2n-1}
    for (unsigned n = 0; n <= 10; ++n) {
        CHECK(close(s.gamma[2 * n] + s.gamma[2 * n + 1], base.b[n], ctx.residual_tol));
        if (n > 0)
            CHECK(close(s.gamma[2 * n] * s.gamma[2 * n - 1], base.a[n],
                        ctx.residual_tol));
    }
    // companion recombination through c and d
    for (unsigned n = 0; n < 10; ++n)
        CHECK(close(s.d[n], comp.b[n], ctx.residual_tol));
    for (unsigned n = 1; n <= 10; ++n)
        CHECK(close(s.c[n], comp.a[n], ctx.residual_tol));
}

TEST_CASE("symmetrization rejects an inconsistent companion") {
    const PrecisionContext ctx = make_context(128);
    ScopedPrecision guard(ctx);
    const Real alpha(0), z(2);
    const RecurrenceTable base =
        recurrence_from_moments(6, FunctionalParams{alpha, z, Variant::L}, ctx);
    RecurrenceTable bogus =
        recurrence_from_moments(6, FunctionalParams{alpha, z, Variant::XL}, ctx);
    bogus.b[3] += Real(1) / 100;
    CHECK_THROWS_AS((void)symmetrize(base, &bogus), std::runtime_error);
}

TEST_CASE("deep truncation recovers the classical coefficients") {
    // for z far beyond the relevant degrees the truncation is invisible:
    // b_n -> 2n + alpha + 1 and a_n -> n(n + alpha)
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real(0), Real(60), Variant::L};
    const RecurrenceTable t = recurrence_from_moments(5, p, ctx);
    for (unsigned n = 0; n <= 5; ++n) {
        CHECK(abs(t.b[n] - (2 * n + 1)) < Real("1e-6"));
        if (n > 0) CHECK(abs(t.a[n] - n * n) < Real("1e-5"));
    }
}

TEST_CASE("requested output precision is honored") {
    const PrecisionContext lo = make_context(128);
    const PrecisionContext hi = make_context(384);
    const FunctionalParams p{Real("0.5"), Real("1.5"), Variant::L};
    const RecurrenceTable a = recurrence_from_moments(6, p, lo);
    const RecurrenceTable b = recurrence_from_moments(6, p, hi);
    ScopedPrecision guard(hi);
    for (unsigned n = 0; n <= 6; ++n) {
        CHECK(abs(a.b[n] - b.b[n]) <= lo.eps * 16 * abs(b.b[n]));
        // the finer run must genuinely carry more correct digits
        CHECK(abs(a.b[n] - b.b[n]) > 0);
    }
}
