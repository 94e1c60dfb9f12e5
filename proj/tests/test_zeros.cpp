#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trunclag/zeros.hpp"

using namespace trunclag;

namespace {

bool close(const Real& a, const Real& b, const Real& tol) {
    return abs(a - b) <= tol * (std::max)(Real(1), abs(b));
}

} // namespace

TEST_CASE("degree one and two zeros against closed forms") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real("0.5"), Real(3), Variant::L};
    const RecurrenceTable t = recurrence_from_moments(4, p, ctx);

    const ZeroSet z1 = zeros(1, t);
    REQUIRE(z1.points.size() == 1);
    CHECK(close(z1.points[0], t.b[0], ctx.residual_tol));

    // P_2 = (x - b_1)(x - b_0) - a_1, roots by the quadratic formula
    const ZeroSet z2 = zeros(2, t);
    REQUIRE(z2.points.size() == 2);
    const Real mid = (t.b[0] + t.b[1]) / 2;
    const Real disc = sqrt((t.b[1] - t.b[0]) * (t.b[1] - t.b[0]) / 4 + t.a[1]);
    CHECK(close(z2.points[0], mid - disc, ctx.residual_tol));
    CHECK(close(z2.points[1], mid + disc, ctx.residual_tol));
}

TEST_CASE("zeros stay inside the truncation interval and interlace") {
    const PrecisionContext ctx = make_context(320);
    ScopedPrecision guard(ctx);
    for (const char* as : {"-0.5", "1.7"}) {
        for (const char* zs : {"0.5", "8"}) {
            const FunctionalParams p{Real(as), Real(zs), Variant::L};
            const RecurrenceTable t = recurrence_from_moments(12, p, ctx);
            ZeroSet prev = zeros(1, t);
            for (unsigned n = 2; n <= 12; ++n) {
                const ZeroSet cur = zeros(n, t);
                REQUIRE(cur.points.size() == n);
                for (unsigned k = 0; k < n; ++k) {
                    CHECK(cur.points[k] > 0);
                    CHECK(cur.points[k] < p.z);
                    if (k > 0) CHECK(cur.points[k] > cur.points[k - 1]);
                }
                // classical interlacing between consecutive degrees
                for (unsigned k = 0; k + 1 < n; ++k) {
                    CHECK(prev.points[k] > cur.points[k]);
                    CHECK(prev.points[k] < cur.points[k + 1]);
                }
                prev = cur;
            }
        }
    }
}

TEST_CASE("symmetrized zeros are signed square roots of the base zeros") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const TableSet t = build_tables(8, Real("0.3"), Real(2), ctx);
    const Real root_z = sqrt(t.params.z);
    for (unsigned n = 1; n <= 12; ++n) {
        const ZeroSet s = zeros_sym(n, t);
        REQUIRE(s.points.size() == n);
        for (unsigned k = 0; k < n; ++k) {
            CHECK(abs(s.points[k]) < root_z);
            // symmetry about the origin, entry for entry
            CHECK(s.points[k] == -s.points[n - 1 - k]);
        }
        if (n % 2 == 1) CHECK(s.points[n / 2] == 0);
        if (n % 2 == 0) {
            const ZeroSet base = zeros(n / 2, t.L);
            for (unsigned k = 0; k < n / 2; ++k)
                CHECK(close(s.points[n / 2 + k] * s.points[n / 2 + k],
                            base.points[k], ctx.residual_tol));
        }
    }
}

TEST_CASE("Gauss rule integrates exactly through degree 2n-1 and not beyond") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real(0), Real(4), Variant::L};
    const unsigned n = 6;
    const MomentTable mom = moment_table(2 * n, p, ctx);
    const RecurrenceTable t = recurrence_from_moments(n, p, ctx);
    const QuadratureRule q = gauss_rule(n, t, mom);
    REQUIRE(q.weights.size() == n);
    Real wsum(0);
    for (const Real& w : q.weights) {
        CHECK(w > 0);
        wsum += w;
    }
    CHECK(close(wsum, mom[0], ctx.residual_tol));
    for (unsigned d = 1; d <= 2 * n - 1; ++d) {
        Real acc(0);
        for (unsigned k = 0; k < n; ++k)
            acc += q.weights[k] * pow(q.nodes.points[k], static_cast<int>(d));
        CHECK(abs(acc - mom[d]) <= ctx.residual_tol * mom[0]);
    }
    // degree 2n must miss: the rule integrates x^{2n} - P_n^2 instead
    Real acc(0);
    for (unsigned k = 0; k < n; ++k)
        acc += q.weights[k] * pow(q.nodes.points[k], static_cast<int>(2 * n));
    CHECK(abs(acc - mom[2 * n]) > Real("1e-8") * mom[0]);
}

TEST_CASE("electrostatic equilibrium residuals for both families") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    for (const char* as : {"-0.4", "0", "1.7"}) {
        const TableSet t = build_tables(10, Real(as), Real(3), ctx);
        for (unsigned n = 2; n <= 7; ++n) {
            for (const Real& r : electrostatic_residual(n, Family::P, t))
                CHECK(r < ctx.residual_tol);
            for (const Real& r : electrostatic_residual(n, Family::S, t))
                CHECK(r < ctx.residual_tol);
        }
    }
}

TEST_CASE("external charges sit beyond the truncation point") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    for (const char* zs : {"0.2", "1", "9"}) {
        const TableSet t = build_tables(40, Real("0.5"), Real(zs), ctx);
        for (unsigned n = 1; n < 40; ++n) {
            // beta_n = 2n + alpha + z + 1 - b_n > z puts the repelling
            // charge of the base family outside (0, z)
            const Real beta = 2 * n + t.params.alpha + t.params.z + 1 - t.L.b[n];
            CHECK(beta > t.params.z);
        }
        for (unsigned n = 1; n + 1 <= t.S.max_gamma(); ++n) {
            const Real rho2 =
                n + t.params.z + t.params.alpha + 1 - t.S.gamma[n] - t.S.gamma[n + 1];
            CHECK(rho2 > t.params.z);
        }
    }
}

TEST_CASE("zero flow follows the deformation in z") {
    const PrecisionContext ctx = make_context(192);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real(0), Real(1), Variant::L};
    const ZeroFlow f = zero_flow(4, 2, p, Real(1), Real(3), Real("1e-12"), ctx);
    CHECK(f.endpoint_ok);
    CHECK(f.endpoint_error < Real("1e-11"));
    CHECK(f.monotone);
    REQUIRE(f.path.size() >= 2);
    CHECK(f.path.front().first == 1);
    CHECK(abs(f.path.back().first - 3) < ctx.eps * 64);
    // zeros spread out as the truncation point moves right
    CHECK(f.path.back().second > f.path.front().second);
}

TEST_CASE("flow runs backward too") {
    const PrecisionContext ctx = make_context(192);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{Real("0.5"), Real(2), Variant::L};
    const ZeroFlow f = zero_flow(3, 3, p, Real(2), Real("0.5"), Real("1e-12"), ctx);
    CHECK(f.endpoint_ok);
    CHECK(f.monotone);
    CHECK(f.path.back().second < f.path.front().second);
}

TEST_CASE("degree bounds are enforced") {
    const PrecisionContext ctx = make_context(128);
    ScopedPrecision guard(ctx);
    const TableSet t = build_tables(4, Real(0), Real(1), ctx);
    CHECK_THROWS_AS((void)zeros(0, t.L), std::invalid_argument);
    CHECK_THROWS_AS((void)zeros(5, t.L), std::invalid_argument);
    const MomentTable mom = moment_table(4, t.params, ctx);
    CHECK_THROWS_AS((void)gauss_rule(3, t.L, mom), std::invalid_argument);
}
