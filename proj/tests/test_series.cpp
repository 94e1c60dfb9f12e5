#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trunclag/recurrence.hpp"
#include "trunclag/series.hpp"

using namespace trunclag;

TEST_CASE("first orders in closed form at alpha = 0") {
    const auto t = sigma_series<Rational>(3, 4, Rational(0));
    CHECK(t.at(1, 1) == Rational(1, 2));
    CHECK(t.at(1, 2) == Rational(-1, 12));
    CHECK(t.at(2, 1) == Rational(4, 4));
    CHECK(t.at(2, 2) == Rational(-16, 240));
    CHECK(t.a_coeff(1, 2) == Rational(1, 12));
    CHECK(t.a_coeff(1, 1) == Rational(0)); // the (1-k) factor kills k = 1
}

TEST_CASE("leading b coefficient for several alpha") {
    for (const auto& [num, den] : {std::pair{-1, 2}, {0, 1}, {17, 10}}) {
        const Rational alpha(num, den);
        const auto t = sigma_series<Rational>(2, 2, alpha);
        // b_0(z) = (alpha+1)/(alpha+2) z + O(z^2)
        CHECK(t.b_coeff(0, 1) == (alpha + 1) / (alpha + 2));
        CHECK(t.b_coeff(0, 0) == 0);
    }
}

TEST_CASE("rational and floating-point builds agree") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const auto q = sigma_series<Rational>(4, 6, Rational(17, 10));
    const auto r = sigma_series<Real>(4, 6, Real("1.7"));
    for (unsigned n = 0; n <= 5; ++n)
        for (unsigned k = 1; k <= 6; ++k) {
            const Rational& qv = q.at(n, k);
            const Real exact = Real(numerator(qv).str()) / Real(denominator(qv).str());
            CHECK(abs(r.at(n, k) - exact) <=
                  ctx.residual_tol * (std::max)(Real(1), abs(exact)));
        }
}

TEST_CASE("Taylor sum matches the recurrence tables at small z") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const Real alpha("0.5");
    const unsigned kmax = 5;
    const auto t = sigma_series<Real>(3, kmax, alpha);
    for (unsigned n = 1; n <= 3; ++n) {
        Real prev_rem(0);
        for (const char* zs : {"0.02", "0.01"}) {
            const Real z(zs);
            const FunctionalParams p{alpha, z, Variant::L};
            const RecurrenceTable tab = recurrence_from_moments(n + 1, p, ctx);
            Real sum(0), zk(1);
            for (unsigned k = 1; k <= kmax; ++k) {
                zk *= z;
                sum += t.at(n, k) * zk;
            }
            // the table's sigma carries the sign of the subleading
            // coefficient of the monic polynomial
            const Real rem = abs(sum + tab.sigma[n]);
            CHECK(rem < pow(z, static_cast<int>(kmax)) * z * 100);
            if (prev_rem > 0) {
                // halving z must shrink the remainder by close to 2^{kmax+1}
                CHECK(rem * pow(Real(2), Real(kmax) + Real("0.5")) < prev_rem);
            }
            prev_rem = rem;
        }
    }
}

TEST_CASE("a and b coefficient sums match the tables too") {
    const PrecisionContext ctx = make_context(256);
    ScopedPrecision guard(ctx);
    const Real alpha(1), z("0.01");
    const unsigned kmax = 5;
    const auto t = sigma_series<Real>(3, kmax, alpha);
    const FunctionalParams p{alpha, z, Variant::L};
    const RecurrenceTable tab = recurrence_from_moments(4, p, ctx);
    const Real budget = pow(z, static_cast<int>(kmax)) * z * 100;
    for (unsigned n = 1; n <= 3; ++n) {
        Real asum(0), bsum(0), zk(1);
        for (unsigned k = 0; k <= kmax; ++k) {
            asum += t.a_coeff(n, k) * zk;
            bsum += t.b_coeff(n, k) * zk;
            zk *= z;
        }
        CHECK(abs(asum - tab.a[n]) < budget);
        CHECK(abs(bsum - tab.b[n]) < budget);
    }
}

TEST_CASE("large-n limit of the third-order coefficient") {
    const PrecisionContext ctx = make_context(192);
    ScopedPrecision guard(ctx);
    const Real alpha(1);
    CHECK(c_asym(3, alpha) == Real(-1) / 128);
    const Real c3 = c_asym(3, alpha);
    const auto t = sigma_series<Real>(40, 3, alpha);
    const Real scaled = t.at(40, 3) * 40 * 40 * 40 / c3;
    CHECK(scaled > Real("0.8"));
    CHECK(scaled < Real("1.2"));
    // and the ratio keeps improving with n
    const Real worse = t.at(10, 3) * 10 * 10 * 10 / c3;
    CHECK(abs(scaled - 1) < abs(worse - 1));
}

TEST_CASE("argument validation and index guards") {
    const auto t = sigma_series<Rational>(2, 3, Rational(0));
    CHECK_THROWS_AS((void)t.at(4, 1), std::out_of_range);
    CHECK_THROWS_AS((void)t.at(1, 4), std::out_of_range);
    CHECK_THROWS_AS((void)sigma_series<Rational>(2, 1, Rational(0)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)sigma_series<Rational>(2, 3, Rational(-2)),
                    std::invalid_argument);
}
