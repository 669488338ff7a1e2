#include <doctest.h>

#include <cmath>

#include "bergman/measure.hpp"
#include "test_util.hpp"

using namespace bergman;
using bergman::testutil::simpson01;

TEST_CASE("validate: families and support condition") {
    CHECK(RadialMeasure::power_weight(1).validate() == MeasureError::Ok);
    CHECK(RadialMeasure::power_weight(0).validate() == MeasureError::Ok);
    CHECK(RadialMeasure::power_weight(-1).validate() == MeasureError::BadParameter);

    // A single atom strictly inside [0,1) leaves mu([3/4,1)) = 0.
    auto single = RadialMeasure::atomic({{Rational(1, 2), Rational(1)}});
    CHECK(single.validate() == MeasureError::SupportGap);
    CHECK(single.validate(NumericMode::Float) == MeasureError::SupportGap);

    // Weights must sum to 1 exactly.
    auto bad = RadialMeasure::atomic({{Rational(1, 2), Rational(1, 2)},
                                      {Rational(3, 4), Rational(1, 3)}},
                                     true);
    CHECK(bad.validate(NumericMode::Float) == MeasureError::NotProbability);

    // Truncated geometric atoms at 1 - 2^{-k}: with the tail weight folded
    // into the last atom the sum is 1 and the truncation flag admits the
    // measure in float mode only.
    std::vector<RadialMeasure::Atom> atoms;
    for (int k = 1; k <= 6; ++k)
        atoms.push_back({1 - Rational(1, 1 << k), Rational(1, 1 << k)});
    atoms.back().w += Rational(1, 64);  // fold the tail weight into the last atom
    auto trunc = RadialMeasure::atomic(atoms, true);
    CHECK(trunc.validate(NumericMode::Float) == MeasureError::Ok);
    CHECK(trunc.validate(NumericMode::Exact) == MeasureError::SupportGap);

    auto unflagged = RadialMeasure::atomic(atoms, false);
    CHECK(unflagged.validate(NumericMode::Float) == MeasureError::SupportGap);
}

TEST_CASE("moment: closed forms against the quadrature oracle") {
    auto pw1 = RadialMeasure::power_weight(1);
    CHECK(pw1.moment(0) == 1);
    CHECK(pw1.moment(2) == Rational(1, 2));
    // oracle: int_0^1 2 t^{p+1} dt
    for (unsigned p : {1u, 2u, 3u, 7u}) {
        double oracle = simpson01([&](double t) { return 2 * std::pow(t, p + 1.0); });
        CHECK(to_double(pw1.moment(p)) == doctest::Approx(oracle).epsilon(1e-8));
    }

    auto at = RadialMeasure::atomic({{Rational(1, 2), Rational(1, 2)},
                                     {Rational(3, 4), Rational(1, 2)}},
                                    true);
    CHECK(at.moment(2) == Rational(13, 32));
    CHECK(at.moment(0) == 1);
}

TEST_CASE("moment sequence: monotone and log-convex up to p = 64") {
    std::vector<RadialMeasure> measures = {
        RadialMeasure::power_weight(0), RadialMeasure::power_weight(1),
        RadialMeasure::power_weight(5),
        RadialMeasure::atomic({{Rational(1, 3), Rational(1, 4)},
                               {Rational(1, 2), Rational(1, 4)},
                               {Rational(9, 10), Rational(1, 2)}},
                              true)};
    for (const auto& m : measures) {
        CHECK(m.moment(0) == 1);
        for (unsigned p = 0; p <= 64; ++p) {
            CHECK(m.moment(p) > 0);
            CHECK(m.moment(p + 1) <= m.moment(p));
            CHECK(m.moment(p) * m.moment(p + 2) >= m.moment(p + 1) * m.moment(p + 1));
        }
    }
}

TEST_CASE("c_index: products of factor moments") {
    auto disc = ProductMeasure::power_weight(1, 1);
    CHECK(disc.c_index(MultiIndex{3}) == Rational(1, 4));

    auto pm = ProductMeasure::power_weight(2, 1);
    CHECK(pm.c_index(MultiIndex{0, 0}) == 1);
    CHECK(pm.c_index(MultiIndex{1, 2}) == Rational(1, 6));

    // factorization across a mixed product
    ProductMeasure mixed({RadialMeasure::power_weight(0), RadialMeasure::power_weight(3)});
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            CHECK(mixed.c_index(MultiIndex{a, b}) ==
                  mixed.factor(0).moment(2 * a) * mixed.factor(1).moment(2 * b));
}

TEST_CASE("kernel_diag: truncation, monotonicity, closed form") {
    auto disc = ProductMeasure::power_weight(1, 1);
    // r = 0: only m = 0 survives
    CHECK(disc.kernel_diag({Rational(0)}, 0) == 1);
    CHECK(disc.kernel_diag({Rational(0)}, 50) == 1);

    // oracle: partial sums of sum (m+1)(1/4)^m stabilize at (1 - 1/4)^{-2}
    Rational target(16, 9);
    CHECK(disc.kernel_diag_closed_form({Rational(1, 2)}) == target);
    Rational prev = 0;
    for (int N = 0; N <= 60; N += 10) {
        Rational v = disc.kernel_diag({Rational(1, 2)}, N);
        CHECK(v >= prev);
        CHECK(v <= target);
        prev = v;
    }
    CHECK(to_double(target - prev) < 1e-12);

    auto pm2 = ProductMeasure::power_weight(2, 1);
    CHECK(pm2.kernel_diag_closed_form({Rational(1, 2), Rational(1, 2)}) ==
          target * target);

    // monotone in each r_j on a grid
    auto pm0 = ProductMeasure::power_weight(2, 0);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Rational ra(a, 5), rb(b, 5);
            Rational v = pm0.kernel_diag({ra, rb}, 12);
            CHECK(pm0.kernel_diag({ra + Rational(1, 5), rb}, 12) >= v);
            CHECK(pm0.kernel_diag({ra, rb + Rational(1, 5)}, 12) >= v);
        }

    CHECK_THROWS_AS(disc.kernel_diag({Rational(1)}, 5), std::domain_error);
}
