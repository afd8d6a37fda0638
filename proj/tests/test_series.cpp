// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "bidisk/series.hpp"
#include "bidisk/spaces.hpp"
#include "bidisk/verify.hpp"

using namespace bidisk;

namespace {

TwoVarSeries one_minus_z1z2() { return TwoVarSeries::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
TwoVarSeries product_one_minus() { return TwoVarSeries::from_rows({{1.0, -1.0}, {-1.0, 1.0}}); }
TwoVarSeries one_minus_z1() { return TwoVarSeries::from_rows({{1.0}, {-1.0}}); }
TwoVarSeries one_minus_z2() { return TwoVarSeries::from_rows({{1.0, -1.0}}); }

}  // namespace

TEST(TwoVarSeries, ConstructionValidates) {
    EXPECT_THROW(TwoVarSeries(1, 1, {1.0, 2.0, 3.0}), InputError);
    EXPECT_THROW(TwoVarSeries(-1, 0, {}), InputError);
    EXPECT_THROW(TwoVarSeries(0, 0, {Complex{std::nan(""), 0.0}}), NonFiniteError);
    EXPECT_THROW(TwoVarSeries::zero(5000, 5000), SizeLimitError);
}

TEST(TwoVarSeries, RaggedRowsAreZeroFilled) {
    const auto f = TwoVarSeries::from_rows({{1.0, 2.0}, {3.0}});
    EXPECT_EQ(f.deg2(), 1);
    EXPECT_EQ(f.coeff(1, 1), Complex(0.0));
}

TEST(TwoVarSeries, ZeroExtendedAccess) {
    const auto f = one_minus_z1z2();
    EXPECT_EQ(f.coeff(1, 1), Complex(-1.0));
    EXPECT_EQ(f.coeff(7, 3), Complex(0.0));
    EXPECT_EQ(f.coeff(-1, 0), Complex(0.0));
    EXPECT_EQ(f + TwoVarSeries::zero(4, 4), f);
}

TEST(TwoVarSeries, TermsAndTrim) {
    auto f = TwoVarSeries::zero(3, 3);
    f.set(1, 2, 5.0);
    const auto t = f.terms();
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].k, 1);
    EXPECT_EQ(t[0].l, 2);
    const auto g = f.trimmed();
    EXPECT_EQ(g.deg1(), 1);
    EXPECT_EQ(g.deg2(), 2);
}

TEST(Multiply, ProductOfAxisFactors) {
    EXPECT_EQ(multiply(one_minus_z1(), one_minus_z2()), product_one_minus());
}

TEST(Multiply, IdentityAndDifferenceOfSquares) {
    const auto f = one_minus_z1z2();
    EXPECT_EQ(multiply(f, TwoVarSeries::constant(1.0)), f);
    const auto p = multiply(TwoVarSeries::from_rows({{1.0}, {1.0}}), one_minus_z1());
    EXPECT_EQ(p, TwoVarSeries::from_rows({{1.0}, {0.0}, {-1.0}}));
}

TEST(Multiply, DegreesAddAndSizeCap) {
    const auto p = multiply(TwoVarSeries::zero(2, 3), TwoVarSeries::zero(4, 1));
    EXPECT_EQ(p.deg1(), 6);
    EXPECT_EQ(p.deg2(), 4);
    EXPECT_THROW(multiply(TwoVarSeries::zero(10, 10), TwoVarSeries::zero(10, 10), 100), SizeLimitError);
}

TEST(Multiply, Bilinear) {
    verify::Generator gen(3);
    for (int i = 0; i < 20; ++i) {
        const auto f = gen.twovar(4), g = gen.twovar(4), h = gen.twovar(4);
        const Complex s = gen.complex();
        EXPECT_LT(max_abs_diff(multiply(f, g + s * h), multiply(f, g) + s * multiply(f, h)), 1e-12);
    }
}

TEST(Reciprocal, DiagonalGeometricSeries) {
    const auto b = reciprocal(one_minus_z1z2(), 3, 3);
    for (int k = 0; k <= 3; ++k)
        for (int l = 0; l <= 3; ++l) EXPECT_EQ(b.coeff(k, l), Complex(k == l ? 1.0 : 0.0)) << k << "," << l;
}

TEST(Reciprocal, ProductGivesAllOnes) {
    const auto b = reciprocal(product_one_minus(), 2, 2);
    for (int k = 0; k <= 2; ++k)
        for (int l = 0; l <= 2; ++l) EXPECT_EQ(b.coeff(k, l), Complex(1.0));
}

TEST(Reciprocal, OfOneAndOfScalar) {
    EXPECT_EQ(reciprocal(TwoVarSeries::constant(1.0), 0, 0), TwoVarSeries::constant(1.0));
    const auto b = reciprocal(TwoVarSeries::constant(Complex(0.0, 2.0)), 1, 1);
    EXPECT_NEAR(std::abs(b.coeff(0, 0) - Complex(0.0, -0.5)), 0.0, 1e-15);
    EXPECT_EQ(b.coeff(1, 1), Complex(0.0));
}

TEST(Reciprocal, SingularConstantTerm) {
    const auto f = TwoVarSeries::from_rows({{1e-14, 1.0}});
    try {
        reciprocal(f, 2, 2);
        FAIL();
    } catch (const SingularReciprocalError& e) {
        EXPECT_NE(std::string(e.what()).find("eps0"), std::string::npos);
    }
    EXPECT_NO_THROW(reciprocal(f, 2, 2, 1e-15));
    EXPECT_THROW(reciprocal(OneVarSeries{0.0, 1.0}, 3), SingularReciprocalError);
}

TEST(Reciprocal, OneVariable) {
    const auto b = reciprocal(OneVarSeries{1.0, -0.5}, 4);
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(b.coeff(k).real(), std::pow(0.5, k), 1e-15);
}

TEST(Slice, Examples) {
    EXPECT_EQ(slice(one_minus_z1z2(), Variable::z2, 0.0), OneVarSeries{1.0});
    EXPECT_LT(max_abs_diff(slice(one_minus_z1z2(), Variable::z2, 0.5), OneVarSeries({1.0, -0.5})), 1e-15);
    EXPECT_LT(max_abs_diff(slice(product_one_minus(), Variable::z2, 0.5), OneVarSeries({0.5, -0.5})), 1e-15);
    EXPECT_LT(max_abs_diff(slice(product_one_minus(), Variable::z1, Complex(0.0, 0.5)),
                           OneVarSeries({Complex(1.0, -0.5), Complex(-1.0, 0.5)})),
              1e-15);
}

TEST(Slice, OutsideDisk) {
    EXPECT_THROW(slice(one_minus_z1z2(), Variable::z2, 1.0), DomainError);
    EXPECT_THROW(slice(one_minus_z1z2(), Variable::z1, Complex(0.8, 0.8)), DomainError);
}

TEST(DiagRestrict, Examples) {
    EXPECT_EQ(diag_restrict(one_minus_z1z2()), OneVarSeries({1.0, 0.0, -1.0}));
    EXPECT_EQ(diag_restrict(product_one_minus()), OneVarSeries({1.0, -2.0, 1.0}));
    EXPECT_EQ(diag_restrict(one_minus_z1()), OneVarSeries({1.0, -1.0}));
}

TEST(DiagRestrict, Linear) {
    verify::Generator gen(11);
    for (int i = 0; i < 50; ++i) {
        const auto f = gen.twovar(6), g = gen.twovar(6);
        EXPECT_LT(max_abs_diff(diag_restrict(f + g), diag_restrict(f) + diag_restrict(g)), 1e-13);
    }
}

TEST(Lift, Examples) {
    const OneVarSeries F{1.0, -1.0};
    EXPECT_EQ(lift(F, {1, 1}), one_minus_z1z2());
    const auto g = lift(F, {2, 3});
    EXPECT_EQ(g.deg1(), 2);
    EXPECT_EQ(g.deg2(), 3);
    EXPECT_EQ(g.coeff(2, 3), Complex(-1.0));
    EXPECT_EQ(g.terms().size(), 2u);
    EXPECT_EQ(lift(OneVarSeries{1.0}, {3, 2}), TwoVarSeries::constant(1.0));
    EXPECT_THROW(lift(OneVarSeries::zero(3000), {2, 2}), SizeLimitError);
}

TEST(Restrict, Examples) {
    EXPECT_EQ(restrict_pattern(one_minus_z1z2(), {1, 1}), OneVarSeries({1.0, -1.0}));
    auto f = TwoVarSeries::zero(2, 1);
    f.set(0, 0, 1.0);
    f.set(2, 1, -1.0);
    EXPECT_EQ(restrict_pattern(f, {2, 1}), OneVarSeries({1.0, -1.0}));
    EXPECT_EQ(restrict_pattern(TwoVarSeries::constant(1.0), {2, 3}), OneVarSeries{1.0});
}

TEST(Restrict, PatternViolationNamesIndex) {
    try {
        restrict_pattern(product_one_minus(), {1, 1});
        FAIL();
    } catch (const PatternViolationError& e) {
        EXPECT_NE(std::string(e.what()).find("(0, 1)"), std::string::npos) << e.what();
    }
}

TEST(Restrict, RoundTripAllPatterns) {
    const auto r = verify::suite_roundtrip(200, 5);
    EXPECT_EQ(r.violations, 0);
    EXPECT_EQ(r.checks, 200 * 9);
}

TEST(DiagonalProject, Examples) {
    const auto r = TwoVarSeries::from_rows({{1.0, 0.0}, {1.0, 1.0}});  // 1 + z1 + z1 z2
    EXPECT_EQ(diagonal_project(r, {1, 1}), TwoVarSeries::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
    EXPECT_TRUE(is_diagonal(one_minus_z1z2(), {1, 1}));
    EXPECT_FALSE(is_diagonal(r, {1, 1}));
    EXPECT_EQ(diagonal_project(one_minus_z1z2(), {1, 1}), one_minus_z1z2());

    const auto s = TwoVarSeries::monomial(2, 1) + TwoVarSeries::monomial(2, 4);
    EXPECT_EQ(diagonal_project(s, {2, 1}).trimmed(), TwoVarSeries::monomial(2, 1));
}

TEST(DiagonalProject, IdempotentAndContracting) {
    const auto r = verify::suite_projection(200, 9);
    EXPECT_EQ(r.violations, 0);
}

TEST(Reciprocal, RandomConsistency) {
    const auto r = verify::suite_reciprocal(200, 13);
    EXPECT_EQ(r.violations, 0);
    EXPECT_LE(r.worst, 1e-12);
}

TEST(DiagonalPattern, RejectsNonPositive) {
    EXPECT_THROW(DiagonalPattern(0, 1), InputError);
    EXPECT_THROW(DiagonalPattern(2, -1), InputError);
}
