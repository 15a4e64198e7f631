#include <gtest/gtest.h>

#include <stdexcept>

#include "rulebench/rational.hpp"

using rulebench::Rational;

TEST(Rational, NormalisesSignAndGcd) {
    Rational r(6, -8);
    EXPECT_EQ(r.numerator(), -3);
    EXPECT_EQ(r.denominator(), 4);
    EXPECT_EQ(Rational(0, 5), Rational(0));
    EXPECT_THROW(Rational(1, 0), std::exception);
}

TEST(Rational, Arithmetic) {
    EXPECT_EQ(Rational(1, 4) + Rational(1, 4), Rational(1, 2));
    EXPECT_EQ(Rational(9, 4) / Rational(4), Rational(9, 16));
    EXPECT_EQ(Rational(1) - Rational(9, 16), Rational(7, 16));
    EXPECT_EQ(Rational(2, 3) * Rational(3, 4), Rational(1, 2));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
}

TEST(Rational, DecimalRounding) {
    EXPECT_EQ(Rational(9, 16).to_decimal(), "0.562500");
    EXPECT_EQ(Rational(1, 3).to_decimal(), "0.333333");
    EXPECT_EQ(Rational(2, 3).to_decimal(), "0.666667");
    EXPECT_EQ(Rational(1, 8).to_decimal(2), "0.13");
    EXPECT_EQ(Rational(-1, 8).to_decimal(2), "-0.13");
    EXPECT_EQ(Rational(3).to_decimal(), "3.000000");
    EXPECT_EQ(Rational(7, 16).to_string(), "7/16");
    EXPECT_EQ(Rational(4).to_string(), "4");
}

TEST(Rational, OverflowIsReported) {
    Rational big(INT64_MAX / 2 + 1);
    EXPECT_THROW(big + big + big, std::overflow_error);
}
