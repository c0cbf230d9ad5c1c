#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <utility>

#include "firmchaos/logistic.hpp"

using namespace firmchaos;

namespace {

// Period-2 points are the roots of l^2 x^2 - l(l+1) x + (l+1) = 0.
std::pair<double, double> period_two_points(double l) {
    const double a = l * l, b = -l * (l + 1.0), c = l + 1.0;
    const double d = std::sqrt(b * b - 4.0 * a * c);
    return {(-b - d) / (2.0 * a), (-b + d) / (2.0 * a)};
}

}  // namespace

TEST(LogisticMap, RejectsParameterOutsideUnitRange) {
    EXPECT_THROW(LogisticMap(-0.1), DomainError);
    EXPECT_THROW(LogisticMap(4.0001), DomainError);
    EXPECT_THROW(LogisticMap(std::nan("")), DomainError);
    EXPECT_NO_THROW(LogisticMap(0.0));
    EXPECT_NO_THROW(LogisticMap(4.0));
}

TEST(Step, ParabolaPeakAndZeroMultiplier) {
    EXPECT_DOUBLE_EQ(step(LogisticMap(4.0), 0.5), 1.0);
    EXPECT_DOUBLE_EQ(step(LogisticMap(0.0), 0.7), 0.0);
}

TEST(Step, MapsPeriodTwoPointOntoItsPartner) {
    const auto [lo, hi] = period_two_points(3.2);
    EXPECT_NEAR(lo, 0.513044, 1e-6);
    EXPECT_NEAR(step(LogisticMap(3.2), 0.513044), 0.799456, 1e-5);
    EXPECT_NEAR(step(LogisticMap(3.2), lo), hi, 1e-12);
}

TEST(Step, RejectsStateOutsideUnitInterval) {
    EXPECT_THROW(step(LogisticMap(2.0), -1e-12), DomainError);
    EXPECT_THROW(step(LogisticMap(2.0), 1.5), DomainError);
}

TEST(Step, PreservesUnitIntervalOnRandomPairs) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lam(0.0, 4.0), unit(0.0, 1.0);
    for (int i = 0; i < 100000; ++i) {
        const double y = step(LogisticMap(lam(rng)), unit(rng));
        ASSERT_GE(y, 0.0);
        ASSERT_LE(y, 1.0);
    }
}

TEST(Iterate, ConvergesToNontrivialFixedPoint) {
    const Orbit orbit = iterate(LogisticMap(2.0), 0.3, 1000, 5);
    ASSERT_EQ(orbit.samples.size(), 5u);
    for (double s : orbit.samples) EXPECT_NEAR(s, 0.5, 1e-9);
}

TEST(Iterate, ZeroIsFixed) {
    const Orbit orbit = iterate(LogisticMap(1.0), 0.0, 0, 3);
    EXPECT_EQ(orbit.samples, (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(Iterate, FirstSampleIsFirstPostTransientIterate) {
    const LogisticMap map(3.7);
    const Orbit orbit = iterate(map, 0.2, 2, 1);
    EXPECT_EQ(orbit.samples.front(), map(map(map(0.2))));
}

TEST(Iterate, AlternatesBetweenPeriodTwoPoints) {
    const auto [lo, hi] = period_two_points(3.2);
    const Orbit orbit = iterate(LogisticMap(3.2), 0.4, 2000, 4);
    ASSERT_EQ(orbit.samples.size(), 4u);
    const bool starts_low = orbit.samples[0] < 0.65;
    for (std::size_t i = 0; i < 4; ++i) {
        const bool low = (i % 2 == 0) == starts_low;
        EXPECT_NEAR(orbit.samples[i], low ? lo : hi, 1e-5) << i;
    }
}

TEST(Iterate, RejectsInvalidInitialState) {
    EXPECT_THROW(iterate(LogisticMap(2.0), 1.2, 10, 10), DomainError);
}

TEST(Iterate, IsBitIdenticalAcrossCalls) {
    const Orbit a = iterate(LogisticMap(3.91), kDefaultX0, 500, 2000);
    const Orbit b = iterate(LogisticMap(3.91), kDefaultX0, 500, 2000);
    EXPECT_EQ(a.samples, b.samples);
}

TEST(Iterate, DiesOutBelowUnitParameter) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lam(0.01, 0.99), unit(0.001, 0.999);
    for (int i = 0; i < 200; ++i) {
        const Orbit orbit = iterate(LogisticMap(lam(rng)), unit(rng), 10000, 1);
        ASSERT_LT(std::abs(orbit.samples[0]), 1e-6);
    }
}

TEST(Iterate, SettlesOnFixedPointBelowThree) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lam(1.01, 2.99), unit(0.001, 0.999);
    for (int i = 0; i < 200; ++i) {
        const double l = lam(rng);
        const Orbit orbit = iterate(LogisticMap(l), unit(rng), 100000, 1);
        ASSERT_NEAR(orbit.samples[0], 1.0 - 1.0 / l, 1e-6) << "lambda " << l;
    }
}

TEST(FixedPoints, ClosedForm) {
    EXPECT_EQ(fixed_points(LogisticMap(0.5)), (std::vector<double>{0.0}));
    EXPECT_EQ(fixed_points(LogisticMap(2.0)), (std::vector<double>{0.0, 0.5}));
    EXPECT_EQ(fixed_points(LogisticMap(4.0)), (std::vector<double>{0.0, 0.75}));
    for (double l : {1.5, 2.7, 3.3}) {
        const LogisticMap map(l);
        for (double x : fixed_points(map)) EXPECT_NEAR(map(x), x, 1e-15);
    }
}
