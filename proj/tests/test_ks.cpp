#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ofi/errors.hpp"
#include "ofi/ks.hpp"

using namespace ofi;

TEST(Kolmogorov, TabulatedSurvival) {
    // Reference values of the Kolmogorov limiting distribution.
    EXPECT_NEAR(kolmogorov_survival(0.5), 0.9639452436648751, 1e-12);
    EXPECT_NEAR(kolmogorov_survival(1.0), 0.26999967167735456, 1e-12);
    EXPECT_NEAR(kolmogorov_survival(1.36), 0.049485876755377876, 1e-12);
    EXPECT_NEAR(kolmogorov_survival(1.3581), 0.0499996304316674, 1e-12);
    EXPECT_NEAR(kolmogorov_survival(2.0), 0.0006709252557796953, 1e-14);
    EXPECT_NEAR(kolmogorov_survival(0.19), 0.999999999999981, 1e-14);
    EXPECT_NEAR(kolmogorov_survival(0.21), 0.9999999999915384, 1e-14);
    EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(Kolmogorov, MonotoneAcrossSeriesSwitch) {
    double prev = 1.0;
    for (double x = 0.01; x < 3.0; x += 0.01) {
        const double q = kolmogorov_survival(x);
        EXPECT_LE(q, prev + 1e-15) << x;
        prev = q;
    }
}

TEST(KsTest, StatisticByHand) {
    std::vector<double> x{0.1, 0.35, 0.4, 0.8, 0.95};
    auto r = ks_test(x, [](double v) { return std::clamp(v, 0.0, 1.0); });
    EXPECT_NEAR(r.statistic, 0.2, 1e-15);
    EXPECT_EQ(r.n, 5u);
    EXPECT_GT(r.p_value, 0.5);
}

TEST(KsTest, ExactNormalDrawsPass) {
    std::mt19937_64 rng(123);
    std::normal_distribution<double> nd;
    int below = 0;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(1000);
        for (auto& v : x) {
            v = nd(rng);
        }
        const auto r = ks_test_normal(x);
        below += r.statistic < ks_critical_5pct(1000) ? 1 : 0;
    }
    EXPECT_GE(below, 17);
}

TEST(KsTest, ShiftedSampleFails) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(0.3, 1.0);
    std::vector<double> x(1000);
    for (auto& v : x) {
        v = nd(rng);
    }
    const auto r = ks_test_normal(x);
    EXPECT_GT(r.statistic, ks_critical_5pct(1000));
    EXPECT_LT(r.p_value, 0.01);
}

TEST(KsTest, CriticalValue) {
    EXPECT_NEAR(ks_critical_5pct(1000), 1.3581 / std::sqrt(1000.0), 1e-15);
    EXPECT_NEAR(ks_critical_5pct(1000) * std::sqrt(1000.0), 1.36, 0.01);
}

TEST(KsTest, EmptySampleRejected) {
    EXPECT_THROW(ks_test_normal({}), ArgumentError);
}

TEST(NormalCdf, Values) {
    EXPECT_DOUBLE_EQ(standard_normal_cdf(0.0), 0.5);
    EXPECT_NEAR(standard_normal_cdf(1.96), 0.9750021048517795, 1e-15);
}
