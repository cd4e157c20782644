#include <cmath>

#include <gtest/gtest.h>

#include "ofi/errors.hpp"
#include "ofi/text.hpp"
#include "ofi/types.hpp"

using namespace ofi;

TEST(Text, DatesRoundTrip) {
    EXPECT_EQ(text::parse_date("2010-04-01"), 20100401);
    EXPECT_EQ(text::format_date(20100401), "2010-04-01");
    EXPECT_FALSE(text::parse_date("2010-4-01"));
    EXPECT_FALSE(text::parse_date("2010-13-01"));
    EXPECT_FALSE(text::parse_date("20100401"));
}

TEST(Text, TimesRoundTrip) {
    EXPECT_EQ(text::parse_time("09:30:00"), kSessionOpen);
    EXPECT_EQ(text::parse_time("16:00:00"), kSessionClose);
    EXPECT_EQ(text::format_time(34201), "09:30:01");
    EXPECT_FALSE(text::parse_time("9:30:00"));
    EXPECT_FALSE(text::parse_time("09:60:00"));
}

TEST(Text, PricesAreExactDecimals) {
    EXPECT_EQ(text::parse_price("10.01")->raw, 100100);
    EXPECT_EQ(text::parse_price("10")->raw, 100000);
    EXPECT_EQ(text::parse_price("0.0001")->raw, 1);
    EXPECT_EQ(text::parse_price("10.010000")->raw, 100100);
    EXPECT_FALSE(text::parse_price("10.00001"));
    EXPECT_FALSE(text::parse_price("abc"));
    EXPECT_FALSE(text::parse_price(""));
    EXPECT_EQ(text::format_price(Price{100000}), "10.00");
    EXPECT_EQ(text::format_price(Price{100125}), "10.0125");
    EXPECT_EQ(text::format_price(Price{100100}), "10.01");
}

TEST(Text, DoublesFormatLocaleFree) {
    EXPECT_EQ(text::format_double(0.5), "0.5");
    EXPECT_EQ(text::format_double(std::nan("")), "nan");
    EXPECT_EQ(text::format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(TimeGrid, BucketsAreLeftOpenRightClosed) {
    TimeGrid g;
    EXPECT_EQ(g.bucket_count(), 2340u);
    EXPECT_EQ(g.buckets_per_window(), 180u);
    EXPECT_EQ(g.window_count(), 13u);
    EXPECT_FALSE(g.bucket_of(kSessionOpen));
    EXPECT_EQ(g.bucket_of(kSessionOpen + 1), 0u);
    EXPECT_EQ(g.bucket_of(kSessionOpen + 10), 0u);
    EXPECT_EQ(g.bucket_of(kSessionOpen + 11), 1u);
    EXPECT_EQ(g.bucket_of(kSessionClose), 2339u);
    EXPECT_FALSE(g.bucket_of(kSessionClose + 1));
    EXPECT_EQ(g.window_of(kSessionOpen + 1800), 0u);
    EXPECT_EQ(g.window_of(kSessionOpen + 1801), 1u);
}

TEST(TimeGrid, RejectsInconsistentGrids) {
    TimeGrid g;
    g.bucket_seconds = 7;
    EXPECT_THROW(g.validate(), ArgumentError);
    g = TimeGrid{};
    g.bucket_seconds = 0;
    EXPECT_THROW(g.validate(), ArgumentError);
    g = TimeGrid{};
    g.tick_size = 0.0;
    EXPECT_THROW(g.validate(), ArgumentError);
    g = TimeGrid{};
    EXPECT_NO_THROW(g.validate());
}
