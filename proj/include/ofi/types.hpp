// types.hpp: shared domain types for the order-flow toolkit.
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ofi {

using Shares = std::int64_t;
/// Whole seconds since midnight.
using Seconds = std::int32_t;
/// Calendar date packed as yyyymmdd.
using TradingDay = std::int32_t;

inline constexpr Seconds kSessionOpen = 9 * 3600 + 30 * 60;
inline constexpr Seconds kSessionClose = 16 * 3600;

/// Decimal dollar price held in units of 1/10000 dollar so that quote
/// comparisons are exact.
struct Price {
    static constexpr std::int64_t kScale = 10000;

    std::int64_t raw = 0;

    static constexpr Price from_raw(std::int64_t r) { return Price{r}; }
    static Price from_dollars(double dollars);

    double dollars() const { return static_cast<double>(raw) / kScale; }

    friend constexpr auto operator<=>(Price, Price) = default;
    friend constexpr Price operator+(Price a, Price b) { return Price{a.raw + b.raw}; }
    friend constexpr Price operator-(Price a, Price b) { return Price{a.raw - b.raw}; }
};

struct RawQuote {
    TradingDay day = 0;
    Seconds timestamp = 0;
    std::uint64_t seq = 0;
    std::string exchange;
    Price bid_price;
    Shares bid_size = 0;
    Price ask_price;
    Shares ask_size = 0;
    int mode = 0;
};

struct RawTrade {
    TradingDay day = 0;
    Seconds timestamp = 0;
    std::uint64_t seq = 0;
    std::string exchange;
    Price price;
    Shares size = 0;
    int correction = 0;
    std::string condition;
};

/// Consolidated best bid/offer after one quote record has been applied.
/// `seq` is the sequence number of the quote record that produced it.
struct NbboSnapshot {
    TradingDay day = 0;
    Seconds timestamp = 0;
    std::uint64_t seq = 0;
    Price bid_price;
    Shares bid_size = 0;
    Price ask_price;
    Shares ask_size = 0;
    bool crossed = false;

    /// Mid-quote in dollars.
    double mid() const { return 0.5 * (bid_price.dollars() + ask_price.dollars()); }
    Price spread() const { return ask_price - bid_price; }
};

enum class Side { buy, sell, unknown };

struct SignedTrade {
    RawTrade trade;
    std::optional<std::uint64_t> matched_quote_seq;
    Side side = Side::unknown;
    /// Time used for bucketing: the matched quote's timestamp when there is
    /// one, otherwise the trade's own timestamp.
    Seconds event_time = 0;

    Shares buy_size() const { return side == Side::buy ? trade.size : 0; }
    Shares sell_size() const { return side == Side::sell ? trade.size : 0; }
};

struct BookEvent {
    std::size_t n = 0;
    TradingDay day = 0;
    Seconds timestamp = 0;
    std::uint64_t seq = 0;
    double e = 0.0;
    bool price_changing = false;
};

/// Uniform grid over one trading session. Bucket k covers (t_k, t_{k+1}]
/// with t_k = session_start + k * bucket_seconds.
struct TimeGrid {
    Seconds session_start = kSessionOpen;
    Seconds session_end = kSessionClose;
    int bucket_seconds = 10;
    int window_seconds = 1800;
    double tick_size = 0.01;

    /// Throws ArgumentError when the grid is inconsistent.
    void validate() const;

    std::size_t bucket_count() const;
    std::size_t buckets_per_window() const;
    std::size_t window_count() const;
    Seconds grid_point(std::size_t k) const { return session_start + static_cast<Seconds>(k) * bucket_seconds; }
    Seconds window_end(std::size_t i) const {
        return session_start + static_cast<Seconds>(i + 1) * window_seconds;
    }
    /// Bucket containing time t, or nullopt when t <= session_start or
    /// t > session_end.
    std::optional<std::size_t> bucket_of(Seconds t) const;
    /// Window containing time t under the same half-open convention.
    std::optional<std::size_t> window_of(Seconds t) const;
};

/// Per-bucket flow series for one (symbol, day).
struct BucketSeries {
    TradingDay day = 0;
    TimeGrid grid;
    std::vector<double> dp_ticks;
    std::vector<double> ofi;
    std::vector<double> ti;
    std::vector<double> vol;
    std::vector<int> trade_count;
    std::vector<int> event_count;
    std::vector<std::uint8_t> defined;
    std::vector<std::optional<double>> window_depth;

    std::size_t size() const { return dp_ticks.size(); }
    std::size_t window_count() const { return window_depth.size(); }
    std::size_t window_of_bucket(std::size_t k) const { return k / grid.buckets_per_window(); }
    /// Bucket is defined and, when drop_empty is set, saw at least one event.
    bool usable(std::size_t k, bool drop_empty) const {
        return defined[k] != 0 && (!drop_empty || event_count[k] > 0);
    }
    /// Resize every per-bucket vector to n and every per-window vector to w.
    void resize(std::size_t n, std::size_t w);
};

}  // namespace ofi
