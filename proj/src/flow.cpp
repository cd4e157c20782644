#include "ofi/flow.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "ofi/errors.hpp"
#include "ofi/text.hpp"

namespace ofi {

double event_contribution(const NbboSnapshot& prev, const NbboSnapshot& cur) {
    double e = 0.0;
    if (cur.bid_price >= prev.bid_price) {
        e += static_cast<double>(cur.bid_size);
    }
    if (cur.bid_price <= prev.bid_price) {
        e -= static_cast<double>(prev.bid_size);
    }
    if (cur.ask_price <= prev.ask_price) {
        e -= static_cast<double>(cur.ask_size);
    }
    if (cur.ask_price >= prev.ask_price) {
        e += static_cast<double>(prev.ask_size);
    }
    return e;
}

std::vector<BookEvent> classify_events(std::span<const NbboSnapshot> nbbo) {
    std::vector<BookEvent> events;
    events.reserve(nbbo.size());
    const NbboSnapshot* prev = nullptr;
    std::size_t n = 0;
    for (const auto& cur : nbbo) {
        if (cur.crossed) {
            continue;
        }
        if (prev != nullptr && prev->day == cur.day) {
            BookEvent ev;
            ev.n = ++n;
            ev.day = cur.day;
            ev.timestamp = cur.timestamp;
            ev.seq = cur.seq;
            ev.e = event_contribution(*prev, cur);
            ev.price_changing = cur.bid_price != prev->bid_price || cur.ask_price != prev->ask_price;
            events.push_back(ev);
        } else {
            n = 0;
        }
        prev = &cur;
    }
    return events;
}

std::vector<std::optional<double>> average_depth(std::span<const NbboSnapshot> nbbo, const TimeGrid& grid) {
    grid.validate();
    const std::size_t windows = grid.window_count();
    std::vector<double> sum(windows, 0.0);
    std::vector<std::size_t> count(windows, 0);
    for (const auto& s : nbbo) {
        if (s.crossed) {
            continue;
        }
        if (auto w = grid.window_of(s.timestamp)) {
            sum[*w] += static_cast<double>(s.bid_size + s.ask_size);
            ++count[*w];
        }
    }
    std::vector<std::optional<double>> depth(windows);
    for (std::size_t i = 0; i < windows; ++i) {
        if (count[i] >= 2) {
            depth[i] = sum[i] / (2.0 * static_cast<double>(count[i] - 1));
        }
    }
    return depth;
}

BucketSeries bucketize(std::span<const BookEvent> events, std::span<const NbboSnapshot> nbbo,
                       std::span<const SignedTrade> trades, const TimeGrid& grid, const BucketOptions& options) {
    grid.validate();
    BucketSeries series;
    series.grid = grid;
    const std::size_t buckets = grid.bucket_count();
    series.resize(buckets, grid.window_count());
    if (!nbbo.empty()) {
        series.day = nbbo.front().day;
    } else if (!events.empty()) {
        series.day = events.front().day;
    }

    for (const auto& ev : events) {
        auto k = grid.bucket_of(ev.timestamp);
        if (!k) {
            continue;
        }
        ++series.event_count[*k];
        if (!(options.exclude_price_changing && ev.price_changing)) {
            series.ofi[*k] += ev.e;
        }
    }

    for (const auto& t : trades) {
        auto k = grid.bucket_of(t.event_time);
        if (!k) {
            continue;
        }
        ++series.trade_count[*k];
        series.vol[*k] += static_cast<double>(t.trade.size);
        series.ti[*k] += static_cast<double>(t.buy_size() - t.sell_size());
    }

    // Sum of bid and ask raw prices prevailing at each grid point t_0..t_K.
    constexpr auto kUndefined = std::numeric_limits<std::int64_t>::min();
    std::vector<std::int64_t> level(buckets + 1, kUndefined);
    std::int64_t current = kUndefined;
    std::size_t k = 0;
    for (const auto& s : nbbo) {
        if (s.crossed) {
            continue;
        }
        while (k <= buckets && s.timestamp > grid.grid_point(k)) {
            level[k++] = current;
        }
        current = s.bid_price.raw + s.ask_price.raw;
    }
    while (k <= buckets) {
        level[k++] = current;
    }

    const double ticks_denominator = 2.0 * grid.tick_size * static_cast<double>(Price::kScale);
    for (std::size_t j = 0; j < buckets; ++j) {
        if (level[j] == kUndefined) {
            continue;
        }
        series.defined[j] = 1;
        series.dp_ticks[j] = static_cast<double>(level[j + 1] - level[j]) / ticks_denominator;
    }

    series.window_depth = average_depth(nbbo, grid);
    return series;
}

void write_bucket_csv(std::ostream& out, std::span<const BucketSeries> series) {
    out << "day,window,bucket,dp_ticks,ofi,ti,vol,ntrades,nevents,ad\n";
    for (const auto& s : series) {
        const std::string day = text::format_date(s.day);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const std::size_t w = s.window_of_bucket(k);
            out << day << ',' << w << ',' << k << ',';
            if (s.defined[k]) {
                out << text::format_double(s.dp_ticks[k]);
            }
            out << ',' << text::format_double(s.ofi[k]) << ',' << text::format_double(s.ti[k]) << ','
                << text::format_double(s.vol[k]) << ',' << s.trade_count[k] << ',' << s.event_count[k] << ',';
            if (w < s.window_depth.size() && s.window_depth[w]) {
                out << text::format_double(*s.window_depth[w]);
            }
            out << '\n';
        }
    }
}

std::vector<double> autocorrelations(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    std::vector<double> acf(max_lag, std::numeric_limits<double>::quiet_NaN());
    if (n == 0) {
        return acf;
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : x) {
        c0 += (v - mean) * (v - mean);
    }
    if (c0 == 0.0) {
        return acf;
    }
    for (std::size_t lag = 1; lag <= max_lag && lag < n; ++lag) {
        double c = 0.0;
        for (std::size_t t = lag; t < n; ++t) {
            c += (x[t] - mean) * (x[t - lag] - mean);
        }
        acf[lag - 1] = c / c0;
    }
    return acf;
}

}  // namespace ofi
