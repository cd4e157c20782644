#include "ofi/types.hpp"

#include <cmath>

#include "ofi/errors.hpp"

namespace ofi {

Price Price::from_dollars(double dollars) {
    return Price{static_cast<std::int64_t>(std::llround(dollars * kScale))};
}

void TimeGrid::validate() const {
    if (bucket_seconds <= 0) {
        throw ArgumentError("bucket length must be positive");
    }
    if (window_seconds <= 0 || window_seconds % bucket_seconds != 0) {
        throw ArgumentError("window length must be a positive multiple of the bucket length");
    }
    if (session_end <= session_start) {
        throw ArgumentError("session end must follow session start");
    }
    if ((session_end - session_start) % window_seconds != 0) {
        throw ArgumentError("session length must be a whole number of windows");
    }
    if (!(tick_size > 0.0)) {
        throw ArgumentError("tick size must be positive");
    }
}

std::size_t TimeGrid::bucket_count() const {
    return static_cast<std::size_t>((session_end - session_start) / bucket_seconds);
}

std::size_t TimeGrid::buckets_per_window() const {
    return static_cast<std::size_t>(window_seconds / bucket_seconds);
}

std::size_t TimeGrid::window_count() const {
    return static_cast<std::size_t>((session_end - session_start) / window_seconds);
}

std::optional<std::size_t> TimeGrid::bucket_of(Seconds t) const {
    if (t <= session_start || t > session_end) {
        return std::nullopt;
    }
    return static_cast<std::size_t>((t - session_start - 1) / bucket_seconds);
}

std::optional<std::size_t> TimeGrid::window_of(Seconds t) const {
    if (t <= session_start || t > session_end) {
        return std::nullopt;
    }
    return static_cast<std::size_t>((t - session_start - 1) / window_seconds);
}

void BucketSeries::resize(std::size_t n, std::size_t w) {
    dp_ticks.assign(n, 0.0);
    ofi.assign(n, 0.0);
    ti.assign(n, 0.0);
    vol.assign(n, 0.0);
    trade_count.assign(n, 0);
    event_count.assign(n, 0);
    defined.assign(n, 0);
    window_depth.assign(w, std::nullopt);
}

}  // namespace ofi
