// text.hpp: field parsing and formatting shared by the CSV readers/writers.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ofi/types.hpp"

namespace ofi::text {

/// "YYYY-MM-DD" -> yyyymmdd.
std::optional<TradingDay> parse_date(std::string_view s);
std::string format_date(TradingDay day);

/// "HH:MM:SS" -> seconds since midnight.
std::optional<Seconds> parse_time(std::string_view s);
std::string format_time(Seconds t);

/// Decimal dollar string with at most four fractional digits.
std::optional<Price> parse_price(std::string_view s);
/// Shortest rendering with at least two decimals ("10.00", "10.0125").
std::string format_price(Price p);

std::optional<long long> parse_int(std::string_view s);

/// Locale-independent rendering of a double with up to 10 significant
/// digits. Non-finite values render as "nan"/"inf"/"-inf".
std::string format_double(double v);

std::string_view trim(std::string_view s);

}  // namespace ofi::text
