#include "ofi/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace ofi::text {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    return true;
}

int digits_value(std::string_view s) {
    int v = 0;
    for (char c : s) {
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::optional<TradingDay> parse_date(std::string_view s) {
    s = trim(s);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        return std::nullopt;
    }
    auto y = s.substr(0, 4), m = s.substr(5, 2), d = s.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d)) {
        return std::nullopt;
    }
    int mm = digits_value(m), dd = digits_value(d);
    if (mm < 1 || mm > 12 || dd < 1 || dd > 31) {
        return std::nullopt;
    }
    return digits_value(y) * 10000 + mm * 100 + dd;
}

std::string format_date(TradingDay day) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", day / 10000, (day / 100) % 100, day % 100);
    return buf;
}

std::optional<Seconds> parse_time(std::string_view s) {
    s = trim(s);
    if (s.size() != 8 || s[2] != ':' || s[5] != ':') {
        return std::nullopt;
    }
    auto h = s.substr(0, 2), m = s.substr(3, 2), sec = s.substr(6, 2);
    if (!all_digits(h) || !all_digits(m) || !all_digits(sec)) {
        return std::nullopt;
    }
    int hh = digits_value(h), mm = digits_value(m), ss = digits_value(sec);
    if (hh > 23 || mm > 59 || ss > 59) {
        return std::nullopt;
    }
    return hh * 3600 + mm * 60 + ss;
}

std::string format_time(Seconds t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", t / 3600, (t / 60) % 60, t % 60);
    return buf;
}

std::optional<Price> parse_price(std::string_view s) {
    s = trim(s);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) {
        return std::nullopt;
    }
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) {
        return std::nullopt;
    }
    if (dot != std::string_view::npos && frac.empty() && whole.empty()) {
        return std::nullopt;
    }
    // Trailing zeros beyond four decimals are harmless; anything else is not
    // representable.
    while (frac.size() > 4 && frac.back() == '0') {
        frac.remove_suffix(1);
    }
    if (frac.size() > 4 || whole.size() > 12) {
        return std::nullopt;
    }
    std::int64_t raw = 0;
    for (char c : whole) {
        raw = raw * 10 + (c - '0');
    }
    std::int64_t f = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        f = f * 10 + (i < frac.size() ? frac[i] - '0' : 0);
    }
    raw = raw * Price::kScale + f;
    return Price{negative ? -raw : raw};
}

std::string format_price(Price p) {
    std::int64_t raw = p.raw;
    std::string out;
    if (raw < 0) {
        out.push_back('-');
        raw = -raw;
    }
    out += std::to_string(raw / Price::kScale);
    char frac[8];
    std::snprintf(frac, sizeof frac, "%04lld", static_cast<long long>(raw % Price::kScale));
    std::string_view f(frac, 4);
    while (f.size() > 2 && f.back() == '0') {
        f.remove_suffix(1);
    }
    out.push_back('.');
    out.append(f);
    return out;
}

std::optional<long long> parse_int(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace ofi::text
