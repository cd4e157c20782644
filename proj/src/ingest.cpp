#include "ofi/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "ofi/errors.hpp"
#include "ofi/text.hpp"

namespace ofi {

namespace {

constexpr std::string_view kQuoteHeader = "date,time,exchange,bid,bidsize,ask,asksize,mode";
constexpr std::string_view kTradeHeader = "date,time,exchange,price,size,corr,cond";

std::string slurp(std::istream& in) {
    if (!in) {
        throw IoError("input stream is not readable");
    }
    std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) {
        throw IoError("read failure on input stream");
    }
    return data;
}

/// Splits `line` on commas into `out`; returns the field count (which may
/// exceed N, in which case only the first N are stored).
template <std::size_t N>
std::size_t split_fields(std::string_view line, std::array<std::string_view, N>& out) {
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (count < N) {
            out[count] = field;
        }
        ++count;
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return count;
}

/// Calls `row(line, seq)` for every non-blank data row after verifying the
/// header.
template <class Fn>
void for_each_row(const std::string& data, std::string_view header, Fn&& row) {
    std::string_view rest(data);
    bool seen_header = false;
    std::uint64_t seq = 0;
    while (!rest.empty()) {
        auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest.remove_prefix(nl == std::string_view::npos ? rest.size() : nl + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (!seen_header) {
            if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
                line.remove_prefix(3);  // UTF-8 BOM
            }
            if (text::trim(line) != header) {
                throw FormatError("header mismatch: expected '" + std::string(header) + "'");
            }
            seen_header = true;
            continue;
        }
        if (text::trim(line).empty()) {
            continue;
        }
        row(line, seq++);
    }
    if (!seen_header) {
        throw FormatError("missing header: expected '" + std::string(header) + "'");
    }
}

void reject(LoadStats& s, std::size_t LoadStats::*reason) {
    ++s.rejected;
    ++(s.*reason);
}

}  // namespace

bool passes_quote_filters(const RawQuote& q, const FilterConfig& cfg) {
    if (q.timestamp < cfg.session_open || q.timestamp > cfg.session_close) {
        return false;
    }
    if (q.bid_price.raw <= 0 || q.ask_price.raw <= 0 || q.bid_size <= 0 || q.ask_size <= 0) {
        return false;
    }
    return !cfg.excluded_quote_modes.contains(q.mode);
}

bool passes_trade_filters(const RawTrade& t, const FilterConfig& cfg) {
    if (t.timestamp < cfg.session_open || t.timestamp > cfg.session_close) {
        return false;
    }
    if (t.price.raw <= 0 || t.size <= 0) {
        return false;
    }
    if (t.correction > cfg.max_correction) {
        return false;
    }
    return !cfg.excluded_trade_conditions.contains(t.condition);
}

Loaded<RawQuote> load_quotes(std::istream& source, TradingDay day, const FilterConfig& cfg) {
    const std::string data = slurp(source);
    Loaded<RawQuote> out;
    auto& st = out.stats;
    out.records.reserve(data.size() / 40);
    for_each_row(data, kQuoteHeader, [&](std::string_view line, std::uint64_t seq) {
        ++st.parsed;
        std::array<std::string_view, 8> f;
        if (split_fields(line, f) != 8) {
            reject(st, &LoadStats::malformed);
            return;
        }
        auto date = text::parse_date(f[0]);
        auto time = text::parse_time(f[1]);
        auto bid = text::parse_price(f[3]);
        auto bsz = text::parse_int(f[4]);
        auto ask = text::parse_price(f[5]);
        auto asz = text::parse_int(f[6]);
        auto mode = text::parse_int(f[7]);
        if (!date || !time || !bid || !bsz || !ask || !asz || !mode) {
            reject(st, &LoadStats::malformed);
            return;
        }
        if (*date != day) {
            reject(st, &LoadStats::wrong_date);
            return;
        }
        RawQuote q{*date, *time, seq, std::string(text::trim(f[2])), *bid, *bsz, *ask, *asz, static_cast<int>(*mode)};
        if (q.timestamp < cfg.session_open || q.timestamp > cfg.session_close) {
            reject(st, &LoadStats::out_of_session);
        } else if (q.bid_price.raw <= 0 || q.ask_price.raw <= 0 || q.bid_size <= 0 || q.ask_size <= 0) {
            reject(st, &LoadStats::non_positive);
        } else if (cfg.excluded_quote_modes.contains(q.mode)) {
            reject(st, &LoadStats::excluded_code);
        } else {
            ++st.accepted;
            out.records.push_back(std::move(q));
        }
    });
    return out;
}

Loaded<RawTrade> load_trades(std::istream& source, TradingDay day, const FilterConfig& cfg) {
    const std::string data = slurp(source);
    Loaded<RawTrade> out;
    auto& st = out.stats;
    for_each_row(data, kTradeHeader, [&](std::string_view line, std::uint64_t seq) {
        ++st.parsed;
        std::array<std::string_view, 7> f;
        if (split_fields(line, f) != 7) {
            reject(st, &LoadStats::malformed);
            return;
        }
        auto date = text::parse_date(f[0]);
        auto time = text::parse_time(f[1]);
        auto price = text::parse_price(f[3]);
        auto size = text::parse_int(f[4]);
        auto corr = text::parse_int(f[5]);
        if (!date || !time || !price || !size || !corr) {
            reject(st, &LoadStats::malformed);
            return;
        }
        if (*date != day) {
            reject(st, &LoadStats::wrong_date);
            return;
        }
        RawTrade t{*date, *time, seq, std::string(text::trim(f[2])), *price, *size, static_cast<int>(*corr),
                   std::string(text::trim(f[6]))};
        if (t.timestamp < cfg.session_open || t.timestamp > cfg.session_close) {
            reject(st, &LoadStats::out_of_session);
        } else if (t.price.raw <= 0 || t.size <= 0) {
            reject(st, &LoadStats::non_positive);
        } else if (t.correction > cfg.max_correction ||
                   cfg.excluded_trade_conditions.contains(t.condition)) {
            reject(st, &LoadStats::excluded_code);
        } else {
            ++st.accepted;
            out.records.push_back(std::move(t));
        }
    });
    return out;
}

Loaded<RawQuote> load_quotes_file(const std::filesystem::path& path, TradingDay day, const FilterConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open quote file " + path.string());
    }
    return load_quotes(in, day, cfg);
}

Loaded<RawTrade> load_trades_file(const std::filesystem::path& path, TradingDay day, const FilterConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open trade file " + path.string());
    }
    return load_trades(in, day, cfg);
}

void write_quotes_csv(std::ostream& out, std::span<const RawQuote> quotes) {
    std::string buf;
    buf.reserve(64 * (quotes.size() + 1));
    buf += kQuoteHeader;
    buf += '\n';
    for (const auto& q : quotes) {
        buf += text::format_date(q.day);
        buf += ',';
        buf += text::format_time(q.timestamp);
        buf += ',';
        buf += q.exchange;
        buf += ',';
        buf += text::format_price(q.bid_price);
        buf += ',';
        buf += std::to_string(q.bid_size);
        buf += ',';
        buf += text::format_price(q.ask_price);
        buf += ',';
        buf += std::to_string(q.ask_size);
        buf += ',';
        buf += std::to_string(q.mode);
        buf += '\n';
    }
    out << buf;
}

void write_trades_csv(std::ostream& out, std::span<const RawTrade> trades) {
    std::string buf;
    buf += kTradeHeader;
    buf += '\n';
    for (const auto& t : trades) {
        buf += text::format_date(t.day);
        buf += ',';
        buf += text::format_time(t.timestamp);
        buf += ',';
        buf += t.exchange;
        buf += ',';
        buf += text::format_price(t.price);
        buf += ',';
        buf += std::to_string(t.size);
        buf += ',';
        buf += std::to_string(t.correction);
        buf += ',';
        buf += t.condition;
        buf += '\n';
    }
    out << buf;
}

std::vector<NbboSnapshot> build_nbbo(std::span<const RawQuote> quotes) {
    struct Row {
        std::string exchange;
        Price bid;
        Shares bid_size;
        Price ask;
        Shares ask_size;
    };
    std::vector<Row> matrix;
    std::vector<NbboSnapshot> out;
    out.reserve(quotes.size());
    TradingDay current_day = 0;

    for (const auto& q : quotes) {
        if (out.empty() || q.day != current_day) {
            matrix.clear();
            current_day = q.day;
        }
        auto it = std::find_if(matrix.begin(), matrix.end(), [&](const Row& r) { return r.exchange == q.exchange; });
        if (it == matrix.end()) {
            matrix.push_back(Row{q.exchange, q.bid_price, q.bid_size, q.ask_price, q.ask_size});
        } else {
            *it = Row{q.exchange, q.bid_price, q.bid_size, q.ask_price, q.ask_size};
        }

        NbboSnapshot s;
        s.day = q.day;
        s.timestamp = q.timestamp;
        s.seq = q.seq;
        s.bid_price = matrix.front().bid;
        s.ask_price = matrix.front().ask;
        for (const auto& r : matrix) {
            s.bid_price = std::max(s.bid_price, r.bid);
            s.ask_price = std::min(s.ask_price, r.ask);
        }
        for (const auto& r : matrix) {
            if (r.bid == s.bid_price) {
                s.bid_size += r.bid_size;
            }
            if (r.ask == s.ask_price) {
                s.ask_size += r.ask_size;
            }
        }
        s.crossed = s.bid_price > s.ask_price;
        out.push_back(s);
    }
    return out;
}

void write_nbbo_csv(std::ostream& out, std::span<const NbboSnapshot> nbbo) {
    out << "seq,time,bid,bidsize,ask,asksize,crossed\n";
    for (const auto& s : nbbo) {
        out << s.seq << ',' << text::format_time(s.timestamp) << ',' << text::format_price(s.bid_price) << ','
            << s.bid_size << ',' << text::format_price(s.ask_price) << ',' << s.ask_size << ','
            << (s.crossed ? 1 : 0) << '\n';
    }
}

SigningResult sign_trades(std::span<const NbboSnapshot> nbbo, std::span<const RawTrade> trades, TradeTest mode) {
    SigningResult result;
    result.trades.reserve(trades.size());

    if (mode == TradeTest::tick) {
        std::optional<Price> last_price;
        Side last_side = Side::unknown;
        TradingDay last_day = 0;
        for (const auto& t : trades) {
            if (t.day != last_day) {
                last_price.reset();
                last_side = Side::unknown;
                last_day = t.day;
            }
            if (last_price && t.price > *last_price) {
                last_side = Side::buy;
            } else if (last_price && t.price < *last_price) {
                last_side = Side::sell;
            }
            last_price = t.price;
            SignedTrade st{t, std::nullopt, last_side, t.timestamp};
            (last_side == Side::unknown ? result.unmatched : result.matched)++;
            result.trades.push_back(std::move(st));
        }
        return result;
    }

    for (const auto& t : trades) {
        SignedTrade st{t, std::nullopt, Side::unknown, t.timestamp};
        auto first = std::lower_bound(nbbo.begin(), nbbo.end(), t.timestamp - 1,
                                      [](const NbboSnapshot& s, Seconds v) { return s.timestamp < v; });
        for (auto it = first; it != nbbo.end() && it->timestamp <= t.timestamp; ++it) {
            if (it->crossed || it->day != t.day) {
                continue;
            }
            if (t.price >= it->ask_price) {
                st.side = Side::buy;
            } else if (t.price <= it->bid_price) {
                st.side = Side::sell;
            } else {
                continue;
            }
            st.matched_quote_seq = it->seq;
            st.event_time = it->timestamp;
            break;
        }
        (st.side == Side::unknown ? result.unmatched : result.matched)++;
        result.trades.push_back(std::move(st));
    }
    return result;
}

Price spread_quantile(std::span<const NbboSnapshot> nbbo, double percentile) {
    if (!(percentile > 0.0 && percentile <= 1.0)) {
        throw ArgumentError("spread percentile must lie in (0, 1]");
    }
    if (nbbo.empty()) {
        throw ArgumentError("spread filter needs a nonempty snapshot sequence");
    }
    std::vector<std::int64_t> spreads;
    spreads.reserve(nbbo.size());
    for (const auto& s : nbbo) {
        spreads.push_back(s.spread().raw);
    }
    const auto n = static_cast<double>(spreads.size());
    auto rank = static_cast<std::size_t>(std::ceil(percentile * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, spreads.size());
    std::nth_element(spreads.begin(), spreads.begin() + static_cast<std::ptrdiff_t>(rank - 1), spreads.end());
    return Price{spreads[rank - 1]};
}

std::vector<NbboSnapshot> drop_wide_spreads(std::span<const NbboSnapshot> nbbo, Price threshold) {
    std::vector<NbboSnapshot> out;
    out.reserve(nbbo.size());
    std::copy_if(nbbo.begin(), nbbo.end(), std::back_inserter(out),
                 [&](const NbboSnapshot& s) { return s.spread() <= threshold; });
    return out;
}

std::vector<NbboSnapshot> apply_spread_filter(std::span<const NbboSnapshot> nbbo, double percentile) {
    return drop_wide_spreads(nbbo, spread_quantile(nbbo, percentile));
}

}  // namespace ofi
