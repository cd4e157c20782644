// ingest.hpp: Level-1 quote/trade loading, filtering, NBBO consolidation
// and trade signing.
//
// Quote CSV header:  date,time,exchange,bid,bidsize,ask,asksize,mode
// Trade CSV header:  date,time,exchange,price,size,corr,cond
//
// One file per symbol per day, rows in feed order. `seq` on every record is
// the zero-based data-row index in its file and breaks ties between rows that
// share a whole-second timestamp.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ofi/types.hpp"

namespace ofi {

/// Record filters. The default code sets are the usual TAQ exclusions.
struct FilterConfig {
    Seconds session_open = kSessionOpen;
    Seconds session_close = kSessionClose;
    std::set<int> excluded_quote_modes{4, 7, 9, 11, 13, 14, 15, 19, 20, 27, 28};
    std::set<std::string> excluded_trade_conditions{"O", "Z", "B", "T", "L", "G", "W", "J", "K"};
    int max_correction = 2;
};

/// Row accounting for one file. parsed == accepted + rejected.
struct LoadStats {
    std::size_t parsed = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    // rejection breakdown
    std::size_t malformed = 0;
    std::size_t wrong_date = 0;
    std::size_t out_of_session = 0;
    std::size_t non_positive = 0;
    std::size_t excluded_code = 0;
};

template <class Record>
struct Loaded {
    std::vector<Record> records;
    LoadStats stats;
};

bool passes_quote_filters(const RawQuote& q, const FilterConfig& cfg);
bool passes_trade_filters(const RawTrade& t, const FilterConfig& cfg);

/// Parses and filters a quote file. Throws IoError when the stream cannot be
/// read and FormatError when the header does not match.
Loaded<RawQuote> load_quotes(std::istream& source, TradingDay day, const FilterConfig& cfg = {});
Loaded<RawTrade> load_trades(std::istream& source, TradingDay day, const FilterConfig& cfg = {});

Loaded<RawQuote> load_quotes_file(const std::filesystem::path& path, TradingDay day,
                                  const FilterConfig& cfg = {});
Loaded<RawTrade> load_trades_file(const std::filesystem::path& path, TradingDay day,
                                  const FilterConfig& cfg = {});

void write_quotes_csv(std::ostream& out, std::span<const RawQuote> quotes);
void write_trades_csv(std::ostream& out, std::span<const RawTrade> trades);

/// Scans quotes in order while maintaining the latest quote per exchange and
/// emits one snapshot per record: best bid/ask across exchanges, sizes summed
/// over every exchange quoting exactly at the best price. Crossed books
/// (bid > ask) are flagged, not dropped.
std::vector<NbboSnapshot> build_nbbo(std::span<const RawQuote> quotes);

/// `seq,time,bid,bidsize,ask,asksize,crossed`
void write_nbbo_csv(std::ostream& out, std::span<const NbboSnapshot> nbbo);

enum class TradeTest { quote, tick };

struct SigningResult {
    /// Every input trade in input order; unmatched ones carry Side::unknown.
    std::vector<SignedTrade> trades;
    std::size_t matched = 0;
    std::size_t unmatched = 0;
};

/// Quote test: a trade at or above the ask of an NBBO snapshot stamped in
/// [trade time - 1 s, trade time] is a buy, at or below its bid a sell; the
/// earliest eligible snapshot wins. Crossed snapshots are never eligible.
/// Tick test: compare with the previous distinct trade price, carrying the
/// prior side on a zero tick.
SigningResult sign_trades(std::span<const NbboSnapshot> nbbo, std::span<const RawTrade> trades,
                          TradeTest mode);

/// Removes snapshots whose spread is strictly above the nearest-rank
/// `percentile` quantile of the spread distribution of `nbbo`.
std::vector<NbboSnapshot> apply_spread_filter(std::span<const NbboSnapshot> nbbo, double percentile);

/// Nearest-rank spread threshold, exposed so a pipeline can compute it over a
/// symbol's full sample and apply it per day.
Price spread_quantile(std::span<const NbboSnapshot> nbbo, double percentile);
std::vector<NbboSnapshot> drop_wide_spreads(std::span<const NbboSnapshot> nbbo, Price threshold);

}  // namespace ofi
