// pipeline.hpp: end-to-end run over a data directory and report emission.
//
// Data directory layout:
//   <data>/<SYMBOL>/<YYYY-MM-DD>_quotes.csv
//   <data>/<SYMBOL>/<YYYY-MM-DD>_trades.csv
#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ofi/econometrics.hpp"
#include "ofi/ingest.hpp"
#include "ofi/types.hpp"

namespace ofi {

inline constexpr std::string_view kToolVersion = "0.3.0";

enum class ReportFormat { csv, json };

struct RunConfig {
    std::filesystem::path data_dir;
    /// Empty means every subdirectory of data_dir.
    std::vector<std::string> symbols;
    std::optional<TradingDay> date_from;
    std::optional<TradingDay> date_to;
    int bucket_seconds = 10;
    int window_seconds = 1800;
    double tick_size = 0.01;
    TradeTest trade_test = TradeTest::quote;
    double spread_percentile = 0.95;
    std::optional<int> nw_lags;
    bool quadratic = false;
    bool drop_empty_buckets = false;
    bool exclude_price_changing = false;
    std::size_t min_buckets = 30;
    std::size_t min_depth_windows = 30;
    std::filesystem::path out_dir = "ofi_report";
    std::set<ReportFormat> formats{ReportFormat::csv};
    std::uint64_t seed = 42;

    /// Throws ConfigError.
    void validate() const;
    TimeGrid grid() const;
};

/// Overlays the keys present in a JSON config document onto `config`.
/// Keys: data, symbols, from, to, dt, window, tick_size, trade_test,
/// spread_pct, nw_lags, quadratic, drop_empty_buckets,
/// exclude_price_changing, min_buckets, min_depth_windows, out, format, seed.
void apply_config_json(RunConfig& config, std::string_view json_text);
std::string config_to_json(const RunConfig& config);

struct FileReport {
    std::string file;
    std::string kind;  // "quotes" | "trades"
    LoadStats stats;
};

struct DayReport {
    TradingDay day = 0;
    std::size_t snapshots = 0;
    std::size_t crossed = 0;
    std::size_t spread_removed = 0;
    std::size_t events = 0;
    std::size_t trades = 0;
    std::size_t trades_unmatched = 0;
};

struct StageSkip {
    std::string stage;
    SkippedWindow window;
};

struct SymbolReport {
    std::string symbol;
    bool ok = false;
    std::string error;
    std::vector<FileReport> files;
    std::vector<DayReport> days;
    Price spread_threshold;
    std::vector<BucketSeries> series;
    std::vector<ImpactWindowResult> impact;
    std::vector<ImpactWindowResult> impact_quadratic;
    std::optional<DepthModelFit> depth;
    std::string depth_error;
    std::vector<ComparisonWindow> levels;
    ComparisonSummary levels_summary;
    /// Scaling exponent per (day, window), aligned with `series`.
    std::vector<std::vector<std::optional<double>>> exponents;
    MeanSd exponent_stats;
    std::vector<ComparisonWindow> magnitudes;
    ComparisonSummary magnitudes_summary;
    std::vector<VarianceWindow> variance;
    std::vector<StageSkip> skipped;
};

struct RunReport {
    RunConfig config;
    std::string tool_version{kToolVersion};
    std::vector<SymbolReport> symbols;
    SeasonalityProfile beta_profile;
    SeasonalityProfile depth_profile;
    SeasonalityProfile var_dp_profile;
    SeasonalityProfile var_ofi_profile;
    SeasonalityProfile beta2_var_ofi_profile;

    /// 0 when every symbol succeeded, 2 when some failed.
    int exit_code() const;
};

/// Runs ingest -> NBBO -> spread filter -> signing -> flow -> regressions ->
/// profiles for every (symbol, day). Per-symbol failures are recorded in the
/// report; a missing or empty data directory throws ConfigError.
RunReport run_pipeline(const RunConfig& config);

/// Processes one symbol from already-loaded records; used by run_pipeline
/// and by callers that hold data in memory. Each element of `days` is one
/// trading day.
struct DayInput {
    TradingDay day = 0;
    std::vector<RawQuote> quotes;
    std::vector<RawTrade> trades;
};
SymbolReport analyze_symbol(const std::string& symbol, std::vector<DayInput> days, const RunConfig& config);

/// A rendered table: header plus string cells.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

Table impact_summary(const RunReport& report);
Table depth_fit(const RunReport& report);
Table trade_imbalance(const RunReport& report);
Table volume_scaling(const RunReport& report);
Table window_detail(const RunReport& report);
Table rejection_counts(const RunReport& report);
Table day_counts(const RunReport& report);
Table run_config(const RunReport& report);
Table skipped_windows(const RunReport& report);
Table symbol_errors(const RunReport& report);
std::vector<Table> profile_tables(const RunReport& report);

void write_table_csv(std::ostream& out, const Table& table);

/// Writes every table in each requested format into out_dir (created if
/// needed) as <table>.csv / <table>.json, plus buckets_<SYMBOL>.csv per
/// symbol. Throws IoError when the directory cannot be written.
void emit_reports(const RunReport& report, const std::filesystem::path& out_dir,
                  const std::set<ReportFormat>& formats);

}  // namespace ofi
