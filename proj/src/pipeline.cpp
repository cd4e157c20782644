#include "ofi/pipeline.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

#include "ofi/errors.hpp"
#include "ofi/flow.hpp"
#include "ofi/text.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace ofi {

void RunConfig::validate() const {
    try {
        grid().validate();
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    if (!(spread_percentile > 0.0 && spread_percentile <= 1.0)) {
        throw ConfigError("spread percentile must lie in (0, 1]");
    }
    if (nw_lags && *nw_lags < 0) {
        throw ConfigError("Newey-West lag override must be non-negative");
    }
    if (min_buckets < 4 || min_depth_windows < 4) {
        throw ConfigError("regression floors must be at least 4");
    }
    if (formats.empty()) {
        throw ConfigError("at least one report format is required");
    }
    if (date_from && date_to && *date_from > *date_to) {
        throw ConfigError("date range is empty");
    }
}

TimeGrid RunConfig::grid() const {
    TimeGrid g;
    g.bucket_seconds = bucket_seconds;
    g.window_seconds = window_seconds;
    g.tick_size = tick_size;
    return g;
}

void apply_config_json(RunConfig& c, std::string_view json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    auto date = [](const ordered_json& v) -> std::optional<TradingDay> {
        if (v.is_null()) {
            return std::nullopt;
        }
        auto d = text::parse_date(v.get<std::string>());
        if (!d) {
            throw ConfigError("bad date in config: " + v.get<std::string>());
        }
        return *d;
    };
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "data") {
                c.data_dir = v.get<std::string>();
            } else if (key == "symbols") {
                c.symbols = v.get<std::vector<std::string>>();
            } else if (key == "from") {
                c.date_from = date(v);
            } else if (key == "to") {
                c.date_to = date(v);
            } else if (key == "dt") {
                c.bucket_seconds = v.get<int>();
            } else if (key == "window") {
                c.window_seconds = v.get<int>();
            } else if (key == "tick_size") {
                c.tick_size = v.get<double>();
            } else if (key == "trade_test") {
                const auto s = v.get<std::string>();
                if (s != "quote" && s != "tick") {
                    throw ConfigError("trade_test must be 'quote' or 'tick'");
                }
                c.trade_test = s == "quote" ? TradeTest::quote : TradeTest::tick;
            } else if (key == "spread_pct") {
                c.spread_percentile = v.get<double>();
            } else if (key == "nw_lags") {
                c.nw_lags = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
            } else if (key == "quadratic") {
                c.quadratic = v.get<bool>();
            } else if (key == "drop_empty_buckets") {
                c.drop_empty_buckets = v.get<bool>();
            } else if (key == "exclude_price_changing") {
                c.exclude_price_changing = v.get<bool>();
            } else if (key == "min_buckets") {
                c.min_buckets = v.get<std::size_t>();
            } else if (key == "min_depth_windows") {
                c.min_depth_windows = v.get<std::size_t>();
            } else if (key == "out") {
                c.out_dir = v.get<std::string>();
            } else if (key == "format") {
                c.formats.clear();
                for (const auto& f : v) {
                    const auto s = f.get<std::string>();
                    if (s == "csv") {
                        c.formats.insert(ReportFormat::csv);
                    } else if (s == "json") {
                        c.formats.insert(ReportFormat::json);
                    } else {
                        throw ConfigError("unknown report format: " + s);
                    }
                }
            } else if (key == "seed") {
                c.seed = v.get<std::uint64_t>();
            } else {
                throw ConfigError("unknown config key: " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value in config: ") + e.what());
    }
}

std::string config_to_json(const RunConfig& c) {
    ordered_json j;
    j["data"] = c.data_dir.generic_string();
    j["symbols"] = c.symbols;
    j["from"] = c.date_from ? ordered_json(text::format_date(*c.date_from)) : ordered_json(nullptr);
    j["to"] = c.date_to ? ordered_json(text::format_date(*c.date_to)) : ordered_json(nullptr);
    j["dt"] = c.bucket_seconds;
    j["window"] = c.window_seconds;
    j["tick_size"] = c.tick_size;
    j["trade_test"] = c.trade_test == TradeTest::quote ? "quote" : "tick";
    j["spread_pct"] = c.spread_percentile;
    j["nw_lags"] = c.nw_lags ? ordered_json(*c.nw_lags) : ordered_json(nullptr);
    j["quadratic"] = c.quadratic;
    j["drop_empty_buckets"] = c.drop_empty_buckets;
    j["exclude_price_changing"] = c.exclude_price_changing;
    j["min_buckets"] = c.min_buckets;
    j["min_depth_windows"] = c.min_depth_windows;
    j["out"] = c.out_dir.generic_string();
    auto formats = ordered_json::array();
    for (auto f : c.formats) {
        formats.push_back(f == ReportFormat::csv ? "csv" : "json");
    }
    j["format"] = formats;
    j["seed"] = c.seed;
    return j.dump(2);
}

int RunReport::exit_code() const {
    return std::all_of(symbols.begin(), symbols.end(), [](const SymbolReport& s) { return s.ok; }) ? 0 : 2;
}

SymbolReport analyze_symbol(const std::string& symbol, std::vector<DayInput> days, const RunConfig& config) {
    SymbolReport rep;
    rep.symbol = symbol;
    const TimeGrid grid = config.grid();
    RegressionOptions reg;
    reg.min_buckets = config.min_buckets;
    reg.drop_empty = config.drop_empty_buckets;
    BucketOptions bucket_opts;
    bucket_opts.exclude_price_changing = config.exclude_price_changing;

    std::sort(days.begin(), days.end(), [](const DayInput& a, const DayInput& b) { return a.day < b.day; });

    std::vector<std::vector<NbboSnapshot>> books;
    std::vector<NbboSnapshot> all;
    for (const auto& d : days) {
        books.push_back(build_nbbo(d.quotes));
        all.insert(all.end(), books.back().begin(), books.back().end());
    }
    if (all.empty()) {
        throw FormatError("no quotes survived filtering");
    }
    rep.spread_threshold = spread_quantile(all, config.spread_percentile);
    all.clear();
    all.shrink_to_fit();

    for (std::size_t i = 0; i < days.size(); ++i) {
        DayReport dr;
        dr.day = days[i].day;
        dr.snapshots = books[i].size();
        dr.crossed = static_cast<std::size_t>(
            std::count_if(books[i].begin(), books[i].end(), [](const NbboSnapshot& s) { return s.crossed; }));
        const auto kept = drop_wide_spreads(books[i], rep.spread_threshold);
        dr.spread_removed = books[i].size() - kept.size();
        books[i].clear();
        books[i].shrink_to_fit();

        const SigningResult signed_trades = sign_trades(kept, days[i].trades, config.trade_test);
        dr.trades = signed_trades.trades.size();
        dr.trades_unmatched = signed_trades.unmatched;
        const auto events = classify_events(kept);
        dr.events = events.size();
        BucketSeries series = bucketize(events, kept, signed_trades.trades, grid, bucket_opts);
        series.day = days[i].day;
        rep.days.push_back(dr);
        rep.series.push_back(std::move(series));
    }

    auto note_skips = [&](const std::string& stage, const std::vector<SkippedWindow>& skips) {
        for (const auto& s : skips) {
            rep.skipped.push_back({stage, s});
        }
    };

    for (const auto& series : rep.series) {
        auto linear = impact_regression(series, reg);
        note_skips("impact", linear.skipped);
        rep.impact.insert(rep.impact.end(), linear.windows.begin(), linear.windows.end());
        if (config.quadratic) {
            RegressionOptions q = reg;
            q.quadratic = true;
            auto quad = impact_regression(series, q);
            note_skips("impact_quadratic", quad.skipped);
            rep.impact_quadratic.insert(rep.impact_quadratic.end(), quad.windows.begin(), quad.windows.end());
        }

        auto levels = comparison_regressions(series, ComparisonFamily::levels, {}, reg);
        note_skips("trade_imbalance", levels.skipped);
        rep.levels.insert(rep.levels.end(), levels.windows.begin(), levels.windows.end());

        auto exps = estimate_scaling_exponent(series, reg);
        note_skips("scaling_exponent", exps.skipped);
        auto mags = comparison_regressions(series, ComparisonFamily::magnitudes, exps.per_window, reg);
        note_skips("volume", mags.skipped);
        rep.magnitudes.insert(rep.magnitudes.end(), mags.windows.begin(), mags.windows.end());
        rep.exponents.push_back(std::move(exps.per_window));

        auto var = variance_decomposition(series, linear.windows, reg);
        rep.variance.insert(rep.variance.end(), var.begin(), var.end());
    }
    rep.levels_summary = summarize_comparisons(rep.levels);
    rep.magnitudes_summary = summarize_comparisons(rep.magnitudes);
    std::vector<std::optional<double>> flat;
    for (const auto& v : rep.exponents) {
        flat.insert(flat.end(), v.begin(), v.end());
    }
    rep.exponent_stats = mean_sd(flat);

    try {
        DepthOptions dopt;
        dopt.min_windows = config.min_depth_windows;
        dopt.nw_lags = config.nw_lags;
        rep.depth = depth_regression(rep.impact, dopt);
    } catch (const std::exception& e) {
        rep.depth_error = e.what();
    }
    rep.ok = true;
    return rep;
}

namespace {

struct SymbolFiles {
    std::map<TradingDay, fs::path> quotes;
    std::map<TradingDay, fs::path> trades;
};

SymbolFiles scan_symbol_dir(const fs::path& dir, const RunConfig& config) {
    SymbolFiles out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string name = entry.path().filename().string();
        auto take = [&](std::string_view suffix, std::map<TradingDay, fs::path>& into) {
            if (name.size() != 10 + suffix.size() || !name.ends_with(suffix)) {
                return;
            }
            auto day = text::parse_date(std::string_view(name).substr(0, 10));
            if (!day) {
                return;
            }
            if ((config.date_from && *day < *config.date_from) || (config.date_to && *day > *config.date_to)) {
                return;
            }
            into[*day] = entry.path();
        };
        take("_quotes.csv", out.quotes);
        take("_trades.csv", out.trades);
    }
    return out;
}

void add_profiles(RunReport& report) {
    std::vector<SlotObservation> beta, depth, var_dp, var_ofi, beta2;
    for (const auto& s : report.symbols) {
        if (!s.ok) {
            continue;
        }
        for (const auto& w : s.impact) {
            beta.push_back({s.symbol, w.day, w.window, w.beta});
            if (w.depth) {
                depth.push_back({s.symbol, w.day, w.window, *w.depth});
            }
        }
        for (const auto& v : s.variance) {
            if (v.degenerate) {
                continue;
            }
            var_dp.push_back({s.symbol, v.day, v.window, v.var_dp});
            var_ofi.push_back({s.symbol, v.day, v.window, v.var_ofi});
            beta2.push_back({s.symbol, v.day, v.window, v.beta2_var_ofi});
        }
    }
    report.beta_profile = seasonality_profile(beta);
    report.depth_profile = seasonality_profile(depth);
    report.var_dp_profile = seasonality_profile(var_dp);
    report.var_ofi_profile = seasonality_profile(var_ofi);
    report.beta2_var_ofi_profile = seasonality_profile(beta2);
}

}  // namespace

RunReport run_pipeline(const RunConfig& config) {
    config.validate();
    if (config.data_dir.empty() || !fs::is_directory(config.data_dir)) {
        throw ConfigError("data directory does not exist: " + config.data_dir.string());
    }
    std::vector<std::string> symbols = config.symbols;
    if (symbols.empty()) {
        for (const auto& entry : fs::directory_iterator(config.data_dir)) {
            if (entry.is_directory()) {
                symbols.push_back(entry.path().filename().string());
            }
        }
        std::sort(symbols.begin(), symbols.end());
    }
    if (symbols.empty()) {
        throw ConfigError("no symbols to analyze in " + config.data_dir.string());
    }

    RunReport report;
    report.config = config;
    FilterConfig filters;
    for (const auto& symbol : symbols) {
        SymbolReport rep;
        rep.symbol = symbol;
        std::vector<FileReport> files;
        try {
            const fs::path dir = config.data_dir / symbol;
            if (!fs::is_directory(dir)) {
                throw IoError("no directory for symbol " + symbol);
            }
            const SymbolFiles found = scan_symbol_dir(dir, config);
            if (found.quotes.empty() && found.trades.empty()) {
                throw IoError("no quote or trade files for symbol " + symbol);
            }
            std::vector<DayInput> days;
            for (const auto& [day, qpath] : found.quotes) {
                auto tp = found.trades.find(day);
                if (tp == found.trades.end()) {
                    throw IoError("missing trade file for " + text::format_date(day));
                }
                auto q = load_quotes_file(qpath, day, filters);
                files.push_back({qpath.filename().string(), "quotes", q.stats});
                auto t = load_trades_file(tp->second, day, filters);
                files.push_back({tp->second.filename().string(), "trades", t.stats});
                days.push_back({day, std::move(q.records), std::move(t.records)});
            }
            for (const auto& [day, tpath] : found.trades) {
                if (!found.quotes.contains(day)) {
                    throw IoError("missing quote file for " + text::format_date(day));
                }
            }
            rep = analyze_symbol(symbol, std::move(days), config);
        } catch (const std::exception& e) {
            rep = SymbolReport{};
            rep.symbol = symbol;
            rep.ok = false;
            rep.error = e.what();
        }
        rep.files = std::move(files);
        report.symbols.push_back(std::move(rep));
    }
    add_profiles(report);
    return report;
}

}  // namespace ofi
