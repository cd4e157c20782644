#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ofi/errors.hpp"
#include "ofi/ingest.hpp"
#include "ofi/pipeline.hpp"
#include "ofi/synth.hpp"
#include "ofi/text.hpp"

namespace fs = std::filesystem;
using namespace ofi;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("ofi_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_day(const fs::path& dir, const SimulationOutput& sim, TradingDay day) {
    fs::create_directories(dir);
    const std::string stem = text::format_date(day);
    std::ofstream q(dir / (stem + "_quotes.csv"), std::ios::binary);
    write_quotes_csv(q, sim.quotes);
    std::ofstream t(dir / (stem + "_trades.csv"), std::ios::binary);
    write_trades_csv(t, sim.trades);
}

void simulate_symbol(const fs::path& data, const std::string& symbol, Shares depth, int days) {
    for (int d = 0; d < days; ++d) {
        SynthParams p;
        p.depth = depth;
        p.sizes.lo = 1;
        p.sizes.hi = depth;
        p.day = 20100405 + d;
        p.seed = 100 + static_cast<std::uint64_t>(d);
        write_day(data / symbol, simulate_stylized_book(p), p.day);
    }
}

RunConfig config_for(const fs::path& data, const fs::path& out) {
    RunConfig c;
    c.data_dir = data;
    c.out_dir = out;
    return c;
}

}  // namespace

TEST(Pipeline, SyntheticDayRecoversImpact) {
    TempDir tmp;
    simulate_symbol(tmp.path() / "data", "SYN", 50, 1);
    const auto report = run_pipeline(config_for(tmp.path() / "data", tmp.path() / "out"));
    ASSERT_EQ(report.symbols.size(), 1u);
    ASSERT_TRUE(report.symbols[0].ok) << report.symbols[0].error;
    EXPECT_EQ(report.exit_code(), 0);
    const Table impact = impact_summary(report);
    ASSERT_EQ(impact.rows.size(), 2u);  // symbol + average
    EXPECT_EQ(impact.rows[0][0], "SYN");
    const double beta = std::stod(impact.rows[0][3]);
    EXPECT_NEAR(beta, 0.01, 0.0005);
    // A single day has too few windows for the depth fit; that is reported.
    EXPECT_FALSE(report.symbols[0].depth);
    EXPECT_FALSE(report.symbols[0].depth_error.empty());
    for (const auto& f : report.symbols[0].files) {
        EXPECT_EQ(f.stats.parsed, f.stats.accepted + f.stats.rejected);
    }
}

TEST(Pipeline, EmptyOrMissingDataDirectoryIsFatal) {
    TempDir tmp;
    fs::create_directories(tmp.path() / "empty");
    EXPECT_THROW(run_pipeline(config_for(tmp.path() / "empty", tmp.path() / "out")), ConfigError);
    EXPECT_THROW(run_pipeline(config_for(tmp.path() / "missing", tmp.path() / "out")), ConfigError);
}

TEST(Pipeline, CorruptSymbolIsIsolated) {
    TempDir tmp;
    const fs::path data = tmp.path() / "data";
    SynthParams p;
    p.depth = 20;
    p.sizes.hi = 20;
    p.horizon = 7200;
    p.day = 20100405;
    write_day(data / "GOOD", simulate_stylized_book(p), p.day);
    fs::create_directories(data / "BAD");
    std::ofstream(data / "BAD" / "2010-04-05_quotes.csv") << "this,is,not,the,header\n1,2,3\n";
    std::ofstream(data / "BAD" / "2010-04-05_trades.csv") << "date,time,exchange,price,size,corr,cond\n";
    const auto report = run_pipeline(config_for(data, tmp.path() / "out"));
    ASSERT_EQ(report.symbols.size(), 2u);
    EXPECT_EQ(report.symbols[0].symbol, "BAD");
    EXPECT_FALSE(report.symbols[0].ok);
    EXPECT_TRUE(report.symbols[1].ok);
    EXPECT_EQ(report.exit_code(), 2);
    const Table errors = symbol_errors(report);
    ASSERT_GE(errors.rows.size(), 1u);
    EXPECT_EQ(errors.rows[0][0], "BAD");
    EXPECT_EQ(errors.rows[0][1], "symbol");
}

TEST(Pipeline, MissingTradeFileIsPerSymbolError) {
    TempDir tmp;
    const fs::path data = tmp.path() / "data";
    fs::create_directories(data / "X");
    std::ofstream(data / "X" / "2010-04-05_quotes.csv") << "date,time,exchange,bid,bidsize,ask,asksize,mode\n";
    const auto report = run_pipeline(config_for(data, tmp.path() / "out"));
    ASSERT_EQ(report.symbols.size(), 1u);
    EXPECT_FALSE(report.symbols[0].ok);
    EXPECT_NE(report.symbols[0].error.find("trade"), std::string::npos);
}

TEST(Pipeline, NamedSymbolWithoutDirectory) {
    TempDir tmp;
    simulate_symbol(tmp.path() / "data", "SYN", 20, 1);
    auto c = config_for(tmp.path() / "data", tmp.path() / "out");
    c.symbols = {"SYN", "NOPE"};
    const auto report = run_pipeline(c);
    ASSERT_EQ(report.symbols.size(), 2u);
    EXPECT_TRUE(report.symbols[0].ok);
    EXPECT_FALSE(report.symbols[1].ok);
}

TEST(Pipeline, ReportsAreCompleteDeterministicAndDocumented) {
    TempDir tmp;
    const fs::path data = tmp.path() / "data";
    simulate_symbol(data, "AAA", 20, 3);
    simulate_symbol(data, "BBB", 60, 3);
    auto c = config_for(data, tmp.path() / "out1");
    c.quadratic = true;
    c.formats = {ReportFormat::csv, ReportFormat::json};
    const auto first = run_pipeline(c);
    emit_reports(first, tmp.path() / "out1", c.formats);
    emit_reports(run_pipeline(c), tmp.path() / "out2", c.formats);

    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(tmp.path() / "out1")) {
        names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    for (const char* table : {"impact_summary", "depth_fit", "trade_imbalance", "volume_scaling",
                              "window_detail", "rejection_counts", "day_counts", "skipped_windows",
                              "symbol_errors", "run_config", "profile_beta", "profile_depth", "profile_var_dp",
                              "profile_var_ofi", "profile_beta2_var_ofi"}) {
        for (const char* ext : {".csv", ".json"}) {
            const std::string file = std::string(table) + ext;
            EXPECT_TRUE(std::binary_search(names.begin(), names.end(), file)) << file;
        }
    }
    EXPECT_TRUE(std::binary_search(names.begin(), names.end(), "buckets_AAA.csv"));
    for (const auto& n : names) {
        EXPECT_EQ(slurp(tmp.path() / "out1" / n), slurp(tmp.path() / "out2" / n)) << n;
    }

    const std::string depth_table = slurp(tmp.path() / "out1" / "depth_fit.csv");
    const std::string header = depth_table.substr(0, depth_table.find('\n') + 1);
    EXPECT_EQ(header, slurp(std::string(OFI_FIXTURE_DIR) + "/report/depth_fit_header.csv"));
    ASSERT_TRUE(first.symbols[0].depth) << first.symbols[0].depth_error;
    EXPECT_EQ(first.symbols[0].depth->windows_used, 39u);

    const Table impact = impact_summary(first);
    ASSERT_EQ(impact.rows.size(), 3u);
    EXPECT_EQ(impact.rows[2][0], "Average");
    EXPECT_NEAR(std::stod(impact.rows[0][3]), 1.0 / 40, 0.05 / 40);
    EXPECT_NEAR(std::stod(impact.rows[1][3]), 1.0 / 120, 0.05 / 120);
    EXPECT_FALSE(impact.rows[0][5].empty());  // quadratic term reported

    const std::string config = slurp(tmp.path() / "out1" / "run_config.csv");
    EXPECT_NE(config.find("tool_version," + std::string(kToolVersion)), std::string::npos);
    EXPECT_NE(config.find("dt,10"), std::string::npos);
    EXPECT_NE(config.find("spread_pct,0.95"), std::string::npos);

    const Table rej = rejection_counts(first);
    EXPECT_EQ(rej.rows.size(), 12u);
    for (const auto& row : rej.rows) {
        EXPECT_EQ(row.back(), "1");
    }
}

TEST(Pipeline, UnwritableOutputIsIoError) {
    TempDir tmp;
    std::ofstream(tmp.path() / "file") << "x";
    RunReport empty;
    EXPECT_THROW(emit_reports(empty, tmp.path() / "file" / "sub", {ReportFormat::csv}), IoError);
}

TEST(Config, JsonOverlayAndEcho) {
    RunConfig c;
    apply_config_json(c, R"({"data": "d", "symbols": ["A", "B"], "from": "2010-04-01", "dt": 5,
                             "window": 900, "trade_test": "tick", "nw_lags": 3, "quadratic": true,
                             "format": ["csv", "json"], "seed": 7})");
    EXPECT_EQ(c.data_dir, "d");
    EXPECT_EQ(c.symbols.size(), 2u);
    EXPECT_EQ(c.date_from, 20100401);
    EXPECT_EQ(c.bucket_seconds, 5);
    EXPECT_EQ(c.window_seconds, 900);
    EXPECT_EQ(c.trade_test, TradeTest::tick);
    EXPECT_EQ(c.nw_lags, 3);
    EXPECT_TRUE(c.quadratic);
    EXPECT_EQ(c.formats.size(), 2u);
    EXPECT_EQ(c.seed, 7u);
    RunConfig back;
    apply_config_json(back, config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
}

TEST(Config, Rejections) {
    RunConfig c;
    EXPECT_THROW(apply_config_json(c, R"({"bogus": 1})"), ConfigError);
    EXPECT_THROW(apply_config_json(c, R"({"dt": "ten"})"), ConfigError);
    EXPECT_THROW(apply_config_json(c, "not json"), ConfigError);
    c.bucket_seconds = 7;
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.spread_percentile = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, Defaults) {
    RunConfig c;
    EXPECT_EQ(c.bucket_seconds, 10);
    EXPECT_EQ(c.window_seconds, 1800);
    EXPECT_DOUBLE_EQ(c.tick_size, 0.01);
    EXPECT_EQ(c.trade_test, TradeTest::quote);
    EXPECT_DOUBLE_EQ(c.spread_percentile, 0.95);
    EXPECT_FALSE(c.nw_lags);
    EXPECT_FALSE(c.quadratic);
    EXPECT_FALSE(c.drop_empty_buckets);
    EXPECT_FALSE(c.exclude_price_changing);
    EXPECT_NO_THROW(c.validate());
}
