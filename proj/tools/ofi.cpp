// ofi: command-line front end.
//
//   ofi analyze    --data DIR [--config FILE] [flags]   full pipeline + reports
//   ofi simulate   --out DIR [--symbol S] [--days N]    stylized-book data set
//   ofi clt-check  [--replications N] [--rate L] ...    normalized-OFI KS test
//   ofi oracle     --input FILE [--nw-lags L]           OLS reference numbers
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ofi/errors.hpp"
#include "ofi/ingest.hpp"
#include "ofi/ols.hpp"
#include "ofi/pipeline.hpp"
#include "ofi/synth.hpp"
#include "ofi/text.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct AnalyzeArgs {
    std::string config_file;
    std::string data;
    std::vector<std::string> symbols;
    std::string from;
    std::string to;
    std::optional<int> dt;
    std::optional<int> window;
    std::optional<double> tick_size;
    std::string trade_test;
    std::optional<double> spread_pct;
    std::optional<int> nw_lags;
    bool quadratic = false;
    bool drop_empty = false;
    bool exclude_price_changing = false;
    std::optional<std::size_t> min_buckets;
    std::optional<std::size_t> min_depth_windows;
    std::string out;
    std::vector<std::string> formats;
    std::optional<std::uint64_t> seed;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ofi::IoError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ofi::TradingDay date_arg(const std::string& s) {
    auto d = ofi::text::parse_date(s);
    if (!d) {
        throw ofi::ConfigError("bad date: " + s);
    }
    return *d;
}

int run_analyze(const AnalyzeArgs& a) {
    ofi::RunConfig c;
    if (!a.config_file.empty()) {
        ofi::apply_config_json(c, read_file(a.config_file));
    }
    if (!a.data.empty()) c.data_dir = a.data;
    if (!a.symbols.empty()) c.symbols = a.symbols;
    if (!a.from.empty()) c.date_from = date_arg(a.from);
    if (!a.to.empty()) c.date_to = date_arg(a.to);
    if (a.dt) c.bucket_seconds = *a.dt;
    if (a.window) c.window_seconds = *a.window;
    if (a.tick_size) c.tick_size = *a.tick_size;
    if (!a.trade_test.empty()) c.trade_test = a.trade_test == "tick" ? ofi::TradeTest::tick : ofi::TradeTest::quote;
    if (a.spread_pct) c.spread_percentile = *a.spread_pct;
    if (a.nw_lags) c.nw_lags = *a.nw_lags;
    if (a.quadratic) c.quadratic = true;
    if (a.drop_empty) c.drop_empty_buckets = true;
    if (a.exclude_price_changing) c.exclude_price_changing = true;
    if (a.min_buckets) c.min_buckets = *a.min_buckets;
    if (a.min_depth_windows) c.min_depth_windows = *a.min_depth_windows;
    if (!a.out.empty()) c.out_dir = a.out;
    if (!a.formats.empty()) {
        c.formats.clear();
        for (const auto& f : a.formats) {
            c.formats.insert(f == "json" ? ofi::ReportFormat::json : ofi::ReportFormat::csv);
        }
    }
    if (a.seed) c.seed = *a.seed;

    const ofi::RunReport report = ofi::run_pipeline(c);
    ofi::emit_reports(report, c.out_dir, c.formats);
    for (const auto& s : report.symbols) {
        if (s.ok) {
            std::cerr << s.symbol << ": " << s.impact.size() << " windows fitted\n";
        } else {
            std::cerr << s.symbol << ": FAILED: " << s.error << '\n';
        }
    }
    std::cerr << "reports written to " << c.out_dir.string() << '\n';
    return report.exit_code();
}

struct SimulateArgs {
    std::string out;
    std::string symbol = "SYN";
    int days = 1;
    std::string start_date = "2010-04-01";
    ofi::SynthParams params;
    std::string size_kind = "uniform";
};

void write_or_throw(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ofi::IoError("cannot write " + path.string());
    }
    writer(out);
    if (!out) {
        throw ofi::IoError("write failed for " + path.string());
    }
}

int run_simulate(SimulateArgs a) {
    using namespace std::chrono;
    if (a.days < 1) {
        throw ofi::ConfigError("--days must be at least 1");
    }
    if (a.size_kind == "constant") {
        a.params.sizes.kind = ofi::SizeDistribution::Kind::constant;
    } else if (a.size_kind == "geometric") {
        a.params.sizes.kind = ofi::SizeDistribution::Kind::geometric;
    } else {
        a.params.sizes.kind = ofi::SizeDistribution::Kind::uniform;
    }
    const ofi::TradingDay first = date_arg(a.start_date);
    sys_days date = year_month_day{year{first / 10000}, month{static_cast<unsigned>(first / 100 % 100)},
                                   day{static_cast<unsigned>(first % 100)}};
    const fs::path dir = fs::path(a.out) / a.symbol;
    fs::create_directories(dir);
    for (int i = 0; i < a.days; ++i) {
        while (weekday{date} == Saturday || weekday{date} == Sunday) {
            date += days{1};
        }
        const year_month_day ymd{date};
        ofi::SynthParams p = a.params;
        p.day = static_cast<int>(ymd.year()) * 10000 + static_cast<int>(static_cast<unsigned>(ymd.month())) * 100 +
                static_cast<int>(static_cast<unsigned>(ymd.day()));
        p.seed = a.params.seed + static_cast<std::uint64_t>(i);
        const auto sim = ofi::simulate_stylized_book(p);
        const std::string stem = ofi::text::format_date(p.day);
        write_or_throw(dir / (stem + "_quotes.csv"), [&](std::ostream& o) { ofi::write_quotes_csv(o, sim.quotes); });
        write_or_throw(dir / (stem + "_trades.csv"), [&](std::ostream& o) { ofi::write_trades_csv(o, sim.trades); });
        write_or_throw(dir / (stem + "_truth.csv"),
                       [&](std::ostream& o) { ofi::write_ground_truth_csv(o, sim.truth); });
        std::cerr << stem << ": " << sim.truth.events << " events, " << sim.quotes.size() << " quotes, "
                  << sim.trades.size() << " trades\n";
        date += days{1};
    }
    return 0;
}

struct CltArgs {
    std::size_t replications = 1000;
    ofi::ScalingParams scaling;
    double horizon = 1000.0;
    std::uint64_t seed = 42;
    std::string contributions = "gaussian";
};

int run_clt(CltArgs a) {
    if (a.contributions == "rademacher") {
        a.scaling.contributions = ofi::ContributionDistribution::rademacher;
    } else if (a.contributions == "uniform") {
        a.scaling.contributions = ofi::ContributionDistribution::uniform;
    }
    const auto r = ofi::clt_check(a.replications, a.scaling, a.horizon, a.seed);
    ordered_json j;
    j["replications"] = a.replications;
    j["events_expected"] = a.scaling.event_rate * a.horizon;
    j["ks_statistic"] = r.ks.statistic;
    j["p_value"] = r.ks.p_value;
    j["critical_5pct"] = ofi::ks_critical_5pct(r.ks.n);
    j["redraws"] = r.redraws;
    std::cout << j.dump(2) << '\n';
    return 0;
}

/// Reads `y,x1,...,xk` (header required) and prints coefficient, SE and t
/// for classical, HC0 and Newey-West fits with an intercept.
int run_oracle(const std::string& input, int nw_lags) {
    std::istringstream in(read_file(input));
    std::string line;
    if (!std::getline(in, line)) {
        throw ofi::FormatError("empty oracle fixture");
    }
    std::vector<std::string> names;
    {
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) {
            names.emplace_back(ofi::text::trim(cell));
        }
    }
    if (names.size() < 2) {
        throw ofi::FormatError("oracle fixture needs y and at least one regressor");
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (ofi::text::trim(line).empty()) {
            continue;
        }
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) {
            row.push_back(std::stod(std::string(ofi::text::trim(cell))));
        }
        if (row.size() != names.size()) {
            throw ofi::FormatError("ragged row in oracle fixture");
        }
        rows.push_back(std::move(row));
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto k = static_cast<Eigen::Index>(names.size());
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = rows[static_cast<std::size_t>(i)][0];
        X(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < k; ++j) {
            X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    std::vector<std::string> labels{"const"};
    labels.insert(labels.end(), names.begin() + 1, names.end());

    ordered_json j;
    j["observations"] = n;
    j["columns"] = labels;
    for (const auto& mode : {ofi::SeMode::classical(), ofi::SeMode::white(), ofi::SeMode::newey_west(nw_lags)}) {
        const auto fit = ofi::ols(y, X, mode, labels);
        ordered_json f;
        f["coefficients"] = std::vector<double>(fit.coefficients.begin(), fit.coefficients.end());
        f["std_errors"] = std::vector<double>(fit.std_errors.begin(), fit.std_errors.end());
        f["t_stats"] = std::vector<double>(fit.t_stats.begin(), fit.t_stats.end());
        f["r_squared"] = fit.r_squared;
        j[mode.label()] = f;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Order flow imbalance analytics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ofi::kToolVersion));

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "Run the pipeline over a data directory and write reports");
    analyze->add_option("--config", aa.config_file, "JSON config file; flags override it")->check(CLI::ExistingFile);
    analyze->add_option("--data", aa.data, "Data directory: <data>/<SYMBOL>/<YYYY-MM-DD>_{quotes,trades}.csv");
    analyze->add_option("--symbols", aa.symbols, "Symbols to analyze (default: every subdirectory)")->delimiter(',');
    analyze->add_option("--from", aa.from, "First date, YYYY-MM-DD");
    analyze->add_option("--to", aa.to, "Last date, YYYY-MM-DD");
    analyze->add_option("--dt", aa.dt, "Bucket length in seconds (default 10)");
    analyze->add_option("--window", aa.window, "Window length in seconds (default 1800)");
    analyze->add_option("--tick-size", aa.tick_size, "Tick size in dollars (default 0.01)");
    analyze->add_option("--trade-test", aa.trade_test, "Trade signing rule")->check(CLI::IsMember({"quote", "tick"}));
    analyze->add_option("--spread-pct", aa.spread_pct, "Spread filter percentile in (0, 1] (default 0.95)");
    analyze->add_option("--nw-lags", aa.nw_lags, "Newey-West lag count for the depth fit");
    analyze->add_flag("--quadratic", aa.quadratic, "Also fit the quadratic impact term");
    analyze->add_flag("--drop-empty-buckets", aa.drop_empty, "Drop buckets without events from regressions");
    analyze->add_flag("--exclude-price-changing", aa.exclude_price_changing,
                      "Leave events that move a best price out of OFI");
    analyze->add_option("--min-buckets", aa.min_buckets, "Minimum usable buckets per window (default 30)");
    analyze->add_option("--min-depth-windows", aa.min_depth_windows, "Minimum windows for the depth fit (default 30)");
    analyze->add_option("--out", aa.out, "Output directory (default ofi_report)");
    analyze->add_option("--format", aa.formats, "Report formats")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "json"}));
    analyze->add_option("--seed", aa.seed, "Seed recorded in the report");

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Write a stylized-book data set with ground truth");
    simulate->add_option("--out", sa.out, "Output data directory")->required();
    simulate->add_option("--symbol", sa.symbol, "Symbol directory name");
    simulate->add_option("--days", sa.days, "Number of trading days");
    simulate->add_option("--start-date", sa.start_date, "First date, YYYY-MM-DD");
    simulate->add_option("--depth", sa.params.depth, "Queue depth D in shares");
    simulate->add_option("--rate", sa.params.event_rate, "Events per second");
    simulate->add_option("--horizon", sa.params.horizon, "Seconds simulated after the open");
    simulate->add_option("--size-dist", sa.size_kind, "Order sizes")
        ->check(CLI::IsMember({"constant", "uniform", "geometric"}));
    simulate->add_option("--size-lo", sa.params.sizes.lo, "Constant size, or uniform lower bound");
    simulate->add_option("--size-hi", sa.params.sizes.hi, "Uniform upper bound");
    simulate->add_option("--size-mean", sa.params.sizes.mean, "Geometric mean size");
    simulate->add_option("--improve-prob", sa.params.improvement_probability,
                         "Chance a limit order improves a wide spread");
    simulate->add_option("--tick-size", sa.params.tick_size, "Tick size in dollars");
    simulate->add_option("--seed", sa.params.seed, "Seed of the first day; day i uses seed + i");

    CltArgs ca;
    auto* clt = app.add_subcommand("clt-check", "KS test of normalized OFI over i.i.d. event flow");
    clt->add_option("--replications", ca.replications, "Independent horizons");
    clt->add_option("--rate", ca.scaling.event_rate, "Events per second");
    clt->add_option("--trade-fraction", ca.scaling.trade_fraction, "Share of events that are trades");
    clt->add_option("--mean-size", ca.scaling.mean_trade_size, "Mean trade size");
    clt->add_option("--sigma", ca.scaling.contribution_sd, "Standard deviation of a contribution");
    clt->add_option("--contributions", ca.contributions, "Contribution law")
        ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}));
    clt->add_option("--horizon", ca.horizon, "Seconds per replication");
    clt->add_option("--seed", ca.seed, "Seed");

    std::string oracle_input;
    int oracle_lags = 2;
    auto* oracle = app.add_subcommand("oracle", "Print OLS reference numbers for a CSV fixture");
    oracle->add_option("--input", oracle_input, "CSV with header y,x1,...")->required()->check(CLI::ExistingFile);
    oracle->add_option("--nw-lags", oracle_lags, "Newey-West lag count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*analyze) return run_analyze(aa);
        if (*simulate) return run_simulate(sa);
        if (*clt) return run_clt(ca);
        if (*oracle) return run_oracle(oracle_input, oracle_lags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
