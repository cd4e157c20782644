// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any
// failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "ofi/econometrics.hpp"
#include "ofi/flow.hpp"
#include "ofi/ingest.hpp"
#include "ofi/ks.hpp"
#include "ofi/ols.hpp"
#include "ofi/pipeline.hpp"
#include "ofi/synth.hpp"
#include "ofi/text.hpp"

using namespace ofi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TradingDay day_number(int i) {
    // Consecutive calendar days in 2010; weekends do not matter here.
    static const int month_days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int m = 0;
    int d = i;
    while (d >= month_days[m]) {
        d -= month_days[m];
        ++m;
    }
    return 20100000 + (m + 1) * 100 + d + 1;
}

// 1. Event labels recovered exactly from the emitted quote records.
Outcome round_trip() {
    const auto t0 = std::chrono::steady_clock::now();
    const EventMix mixes[] = {
        {},
        {0.05, 0.05, 0.35, 0.35, 0.1, 0.1},
        {0.2, 0.2, 0.3, 0.3, 0.0, 0.0},
        {0.0, 0.0, 0.3, 0.3, 0.2, 0.2},
        {0.15, 0.05, 0.3, 0.2, 0.1, 0.2},
        {0.1, 0.1, 0.25, 0.25, 0.15, 0.15},
    };
    std::size_t records = 0;
    std::size_t events = 0;
    std::size_t mismatches = 0;
    std::uint64_t seed = 11;
    for (const auto& mix : mixes) {
        SynthParams p;
        p.depth = 40;
        p.sizes.lo = 1;
        p.sizes.hi = 60;
        p.event_rate = 2.0;
        p.mix = mix;
        p.improvement_probability = 0.25;
        p.seed = seed++;
        const auto sim = simulate_stylized_book(p);
        std::ostringstream csv;
        write_quotes_csv(csv, sim.quotes);
        std::istringstream in(csv.str());
        const auto loaded = load_quotes(in, p.day);
        const auto classified = classify_events(build_nbbo(loaded.records));
        events += sim.truth.events;
        records += sim.truth.rows.size();
        if (classified.size() != sim.truth.rows.size()) {
            mismatches += std::max(classified.size(), sim.truth.rows.size());
            continue;
        }
        for (std::size_t i = 0; i < classified.size(); ++i) {
            mismatches += classified[i].e != static_cast<double>(sim.truth.rows[i].e) ? 1 : 0;
        }
    }
    const double elapsed = seconds_since(t0);
    return {mismatches == 0 && events >= 100000 && elapsed < 10.0,
            fmt("%zu events (%zu records) over 6 mixes, %zu mismatches, %.2f s", events, records, mismatches,
                elapsed)};
}

// 2. Linear impact coefficient 1/(2D) recovered from stylized-book output.
Outcome impact_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (Shares depth : {Shares{5}, Shares{50}, Shares{500}}) {
        RunConfig config;
        config.bucket_seconds = 60;
        config.spread_percentile = 1.0;
        std::vector<DayInput> days;
        for (int d = 0; d < 16; ++d) {
            SynthParams p;
            p.depth = depth;
            p.sizes.lo = 1;
            p.sizes.hi = depth;
            p.event_rate = 2.0;
            p.day = day_number(d);
            p.seed = 1000 + static_cast<std::uint64_t>(depth) * 100 + static_cast<std::uint64_t>(d);
            auto sim = simulate_stylized_book(p);
            days.push_back({p.day, std::move(sim.quotes), std::move(sim.trades)});
        }
        const auto report = analyze_symbol("SYN", std::move(days), config);
        double beta = 0.0;
        double r2 = 0.0;
        for (const auto& w : report.impact) {
            beta += w.beta;
            r2 += w.r_squared;
        }
        const auto n = static_cast<double>(report.impact.size());
        beta /= n;
        r2 /= n;
        const double target = 1.0 / (2.0 * static_cast<double>(depth));
        const double rel = std::abs(beta - target) / target;
        const bool ok = report.impact.size() >= 200 && rel <= 0.05 && r2 >= 0.95;
        pass = pass && ok;
        detail += fmt("D=%lld beta=%.6g (target %.6g, %.2f%%) R2=%.4f windows=%zu; ", static_cast<long long>(depth),
                      beta, target, 100.0 * rel, r2, report.impact.size());
    }
    const double elapsed = seconds_since(t0);
    pass = pass && elapsed < 60.0;
    return {pass, detail + fmt("%.1f s", elapsed)};
}

std::vector<ImpactWindowResult> depth_windows(std::size_t n, double noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(std::log(10.0), std::log(1000.0));
    std::normal_distribution<double> z;
    std::vector<ImpactWindowResult> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ad = std::exp(u(rng));
        out[i].window = i;
        out[i].depth = ad;
        out[i].beta = 0.5 / ad * (1.0 + noise * z(rng));
    }
    return out;
}

// 3. Two-stage depth fit.
Outcome depth_recovery() {
    const auto noisy = depth_regression(depth_windows(1000, 0.05, 7));
    const auto exact = depth_regression(depth_windows(1000, 0.0, 8));
    const bool noisy_ok = noisy.lambda >= 0.95 && noisy.lambda <= 1.05 && noisy.c >= 0.45 && noisy.c <= 0.55;
    const double exact_err = std::max(std::abs(exact.lambda - 1.0), std::abs(exact.c - 0.5) / 0.5);
    return {noisy_ok && exact_err <= 1e-9,
            fmt("noisy lambda=%.4f c=%.4f over %zu windows; noise-free max rel err %.2e", noisy.lambda, noisy.c,
                noisy.windows_used, exact_err)};
}

// 4. Normalized OFI/sqrt(VOL) approaches N(0,1) as the event count grows.
Outcome clt() {
    const auto t0 = std::chrono::steady_clock::now();
    // Sparse trades make the small-sample departure from normality larger
    // than the KS sampling noise at 1000 replications.
    ScalingParams p;
    p.trade_fraction = 0.05;
    const auto large = clt_check(1000, p, 1e4 / p.event_rate, 2024);
    const auto small = clt_check(1000, p, 1e2 / p.event_rate, 2025);
    return {large.ks.p_value > 0.01 && small.ks.statistic > large.ks.statistic,
            fmt("LT=1e4: D=%.4f p=%.3f; LT=1e2: D=%.4f p=%.3g; %.1f s", large.ks.statistic, large.ks.p_value,
                small.ks.statistic, small.ks.p_value, seconds_since(t0))};
}

// 5. Regression engine against the textbook reference.
Outcome ols_oracle() {
    double worst = 0.0;
    bool nw0_exact = true;
    for (const char* file : {"autocorr_one.csv", "hetero_two.csv", "quadratic_three.csv"}) {
        const auto data = oracle::read_regression_csv(std::string(OFI_FIXTURE_DIR) + "/ols/" + file);
        const auto ref = oracle::ols(data.y, data.x, 4);
        const auto n = static_cast<Eigen::Index>(data.y.size());
        const auto k = static_cast<Eigen::Index>(data.x[0].size());
        Eigen::VectorXd y(n);
        Eigen::MatrixXd X(n, k);
        for (Eigen::Index i = 0; i < n; ++i) {
            y[i] = data.y[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < k; ++j) {
                X(i, j) = data.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        }
        const auto hc0 = ols(y, X, SeMode::white());
        const auto nw = ols(y, X, SeMode::newey_west(4));
        const auto nw0 = ols(y, X, SeMode::newey_west(0));
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto J = static_cast<std::size_t>(j);
            worst = std::max({worst, rel(hc0.coefficients[j], ref.coefficients[J]),
                              rel(hc0.std_errors[j], ref.se_white[J]), rel(nw.std_errors[j], ref.se_newey_west[J])});
            nw0_exact = nw0_exact && nw0.std_errors[j] == hc0.std_errors[j];
        }
    }
    return {worst <= 1e-10 && nw0_exact,
            fmt("max rel diff %.2e on 3 fixtures; NW(0)==HC0 %s", worst, nw0_exact ? "exactly" : "NOT exactly")};
}

// Per-bucket flow from i.i.d. events; `rate_of(k)` sets each bucket's
// arrival rate.
BucketSeries iid_series(TradingDay day, const ScalingParams& base, const std::function<double(std::size_t)>& rate_of,
                        std::uint64_t seed) {
    BucketSeries s;
    s.day = day;
    const std::size_t n = s.grid.bucket_count();
    s.resize(n, s.grid.window_count());
    for (std::size_t k = 0; k < n; ++k) {
        ScalingParams p = base;
        p.event_rate = rate_of(k);
        const auto flow = generate_iid_flow(p, s.grid.bucket_seconds, seed * 100003 + k);
        double ofi = 0.0;
        for (const auto& e : flow.events) {
            ofi += e.e;
        }
        double ti = 0.0;
        double vol = 0.0;
        for (const auto& t : flow.trades) {
            ti += static_cast<double>(t.buy_size() - t.sell_size());
            vol += static_cast<double>(t.trade.size);
        }
        s.ofi[k] = ofi;
        s.ti[k] = ti;
        s.vol[k] = vol;
        s.trade_count[k] = static_cast<int>(flow.trades.size());
        s.event_count[k] = static_cast<int>(flow.events.size());
        s.defined[k] = 1;
    }
    return s;
}

// 6. Trade imbalance adds nothing once OFI is in the regression.
Outcome horse_race() {
    ScalingParams p;
    p.event_rate = 2.0;
    std::mt19937_64 rng(66);
    std::normal_distribution<double> z;
    std::size_t windows = 0;
    std::size_t ti_insignificant = 0;
    std::size_t ofi_significant = 0;
    for (int d = 0; d < 16; ++d) {
        auto s = iid_series(day_number(d), p, [&](std::size_t) { return p.event_rate; }, 600 + d);
        for (std::size_t k = 0; k < s.size(); ++k) {
            s.dp_ticks[k] = 0.01 * s.ofi[k] + 2.0 * z(rng);
        }
        const auto r = comparison_regressions(s, ComparisonFamily::levels);
        for (const auto& w : r.windows) {
            if (!w.both) {
                continue;
            }
            ++windows;
            ofi_significant += w.both->significant(1) ? 1 : 0;
            ti_insignificant += w.both->significant(2) ? 0 : 1;
        }
    }
    const double ti_share = static_cast<double>(ti_insignificant) / static_cast<double>(windows);
    const double ofi_share = static_cast<double>(ofi_significant) / static_cast<double>(windows);
    return {windows >= 200 && ti_share >= 0.80 && ofi_share >= 0.95,
            fmt("%zu windows: TI insignificant in %.1f%%, OFI significant in %.1f%%", windows, 100 * ti_share,
                100 * ofi_share)};
}

// 7. Scaling exponent of |dP| in VOL and the magnitude horse race.
Outcome scaling() {
    // Every event is a constant-size trade, so VOL is proportional to the
    // event count and |OFI| grows exactly as VOL^(1/2).
    ScalingParams p;
    p.trade_fraction = 1.0;
    p.trade_sizes = TradeSizeDistribution::constant;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> z;
    std::vector<std::optional<double>> all_h;
    std::size_t fitted = 0;
    std::size_t vol_insignificant = 0;
    for (int d = 0; d < 16; ++d) {
        // Activity varies log-uniformly across buckets between 0.5 and 50
        // events per second.
        std::mt19937_64 activity(7000 + static_cast<std::uint64_t>(d));
        std::uniform_real_distribution<double> u(std::log(0.5), std::log(50.0));
        std::vector<double> rates(TimeGrid{}.bucket_count());
        for (auto& r : rates) {
            r = std::exp(u(activity));
        }
        auto s = iid_series(day_number(d), p, [&](std::size_t k) { return rates[k]; }, 700 + d);
        for (std::size_t k = 0; k < s.size(); ++k) {
            s.dp_ticks[k] = 0.01 * s.ofi[k] + 0.5 * z(rng);
        }
        const auto h = estimate_scaling_exponent(s);
        all_h.insert(all_h.end(), h.per_window.begin(), h.per_window.end());
        const auto r = comparison_regressions(s, ComparisonFamily::magnitudes, h.per_window);
        for (const auto& w : r.windows) {
            if (!w.both) {
                continue;
            }
            ++fitted;
            vol_insignificant += w.both->significant(2) ? 0 : 1;
        }
    }
    const auto stats = mean_sd(all_h);
    const double share = static_cast<double>(vol_insignificant) / static_cast<double>(fitted);
    return {stats.count >= 200 && stats.mean >= 0.35 && stats.mean <= 0.65 && share > 0.5,
            fmt("mean H=%.4f (sd %.4f) over %zu windows; VOL term insignificant in %.1f%% of %zu", stats.mean,
                stats.sd, stats.count, 100 * share, fitted)};
}

// 8. var[dP] - beta^2 var[OFI] recovers the injected noise variance.
Outcome variance() {
    ScalingParams p;
    p.event_rate = 2.0;
    const double v = 4.0;
    auto run = [&](double noise_var, std::uint64_t seed, double& mean_gap, double& worst_identity,
                   std::size_t& windows) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> z;
        mean_gap = 0.0;
        worst_identity = 0.0;
        windows = 0;
        for (int d = 0; d < 39; ++d) {
            auto s = iid_series(day_number(d), p, [&](std::size_t) { return p.event_rate; }, seed * 1000 + d);
            for (std::size_t k = 0; k < s.size(); ++k) {
                s.dp_ticks[k] = 0.3 + 0.01 * s.ofi[k] + std::sqrt(noise_var) * z(rng);
            }
            const auto fits = impact_regression(s);
            for (const auto& w : variance_decomposition(s, fits.windows)) {
                mean_gap += w.var_dp - w.beta2_var_ofi;
                worst_identity = std::max(worst_identity, std::abs(w.var_dp - w.beta2_var_ofi) / w.var_dp);
                ++windows;
            }
        }
        mean_gap /= static_cast<double>(windows);
    };
    double gap = 0.0;
    double identity_noisy = 0.0;
    std::size_t n_noisy = 0;
    run(v, 81, gap, identity_noisy, n_noisy);
    double gap0 = 0.0;
    double identity = 0.0;
    std::size_t n0 = 0;
    run(0.0, 82, gap0, identity, n0);
    const double rel = std::abs(gap - v) / v;
    return {n_noisy >= 500 && rel <= 0.10 && identity <= 1e-6,
            fmt("v=%.1f: mean gap %.4f (%.2f%%) over %zu windows; v=0: max rel gap %.2e over %zu windows", v, gap,
                100 * rel, n_noisy, identity, n0)};
}

// 9. NBBO golden files, checked against the stored output and a brute-force
// recomputation.
Outcome nbbo_golden() {
    bool pass = true;
    std::string detail;
    for (const std::string name : {"multi_exchange", "single_exchange"}) {
        const std::string dir = std::string(OFI_FIXTURE_DIR) + "/nbbo/";
        const auto q = load_quotes_file(dir + name + "_quotes.csv", 20100401);
        std::ostringstream fast;
        std::ostringstream brute;
        write_nbbo_csv(fast, build_nbbo(q.records));
        write_nbbo_csv(brute, oracle::brute_nbbo(q.records));
        const bool golden = fast.str() == slurp(dir + name + "_nbbo.csv");
        const bool agree = fast.str() == brute.str();
        pass = pass && golden && agree;
        detail += name + (golden ? " byte-exact" : " DIFFERS") + (agree ? ", matches brute force; " : ", brute force differs; ");
    }
    return {pass, detail};
}

// 10. Full pipeline over one synthetic day of 500,000 quote updates.
Outcome throughput() {
    const fs::path root = fs::temp_directory_path() / ("ofi_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    SynthParams p;
    p.depth = 200;
    p.sizes.lo = 1;
    p.sizes.hi = 200;
    p.event_rate = 500000.0 / 23400.0;
    p.seed = 10;
    p.day = 20100405;
    const auto sim = simulate_stylized_book(p);
    fs::create_directories(root / "data" / "SYN");
    {
        std::ofstream q(root / "data" / "SYN" / "2010-04-05_quotes.csv", std::ios::binary);
        write_quotes_csv(q, sim.quotes);
        std::ofstream t(root / "data" / "SYN" / "2010-04-05_trades.csv", std::ios::binary);
        write_trades_csv(t, sim.trades);
    }
    RunConfig config;
    config.data_dir = root / "data";
    config.min_depth_windows = 4;
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_pipeline(config);
    emit_reports(report, root / "out", config.formats);
    const double elapsed = seconds_since(t0);
    const std::size_t quotes = report.symbols.empty() || report.symbols[0].files.empty()
                                   ? 0
                                   : report.symbols[0].files[0].stats.accepted;
    fs::remove_all(root);
    const bool ok = report.exit_code() == 0 && quotes >= 500000 && elapsed < 5.0;
    return {ok, fmt("%zu quotes, %zu trades in %.2f s", quotes, sim.trades.size(), elapsed)};
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"event round trip", round_trip},  {"impact recovery", impact_recovery}, {"depth fit", depth_recovery},
        {"flow normality", clt},           {"regression oracle", ols_oracle},    {"trade horse race", horse_race},
        {"scaling exponent", scaling},     {"variance gap", variance},           {"NBBO golden", nbbo_golden},
        {"throughput", throughput},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
