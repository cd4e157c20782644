#include "ofi/econometrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ofi/errors.hpp"
#include "ofi/flow.hpp"

namespace ofi {

namespace {

/// Usable bucket indices of window i.
std::vector<std::size_t> window_buckets(const BucketSeries& s, std::size_t i, bool drop_empty) {
    const std::size_t per = s.grid.buckets_per_window();
    const std::size_t end = std::min(s.size(), (i + 1) * per);
    std::vector<std::size_t> idx;
    idx.reserve(per);
    for (std::size_t k = i * per; k < end; ++k) {
        if (s.usable(k, drop_empty)) {
            idx.push_back(k);
        }
    }
    return idx;
}

double squared_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::ArrayXd da = a.array() - a.mean();
    const Eigen::ArrayXd db = b.array() - b.mean();
    const double saa = (da * da).sum();
    const double sbb = (db * db).sum();
    if (saa <= 0.0 || sbb <= 0.0) {
        return 0.0;
    }
    const double sab = (da * db).sum();
    return (sab * sab) / (saa * sbb);
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return ss / static_cast<double>(x.size() - 1);
}

void accumulate(SpecSummary& s, const OlsFit& fit) {
    const auto slopes = static_cast<std::size_t>(fit.coefficients.size()) - 1;
    if (s.mean_t.empty()) {
        s.mean_t.assign(slopes, 0.0);
        s.share_significant.assign(slopes, 0.0);
    }
    ++s.windows;
    s.mean_r_squared += fit.r_squared;
    s.mean_f += fit.f_statistic;
    for (std::size_t j = 0; j < slopes && j < s.mean_t.size(); ++j) {
        s.mean_t[j] += fit.t_stats[static_cast<Eigen::Index>(j + 1)];
        s.share_significant[j] += fit.significant(j + 1) ? 1.0 : 0.0;
    }
}

void finish(SpecSummary& s) {
    if (s.windows == 0) {
        return;
    }
    const auto n = static_cast<double>(s.windows);
    s.mean_r_squared /= n;
    s.mean_f /= n;
    for (auto& v : s.mean_t) {
        v /= n;
    }
    for (auto& v : s.share_significant) {
        v /= n;
    }
}

}  // namespace

ImpactResults impact_regression(const BucketSeries& series, const RegressionOptions& options) {
    ImpactResults out;
    static const std::vector<std::string> kNames{"intercept", "ofi", "ofi_abs_ofi"};
    for (std::size_t i = 0; i < series.window_count(); ++i) {
        const auto idx = window_buckets(series, i, options.drop_empty);
        if (idx.size() < options.min_buckets) {
            out.skipped.push_back({series.day, i,
                                   "only " + std::to_string(idx.size()) + " usable buckets (floor " +
                                       std::to_string(options.min_buckets) + ")"});
            continue;
        }
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::VectorXd y(n);
        Eigen::MatrixXd X(n, options.quadratic ? 3 : 2);
        for (Eigen::Index r = 0; r < n; ++r) {
            const std::size_t k = idx[static_cast<std::size_t>(r)];
            const double f = series.ofi[k];
            y[r] = series.dp_ticks[k];
            X(r, 0) = 1.0;
            X(r, 1) = f;
            if (options.quadratic) {
                X(r, 2) = f * std::abs(f);
            }
        }
        OlsFit fit;
        try {
            fit = ols(y, X, SeMode::white(), kNames);
        } catch (const CollinearityError& e) {
            out.skipped.push_back({series.day, i, std::string("degenerate regressor: ") + e.what()});
            continue;
        } catch (const SampleSizeError& e) {
            out.skipped.push_back({series.day, i, e.what()});
            continue;
        }
        ImpactWindowResult w;
        w.day = series.day;
        w.window = i;
        w.observations = idx.size();
        w.alpha = fit.coefficients[0];
        w.t_alpha = fit.t_stats[0];
        w.beta = fit.coefficients[1];
        w.t_beta = fit.t_stats[1];
        w.alpha_significant = fit.significant(0);
        w.beta_significant = fit.significant(1);
        if (options.quadratic) {
            w.gamma = fit.coefficients[2];
            w.t_gamma = fit.t_stats[2];
            w.gamma_significant = fit.significant(2);
        }
        w.r_squared = fit.r_squared;
        w.residual_excess_kurtosis =
            excess_kurtosis(std::span<const double>(fit.residuals.data(), static_cast<std::size_t>(n)));
        w.depth = series.window_depth[i];
        out.windows.push_back(w);
    }
    return out;
}

DepthModelFit depth_regression(std::span<const ImpactWindowResult> windows, const DepthOptions& options) {
    DepthModelFit out;
    std::vector<double> beta, depth;
    for (const auto& w : windows) {
        if (!w.depth || !(*w.depth > 0.0)) {
            ++out.windows_no_depth;
        } else if (!(w.beta > 0.0)) {
            ++out.windows_nonpositive;
        } else {
            beta.push_back(w.beta);
            depth.push_back(*w.depth);
        }
    }
    if (beta.empty() && out.windows_nonpositive > 0) {
        throw EstimationError("every impact coefficient is non-positive; log-depth fit impossible");
    }
    if (beta.size() < options.min_windows) {
        throw SampleSizeError("depth fit needs " + std::to_string(options.min_windows) + " windows, have " +
                              std::to_string(beta.size()));
    }
    out.windows_used = beta.size();
    out.nw_lags = options.nw_lags.value_or(default_newey_west_lags(beta.size()));
    const auto mode = SeMode::newey_west(out.nw_lags);

    const auto n = static_cast<Eigen::Index>(beta.size());
    const Eigen::Map<const Eigen::VectorXd> b(beta.data(), n);
    const Eigen::Map<const Eigen::VectorXd> ad(depth.data(), n);

    Eigen::MatrixXd X(n, 2);
    X.col(0).setOnes();
    X.col(1) = ad.array().log().matrix();
    static const std::vector<std::string> kLogNames{"intercept", "log_depth"};
    const OlsFit log_fit = ols(b.array().log().matrix(), X, mode, kLogNames);
    out.log_intercept = log_fit.coefficients[0];
    out.lambda = -log_fit.coefficients[1];
    out.lambda_se = log_fit.std_errors[1];
    out.lambda_t = -log_fit.t_stats[1];
    out.lambda_lo = out.lambda - kCritical5 * out.lambda_se;
    out.lambda_hi = out.lambda + kCritical5 * out.lambda_se;
    out.r_squared_log = log_fit.r_squared;

    X.col(1) = ad.array().pow(-out.lambda).matrix();
    static const std::vector<std::string> kLevelNames{"intercept", "inverse_depth_power"};
    const OlsFit level_fit = ols(b, X, mode, kLevelNames);
    out.level_intercept = level_fit.coefficients[0];
    out.c = level_fit.coefficients[1];
    out.c_se = level_fit.std_errors[1];
    out.c_t = level_fit.t_stats[1];
    out.c_lo = out.c - kCritical5 * out.c_se;
    out.c_hi = out.c + kCritical5 * out.c_se;

    const Eigen::VectorXd fitted = out.c * ad.array().pow(-out.lambda).matrix();
    const Eigen::VectorXd restricted = ad.cwiseInverse();
    out.corr2_fitted = squared_correlation(b, fitted);
    out.corr2_restricted = squared_correlation(b, restricted);
    return out;
}

ComparisonResults comparison_regressions(const BucketSeries& series, ComparisonFamily family,
                                         std::span<const std::optional<double>> exponents,
                                         const RegressionOptions& options) {
    ComparisonResults out;
    out.family = family;
    const bool levels = family == ComparisonFamily::levels;
    static const std::vector<std::string> kLevelNames{"intercept", "ofi", "ti"};
    static const std::vector<std::string> kMagNames{"intercept", "abs_ofi", "vol_pow_h"};
    const auto& names = levels ? kLevelNames : kMagNames;

    for (std::size_t i = 0; i < series.window_count(); ++i) {
        std::optional<double> h;
        if (!levels) {
            if (i < exponents.size()) {
                h = exponents[i];
            }
            if (!h) {
                out.skipped.push_back({series.day, i, "no scaling exponent for window"});
                continue;
            }
        }
        const auto idx = window_buckets(series, i, options.drop_empty);
        if (idx.size() < options.min_buckets) {
            out.skipped.push_back({series.day, i,
                                   "only " + std::to_string(idx.size()) + " usable buckets (floor " +
                                       std::to_string(options.min_buckets) + ")"});
            continue;
        }
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::VectorXd y(n), a(n), t(n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const std::size_t k = idx[static_cast<std::size_t>(r)];
            if (levels) {
                y[r] = series.dp_ticks[k];
                a[r] = series.ofi[k];
                t[r] = series.ti[k];
            } else {
                y[r] = std::abs(series.dp_ticks[k]);
                a[r] = std::abs(series.ofi[k]);
                t[r] = std::pow(series.vol[k], *h);
            }
        }
        ComparisonWindow w;
        w.day = series.day;
        w.window = i;
        auto attempt = [&](std::optional<OlsFit>& slot, const Eigen::MatrixXd& X, std::span<const std::string> nm,
                           const char* label) {
            try {
                slot = ols(y, X, SeMode::white(), nm);
            } catch (const CollinearityError& e) {
                w.note += std::string(w.note.empty() ? "" : "; ") + label + ": " + e.what();
            }
        };
        Eigen::MatrixXd X1(n, 2);
        X1.col(0).setOnes();
        X1.col(1) = a;
        attempt(w.flow, X1, std::span<const std::string>(names).first(2), "flow");
        X1.col(1) = t;
        const std::vector<std::string> trade_names{names[0], names[2]};
        attempt(w.trades, X1, trade_names, "trades");
        Eigen::MatrixXd X2(n, 3);
        X2.col(0).setOnes();
        X2.col(1) = a;
        X2.col(2) = t;
        attempt(w.both, X2, names, "both");
        if (!w.flow && !w.trades && !w.both) {
            out.skipped.push_back({series.day, i, "all specifications degenerate: " + w.note});
            continue;
        }
        out.windows.push_back(std::move(w));
    }
    out.summary = summarize_comparisons(out.windows);
    return out;
}

ComparisonSummary summarize_comparisons(std::span<const ComparisonWindow> windows) {
    ComparisonSummary s;
    for (const auto& w : windows) {
        if (w.flow) {
            accumulate(s.flow, *w.flow);
        }
        if (w.trades) {
            accumulate(s.trades, *w.trades);
        }
        if (w.both) {
            accumulate(s.both, *w.both);
        }
    }
    finish(s.flow);
    finish(s.trades);
    finish(s.both);
    return s;
}

ScalingExponents estimate_scaling_exponent(const BucketSeries& series, const RegressionOptions& options) {
    ScalingExponents out;
    out.per_window.assign(series.window_count(), std::nullopt);
    static const std::vector<std::string> kNames{"intercept", "log_vol"};
    for (std::size_t i = 0; i < series.window_count(); ++i) {
        std::vector<double> ly, lx;
        for (std::size_t k : window_buckets(series, i, options.drop_empty)) {
            if (series.dp_ticks[k] != 0.0 && series.vol[k] > 0.0) {
                ly.push_back(std::log(std::abs(series.dp_ticks[k])));
                lx.push_back(std::log(series.vol[k]));
            }
        }
        if (ly.size() < options.min_buckets) {
            out.skipped.push_back({series.day, i,
                                   "only " + std::to_string(ly.size()) + " buckets with price change and volume"});
            continue;
        }
        const auto n = static_cast<Eigen::Index>(ly.size());
        Eigen::MatrixXd X(n, 2);
        X.col(0).setOnes();
        X.col(1) = Eigen::Map<const Eigen::VectorXd>(lx.data(), n);
        try {
            const OlsFit fit = ols(Eigen::Map<const Eigen::VectorXd>(ly.data(), n), X, SeMode::classical(), kNames);
            out.per_window[i] = fit.coefficients[1];
        } catch (const CollinearityError& e) {
            out.skipped.push_back({series.day, i, std::string("degenerate regressor: ") + e.what()});
        }
    }
    return out;
}

MeanSd mean_sd(std::span<const std::optional<double>> values) {
    MeanSd r;
    double sum = 0.0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++r.count;
        }
    }
    if (r.count == 0) {
        return r;
    }
    r.mean = sum / static_cast<double>(r.count);
    if (r.count > 1) {
        double ss = 0.0;
        for (const auto& v : values) {
            if (v) {
                ss += (*v - r.mean) * (*v - r.mean);
            }
        }
        r.sd = std::sqrt(ss / static_cast<double>(r.count - 1));
    }
    return r;
}

SeasonalityProfile seasonality_profile(std::span<const SlotObservation> observations) {
    struct Acc {
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::map<std::string, std::map<std::size_t, Acc>> by_symbol;
    std::map<std::string, Acc> totals;
    std::size_t slots = 0;
    for (const auto& o : observations) {
        auto& a = by_symbol[o.symbol][o.slot];
        a.sum += o.value;
        ++a.count;
        auto& t = totals[o.symbol];
        t.sum += o.value;
        ++t.count;
        slots = std::max(slots, o.slot + 1);
    }

    std::vector<Acc> across(slots);
    for (const auto& [symbol, slot_map] : by_symbol) {
        const Acc& total = totals[symbol];
        const double overall = total.sum / static_cast<double>(total.count);
        if (overall == 0.0 || !std::isfinite(overall)) {
            continue;
        }
        for (const auto& [slot, acc] : slot_map) {
            across[slot].sum += (acc.sum / static_cast<double>(acc.count)) / overall;
            ++across[slot].count;
        }
    }
    SeasonalityProfile p;
    p.values.resize(slots);
    for (std::size_t s = 0; s < slots; ++s) {
        if (across[s].count > 0) {
            p.values[s] = across[s].sum / static_cast<double>(across[s].count);
        }
    }
    return p;
}

std::vector<VarianceWindow> variance_decomposition(const BucketSeries& series,
                                                   std::span<const ImpactWindowResult> fits,
                                                   const RegressionOptions& options) {
    std::vector<VarianceWindow> out;
    for (std::size_t i = 0; i < series.window_count(); ++i) {
        const auto idx = window_buckets(series, i, options.drop_empty);
        if (idx.size() < 2) {
            continue;
        }
        std::vector<double> dp, of;
        dp.reserve(idx.size());
        of.reserve(idx.size());
        for (std::size_t k : idx) {
            dp.push_back(series.dp_ticks[k]);
            of.push_back(series.ofi[k]);
        }
        VarianceWindow v;
        v.day = series.day;
        v.window = i;
        const double var_ofi = sample_variance(of);
        if (var_ofi == 0.0) {
            v.degenerate = true;
            out.push_back(v);
            continue;
        }
        auto fit = std::find_if(fits.begin(), fits.end(), [&](const ImpactWindowResult& f) {
            return f.day == series.day && f.window == i;
        });
        if (fit == fits.end()) {
            continue;
        }
        v.var_dp = sample_variance(dp);
        v.var_ofi = var_ofi;
        v.beta = fit->beta;
        v.beta2_var_ofi = fit->beta * fit->beta * var_ofi;
        out.push_back(v);
    }
    return out;
}

std::optional<double> excess_kurtosis(std::span<const double> x) {
    if (x.size() < 2) {
        return std::nullopt;
    }
    const auto n = static_cast<double>(x.size());
    double mean = 0.0, scale = 0.0;
    for (double v : x) {
        mean += v;
        scale = std::max(scale, std::abs(v));
    }
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= n;
    m4 /= n;
    const double floor = 1e-12 * scale;
    if (m2 <= floor * floor) {
        return std::nullopt;
    }
    return m4 / (m2 * m2) - 3.0;
}

ResidualDiagnostics residual_diagnostics(std::span<const double> residuals, std::size_t max_lag) {
    if (residuals.size() < max_lag + 10) {
        throw SampleSizeError("residual diagnostics need at least max_lag + 10 residuals");
    }
    ResidualDiagnostics d;
    d.excess_kurtosis = excess_kurtosis(residuals);
    d.autocorrelation = autocorrelations(residuals, max_lag);
    d.band = 2.0 / std::sqrt(static_cast<double>(residuals.size()));
    for (double r : d.autocorrelation) {
        if (std::abs(r) <= d.band) {
            ++d.inside_band;
        }
    }
    return d;
}

}  // namespace ofi
