// econometrics.hpp: per-window price-impact regressions, the depth model,
// trade/volume comparison regressions, seasonality profiles and residual
// diagnostics.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ofi/ols.hpp"
#include "ofi/types.hpp"

namespace ofi {

struct RegressionOptions {
    bool quadratic = false;
    std::size_t min_buckets = 30;
    bool drop_empty = false;
};

struct SkippedWindow {
    TradingDay day = 0;
    std::size_t window = 0;
    std::string reason;
};

struct ImpactWindowResult {
    TradingDay day = 0;
    std::size_t window = 0;
    std::size_t observations = 0;
    double alpha = 0.0;
    double t_alpha = 0.0;
    double beta = 0.0;
    double t_beta = 0.0;
    std::optional<double> gamma;
    std::optional<double> t_gamma;
    bool alpha_significant = false;
    bool beta_significant = false;
    bool gamma_significant = false;
    double r_squared = 0.0;
    /// Undefined when the residuals have zero variance.
    std::optional<double> residual_excess_kurtosis;
    std::optional<double> depth;
};

struct ImpactResults {
    std::vector<ImpactWindowResult> windows;
    std::vector<SkippedWindow> skipped;
};

/// dP_k = a + b OFI_k (+ g OFI_k|OFI_k|) per window with White standard
/// errors. Windows with fewer than `min_buckets` usable buckets or a
/// degenerate regressor are skipped and listed.
ImpactResults impact_regression(const BucketSeries& series, const RegressionOptions& options = {});

struct DepthOptions {
    std::size_t min_windows = 30;
    /// Newey-West lag count; default floor(4 (n/100)^(2/9)).
    std::optional<int> nw_lags;
};

struct DepthModelFit {
    double lambda = 0.0;
    double lambda_se = 0.0;
    double lambda_t = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double c = 0.0;
    double c_se = 0.0;
    double c_t = 0.0;
    double c_lo = 0.0;
    double c_hi = 0.0;
    double log_intercept = 0.0;
    double level_intercept = 0.0;
    double r_squared_log = 0.0;
    /// corr(beta_i, c / AD_i^lambda)^2
    double corr2_fitted = 0.0;
    /// corr(beta_i, 1 / AD_i)^2
    double corr2_restricted = 0.0;
    std::size_t windows_used = 0;
    std::size_t windows_nonpositive = 0;
    std::size_t windows_no_depth = 0;
    int nw_lags = 0;
};

/// Two-stage fit of beta_i = c / AD_i^lambda: lambda from
/// log beta_i = a - lambda log AD_i, then c from beta_i = a' + c AD_i^-lambda.
/// Both stages use Newey-West errors; intervals use +-1.96 SE. Windows with
/// beta_i <= 0 or undefined depth are excluded and counted.
DepthModelFit depth_regression(std::span<const ImpactWindowResult> windows, const DepthOptions& options = {});

enum class ComparisonFamily { levels, magnitudes };

struct ComparisonWindow {
    TradingDay day = 0;
    std::size_t window = 0;
    /// OFI-only (levels) or |OFI|-only (magnitudes).
    std::optional<OlsFit> flow;
    /// TI-only (levels) or VOL^H-only (magnitudes).
    std::optional<OlsFit> trades;
    std::optional<OlsFit> both;
    std::string note;
};

/// Averages for one specification across windows.
struct SpecSummary {
    std::size_t windows = 0;
    double mean_r_squared = 0.0;
    /// One entry per slope coefficient.
    std::vector<double> mean_t;
    std::vector<double> share_significant;
    double mean_f = 0.0;
};

struct ComparisonSummary {
    SpecSummary flow;
    SpecSummary trades;
    SpecSummary both;
};

struct ComparisonResults {
    ComparisonFamily family = ComparisonFamily::levels;
    std::vector<ComparisonWindow> windows;
    std::vector<SkippedWindow> skipped;
    ComparisonSummary summary;
};

/// levels:     dP on OFI, on TI, on both.
/// magnitudes: |dP| on |OFI|, on VOL^H_i, on both; `exponents` is indexed by
///             window and must hold H_i for a window to be fitted.
/// White standard errors throughout. A collinear two-covariate fit is
/// skipped with a note while the single-covariate fits are kept.
ComparisonResults comparison_regressions(const BucketSeries& series, ComparisonFamily family,
                                         std::span<const std::optional<double>> exponents = {},
                                         const RegressionOptions& options = {});

/// Folds several per-day results into one summary.
ComparisonSummary summarize_comparisons(std::span<const ComparisonWindow> windows);

struct ScalingExponents {
    /// Indexed by window; nullopt when the window was skipped.
    std::vector<std::optional<double>> per_window;
    std::vector<SkippedWindow> skipped;
};

/// log|dP_k| = a + H log VOL_k over buckets with dP != 0 and VOL > 0.
ScalingExponents estimate_scaling_exponent(const BucketSeries& series, const RegressionOptions& options = {});

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t count = 0;
};
/// Mean and sample standard deviation of the defined values.
MeanSd mean_sd(std::span<const std::optional<double>> values);

struct SlotObservation {
    std::string symbol;
    TradingDay day = 0;
    std::size_t slot = 0;
    double value = 0.0;
};

struct SeasonalityProfile {
    /// Indexed by slot; nullopt when no symbol defines the slot.
    std::vector<std::optional<double>> values;
};

/// Per symbol: average each slot across days and divide by the symbol's
/// overall mean; then average the normalized profiles across symbols.
SeasonalityProfile seasonality_profile(std::span<const SlotObservation> observations);

struct VarianceWindow {
    TradingDay day = 0;
    std::size_t window = 0;
    double var_dp = 0.0;
    double var_ofi = 0.0;
    double beta = 0.0;
    double beta2_var_ofi = 0.0;
    /// Zero OFI variance; the terms are reported as 0.
    bool degenerate = false;
};

/// Sample variances (n - 1) of dP and OFI per fitted window over the same
/// buckets the impact regression used.
std::vector<VarianceWindow> variance_decomposition(const BucketSeries& series,
                                                   std::span<const ImpactWindowResult> fits,
                                                   const RegressionOptions& options = {});

struct ResidualDiagnostics {
    std::optional<double> excess_kurtosis;
    std::vector<double> autocorrelation;
    double band = 0.0;
    std::size_t inside_band = 0;
};

/// Excess kurtosis m4/m2^2 - 3 with population moments and biased
/// autocorrelations at lags 1..max_lag with +-2/sqrt(n) bands. Needs at
/// least max_lag + 10 residuals.
ResidualDiagnostics residual_diagnostics(std::span<const double> residuals, std::size_t max_lag);

std::optional<double> excess_kurtosis(std::span<const double> x);

}  // namespace ofi
