// ks.hpp: one-sample Kolmogorov-Smirnov test.
#pragma once

#include <functional>
#include <span>

namespace ofi {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

double standard_normal_cdf(double x);

/// P(K > x) for the Kolmogorov distribution,
/// 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2).
double kolmogorov_survival(double x);

/// D_n = sup |F_n - F| against `cdf`; the p-value uses the Kolmogorov limit
/// at sqrt(n) D_n with Stephens' finite-n adjustment
/// (sqrt(n) + 0.12 + 0.11/sqrt(n)) D_n.
KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

KsResult ks_test_normal(std::span<const double> sample);

/// Asymptotic 5% critical value 1.358 / sqrt(n).
double ks_critical_5pct(std::size_t n);

}  // namespace ofi
