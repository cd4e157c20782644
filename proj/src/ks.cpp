#include "ofi/ks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ofi/errors.hpp"

namespace ofi {

double standard_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) {
        return 1.0;
    }
    if (x < 0.2) {
        // The alternating series converges slowly here; use the theta-function
        // form of the CDF instead.
        const double c = std::sqrt(2.0 * M_PI) / x;
        double cdf = 0.0;
        for (int j = 1; j <= 50; ++j) {
            const double t = (2.0 * j - 1.0) * M_PI / x;
            cdf += std::exp(-t * t / 8.0);
        }
        return 1.0 - c * cdf;
    }
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-17) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) {
        throw ArgumentError("KS test needs a nonempty sample");
    }
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    KsResult r;
    r.statistic = d;
    r.n = sorted.size();
    const double root = std::sqrt(n);
    r.p_value = kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
    return r;
}

KsResult ks_test_normal(std::span<const double> sample) {
    return ks_test(sample, standard_normal_cdf);
}

double ks_critical_5pct(std::size_t n) {
    return 1.3581 / std::sqrt(static_cast<double>(n));
}

}  // namespace ofi
