// ols.hpp: ordinary least squares with classical, White (HC0) and
// Newey-West covariance.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ofi {

/// Two-sided 5% normal critical value used for every significance flag.
inline constexpr double kCritical5 = 1.96;

enum class SeKind { classical, white_hc0, newey_west };

struct SeMode {
    SeKind kind = SeKind::white_hc0;
    int lags = 0;  // newey_west only

    static SeMode classical() { return {SeKind::classical, 0}; }
    static SeMode white() { return {SeKind::white_hc0, 0}; }
    static SeMode newey_west(int lags) { return {SeKind::newey_west, lags}; }

    std::string label() const;
};

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd std_errors;
    Eigen::VectorXd t_stats;
    Eigen::VectorXd residuals;
    double r_squared = 0.0;
    double f_statistic = 0.0;
    std::size_t observations = 0;
    SeMode se_mode;

    bool significant(std::size_t j) const { return std::abs(t_stats[static_cast<Eigen::Index>(j)]) > kCritical5; }
};

/// Fits y = X b + e. The first column of X must be the intercept; R² is
/// centred and F tests every other coefficient jointly zero.
///
/// Requires rows(X) == y.size() >= cols(X) + 2 (SampleSizeError otherwise)
/// and full column rank (CollinearityError naming the dependent columns;
/// `names` labels them, defaulting to x0, x1, ...).
///
/// A standard error of exactly zero yields a t-statistic of 0 when the
/// coefficient is also zero and of ±inf otherwise.
OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, SeMode mode,
           std::span<const std::string> names = {});

/// floor(4 (n/100)^(2/9)).
int default_newey_west_lags(std::size_t n);

/// Builds [1, x1, x2, ...] from equally long columns.
Eigen::MatrixXd design_with_intercept(std::span<const std::vector<double>> columns);

}  // namespace ofi
