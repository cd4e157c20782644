#include "ofi/ols.hpp"

#include <cmath>

#include "ofi/errors.hpp"

namespace ofi {

std::string SeMode::label() const {
    switch (kind) {
        case SeKind::classical:
            return "classical";
        case SeKind::white_hc0:
            return "white_hc0";
        case SeKind::newey_west:
            return "newey_west(" + std::to_string(lags) + ")";
    }
    return "unknown";
}

int default_newey_west_lags(std::size_t n) {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

Eigen::MatrixXd design_with_intercept(std::span<const std::vector<double>> columns) {
    const Eigen::Index n = columns.empty() ? 0 : static_cast<Eigen::Index>(columns.front().size());
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(columns.size()) + 1);
    X.col(0).setOnes();
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (static_cast<Eigen::Index>(columns[j].size()) != n) {
            throw ArgumentError("design columns differ in length");
        }
        X.col(static_cast<Eigen::Index>(j) + 1) = Eigen::Map<const Eigen::VectorXd>(columns[j].data(), n);
    }
    return X;
}

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, SeMode mode, std::span<const std::string> names) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (y.size() != n) {
        throw ArgumentError("response and design have different row counts");
    }
    if (k == 0 || n < k + 2) {
        throw SampleSizeError("need at least " + std::to_string(k + 2) + " observations, got " + std::to_string(n));
    }
    if (mode.kind == SeKind::newey_west && mode.lags < 0) {
        throw ArgumentError("Newey-West lag count must be non-negative");
    }

    // Unit-norm columns keep the rank decision independent of regressor scale.
    Eigen::VectorXd norms = X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (norms[j] == 0.0) {
            norms[j] = 1.0;
        }
    }
    const Eigen::MatrixXd Xs = X * norms.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        std::vector<std::string> bad;
        std::string list;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index r = qr.rank(); r < k; ++r) {
            const auto col = static_cast<std::size_t>(perm[r]);
            bad.push_back(col < names.size() ? names[col] : "x" + std::to_string(col));
            list += (list.empty() ? "" : ", ") + bad.back();
        }
        throw CollinearityError("regressors are collinear: " + list, std::move(bad));
    }

    OlsFit fit;
    fit.observations = static_cast<std::size_t>(n);
    fit.se_mode = mode;
    fit.coefficients = qr.solve(y).cwiseQuotient(norms);
    fit.residuals = y - X * fit.coefficients;

    // (Xs'Xs)^-1 = P R^-1 R^-T P'
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd bread_s = Rinv * Rinv.transpose();
    bread_s = qr.colsPermutation() * bread_s * qr.colsPermutation().transpose();
    const Eigen::MatrixXd bread = norms.cwiseInverse().asDiagonal() * bread_s * norms.cwiseInverse().asDiagonal();

    Eigen::MatrixXd cov;
    if (mode.kind == SeKind::classical) {
        const double s2 = fit.residuals.squaredNorm() / static_cast<double>(n - k);
        cov = s2 * bread;
    } else {
        const Eigen::MatrixXd U = X.array().colwise() * fit.residuals.array();
        Eigen::MatrixXd meat = U.transpose() * U;
        if (mode.kind == SeKind::newey_west) {
            const Eigen::Index L = std::min<Eigen::Index>(mode.lags, n - 1);
            for (Eigen::Index l = 1; l <= L; ++l) {
                const double w = 1.0 - static_cast<double>(l) / static_cast<double>(mode.lags + 1);
                const Eigen::MatrixXd gamma = U.bottomRows(n - l).transpose() * U.topRows(n - l);
                meat += w * (gamma + gamma.transpose());
            }
        }
        cov = bread * meat * bread;
    }

    fit.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    fit.t_stats.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double b = fit.coefficients[j];
        const double se = fit.std_errors[j];
        fit.t_stats[j] = se > 0.0 ? b / se : (b == 0.0 ? 0.0 : std::copysign(INFINITY, b));
    }

    const double ssr = fit.residuals.squaredNorm();
    const double sst = (y.array() - y.mean()).square().sum();
    fit.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
    if (k > 1) {
        const double num = fit.r_squared / static_cast<double>(k - 1);
        const double den = (1.0 - fit.r_squared) / static_cast<double>(n - k);
        fit.f_statistic = den > 0.0 ? num / den : INFINITY;
    }
    return fit;
}

}  // namespace ofi
