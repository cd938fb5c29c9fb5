#include "bwe/stationarity.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "bwe/error.hpp"
#include "bwe/ols.hpp"
#include "bwe/rng.hpp"

namespace bwe {

namespace {

// Rows: 1%, 5%, 10%. Columns: tau_inf, c1/T, c2/T^2, c3/T^3.
constexpr double kTauConstant[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
};
constexpr double kTauConstantTrend[3][4] = {
    {-3.95877, -9.0531, -28.428, -134.155},
    {-3.41049, -4.3904, -9.036, -45.374},
    {-3.12705, -2.5856, -3.925, -22.380},
};

struct Regression {
    double statistic;
    double aic;
    std::size_t nobs;
};

// Runs the ADF regression on rows t = first_row .. n-1 of the differenced series.
Regression run_regression(std::span<const double> x, std::size_t lags, AdfRegression form, std::size_t first_row) {
    const std::size_t n = x.size();
    const std::size_t nobs = n - first_row;
    const std::size_t deterministic = form == AdfRegression::Constant ? 1 : 2;
    const std::size_t k = deterministic + 1 + lags;
    if (nobs <= k) throw Error(ErrorCode::TooShort, "too few observations for ADF regression");

    Eigen::MatrixXd X(static_cast<Eigen::Index>(nobs), static_cast<Eigen::Index>(k));
    Eigen::VectorXd y(static_cast<Eigen::Index>(nobs));
    for (std::size_t r = 0; r < nobs; ++r) {
        const std::size_t t = first_row + r;  // index into x; dx_t = x[t] - x[t-1]
        const auto row = static_cast<Eigen::Index>(r);
        y(row) = x[t] - x[t - 1];
        Eigen::Index c = 0;
        X(row, c++) = 1.0;
        if (form == AdfRegression::ConstantTrend) X(row, c++) = static_cast<double>(t);
        X(row, c++) = x[t - 1];
        for (std::size_t j = 1; j <= lags; ++j) X(row, c++) = x[t - j] - x[t - j - 1];
    }
    const OlsFit fit = ols(X, y);
    const auto level = static_cast<Eigen::Index>(deterministic);
    const double dof = static_cast<double>(nobs - k);
    const double s2 = fit.rss / dof;
    const double se = std::sqrt(s2 * fit.xtx_inverse(level, level));
    const double nd = static_cast<double>(nobs);
    // Gaussian log-likelihood AIC (constants dropped consistently across lags).
    const double aic = nd * std::log(fit.rss / nd) + 2.0 * static_cast<double>(k);
    return {fit.beta(level) / se, aic, nobs};
}

}  // namespace

double adf_statistic(std::span<const double> x, std::size_t lags, AdfRegression regression) {
    if (x.size() <= lags + 3) throw Error(ErrorCode::TooShort, "ADF needs more than lags + 3 observations");
    for (double v : x) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "ADF input must be finite");
    }
    return run_regression(x, lags, regression, lags + 1).statistic;
}

std::array<double, 3> adf_critical_values(std::size_t nobs, AdfRegression regression) {
    const auto& table = regression == AdfRegression::Constant ? kTauConstant : kTauConstantTrend;
    const double inv = 1.0 / static_cast<double>(nobs);
    std::array<double, 3> out{};
    for (int level = 0; level < 3; ++level) {
        const auto& c = table[level];
        out[static_cast<std::size_t>(level)] = c[0] + c[1] * inv + c[2] * inv * inv + c[3] * inv * inv * inv;
    }
    return out;
}

std::size_t schwert_max_lag(std::size_t n) {
    return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

AdfResult adf_test(std::span<const double> x, const AdfOptions& options) {
    if (x.size() < 24) throw Error(ErrorCode::TooShort, "ADF test needs at least 24 observations");
    for (double v : x) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "ADF input must be finite");
    }
    const std::size_t n = x.size();
    const std::size_t deterministic = options.regression == AdfRegression::Constant ? 1 : 2;
    std::size_t max_lag = schwert_max_lag(n);
    // Keep enough rows for the largest candidate regression.
    while (max_lag > 0 && n - (max_lag + 1) <= deterministic + 1 + max_lag + 1) --max_lag;

    // Candidates share the sample implied by max_lag so their AICs are comparable.
    std::size_t best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        const double aic = run_regression(x, lag, options.regression, max_lag + 1).aic;
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = lag;
        }
    }

    const Regression final_fit = run_regression(x, best_lag, options.regression, best_lag + 1);
    const auto crit = adf_critical_values(final_fit.nobs, options.regression);
    AdfResult result;
    result.statistic = final_fit.statistic;
    result.lags_used = best_lag;
    result.nobs = final_fit.nobs;
    result.crit_1 = crit[0];
    result.crit_5 = crit[1];
    result.crit_10 = crit[2];
    const double threshold = options.level == SignificanceLevel::OnePercent   ? crit[0]
                             : options.level == SignificanceLevel::FivePercent ? crit[1]
                                                                               : crit[2];
    result.reject_unit_root = result.statistic < threshold;
    return result;
}

namespace {

bool rejects(const AdfSweep& sweep, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(sweep.length);
    double level = 0.0;
    for (double& v : x) {
        const double e = rng.normal();
        level = sweep.random_walk ? level + e : e;
        v = level;
    }
    return adf_test(x).reject_unit_root;
}

}  // namespace

double adf_rejection_rate_serial(const AdfSweep& sweep) {
    std::size_t hits = 0;
    for (std::size_t s = 0; s < sweep.seeds; ++s) hits += rejects(sweep, sweep.first_seed + s) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(sweep.seeds);
}

double adf_rejection_rate(const AdfSweep& sweep, int jobs) {
    const auto count = static_cast<long>(sweep.seeds);
    long hits = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : hits) num_threads(jobs > 0 ? jobs : 1)
    for (long s = 0; s < count; ++s) hits += rejects(sweep, sweep.first_seed + static_cast<std::uint64_t>(s)) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(sweep.seeds);
}

}  // namespace bwe
