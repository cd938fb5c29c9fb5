#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bwe {

enum class AdfRegression { Constant, ConstantTrend };
enum class SignificanceLevel { OnePercent, FivePercent, TenPercent };

struct AdfResult {
    double statistic = 0.0;
    std::size_t lags_used = 0;
    std::size_t nobs = 0;
    double crit_1 = 0.0;
    double crit_5 = 0.0;
    double crit_10 = 0.0;
    bool reject_unit_root = false;
};

struct AdfOptions {
    AdfRegression regression = AdfRegression::Constant;
    SignificanceLevel level = SignificanceLevel::FivePercent;
};

/// t-ratio of the lagged level in
///   dx_t = a (+ b t) + g x_{t-1} + sum_{j=1..lags} c_j dx_{t-j} + e_t.
double adf_statistic(std::span<const double> x, std::size_t lags,
                     AdfRegression regression = AdfRegression::Constant);

/// MacKinnon (2010) response-surface critical values for `nobs` regression
/// observations: {1%, 5%, 10%}.
std::array<double, 3> adf_critical_values(std::size_t nobs, AdfRegression regression);

/// Schwert upper bound floor(12 (n/100)^(1/4)) on the augmentation lags.
std::size_t schwert_max_lag(std::size_t n);

/// ADF test with the lag order chosen by AIC over 0..schwert_max_lag(n).
AdfResult adf_test(std::span<const double> x, const AdfOptions& options = {});

/// Share of seeds whose series is rejected as having a unit root. Seeds are
/// first_seed .. first_seed + seeds - 1; `random_walk` integrates the noise.
struct AdfSweep {
    std::size_t seeds = 200;
    std::size_t length = 300;
    std::uint64_t first_seed = 1;
    bool random_walk = false;
};
double adf_rejection_rate(const AdfSweep& sweep, int jobs);
double adf_rejection_rate_serial(const AdfSweep& sweep);

}  // namespace bwe
