#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bwe {

/// Event name -> time indices (0 = first training month) at which it occurs.
using HolidayCalendar = std::map<std::string, std::vector<long>>;

struct TrendSeasonalConfig {
    std::size_t changepoints = 25;
    double changepoint_range = 0.8;  // share of the training range holding changepoints
    int fourier_order = 10;
    double period = 12.0;
    double lambda_delta = 0.05;  // L2 penalty on standardized changepoint columns
    HolidayCalendar holidays;
};

/// y(t) = g(t) + s(t) + h(t) with a piecewise-linear trend
///   g(t) = b0 + k t + sum_j delta_j max(0, t - s_j),
/// Fourier seasonality s(t) = sum_n a_n sin(2 pi n t / P) + b_n cos(2 pi n t / P)
/// and additive event effects h(t).
struct TrendSeasonalModel {
    double k = 0.0;
    double b0 = 0.0;
    std::vector<double> changepoints;
    std::vector<double> deltas;
    std::vector<std::pair<double, double>> fourier;  // (a_n, b_n), n = 1..
    std::map<std::string, double> holiday_effects;
    double noise_sd = 0.0;
    double period = 12.0;
    std::size_t train_length = 0;

    [[nodiscard]] double trend_at(double t) const;
    [[nodiscard]] double seasonal_at(double t) const;
    /// g + s (+ h for events active at t in `calendar`).
    [[nodiscard]] double evaluate(double t, const HolidayCalendar& calendar = {}) const;
};

/// Harmonics that are distinct on integer time: min(order, floor(period / 2)).
int effective_fourier_order(int order, double period);

/// Changepoint positions at uniform quantiles of the first `range` share of
/// a series of length n (strictly increasing, excluding t = 0).
std::vector<double> place_changepoints(std::size_t n, std::size_t count, double range);

TrendSeasonalModel fit_trend_seasonal(std::span<const double> y, const TrendSeasonalConfig& config = {});

/// Values at t = train_length, ..., train_length + horizon - 1.
std::vector<double> forecast_trend_seasonal(const TrendSeasonalModel& model, std::size_t horizon,
                                            const HolidayCalendar& calendar = {});

}  // namespace bwe
