#include "bwe/trend_seasonal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bwe/error.hpp"
#include "bwe/ols.hpp"

namespace bwe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool nyquist_sine(int n, double period) { return std::abs(2.0 * n - period) < 1e-12; }

}  // namespace

int effective_fourier_order(int order, double period) {
    return std::max(0, std::min(order, static_cast<int>(std::floor(period / 2.0))));
}

std::vector<double> place_changepoints(std::size_t n, std::size_t count, double range) {
    std::vector<double> out;
    const auto span = static_cast<std::size_t>(std::floor(range * static_cast<double>(n)));
    if (count == 0 || span < 2) return out;
    for (std::size_t j = 1; j <= count; ++j) {
        const double pos = std::round(static_cast<double>(j) * static_cast<double>(span - 1) / static_cast<double>(count));
        if (out.empty() || pos > out.back()) out.push_back(pos);
    }
    return out;
}

double TrendSeasonalModel::trend_at(double t) const {
    double g = b0 + k * t;
    for (std::size_t j = 0; j < changepoints.size(); ++j) g += deltas[j] * std::max(0.0, t - changepoints[j]);
    return g;
}

double TrendSeasonalModel::seasonal_at(double t) const {
    double s = 0.0;
    for (std::size_t n = 0; n < fourier.size(); ++n) {
        const double w = kTwoPi * static_cast<double>(n + 1) * t / period;
        s += fourier[n].first * std::sin(w) + fourier[n].second * std::cos(w);
    }
    return s;
}

double TrendSeasonalModel::evaluate(double t, const HolidayCalendar& calendar) const {
    double y = trend_at(t) + seasonal_at(t);
    for (const auto& [event, positions] : calendar) {
        auto it = holiday_effects.find(event);
        if (it == holiday_effects.end()) continue;
        for (long pos : positions) {
            if (static_cast<double>(pos) == t) y += it->second;
        }
    }
    return y;
}

TrendSeasonalModel fit_trend_seasonal(std::span<const double> y, const TrendSeasonalConfig& config) {
    const std::size_t n = y.size();
    if (n < 36) throw Error(ErrorCode::TooShort, "trend/seasonal fit needs at least 36 observations");
    if (!(config.period >= 2.0)) throw Error(ErrorCode::InvalidArgument, "seasonal period must be at least 2");
    if (config.lambda_delta < 0.0) throw Error(ErrorCode::InvalidArgument, "changepoint penalty must be non-negative");

    const auto cps = place_changepoints(n, config.changepoints, config.changepoint_range);
    const int order = effective_fourier_order(config.fourier_order, config.period);

    std::vector<std::string> events;
    for (const auto& [event, positions] : config.holidays) {
        if (std::any_of(positions.begin(), positions.end(), [&](long p) { return p >= 0 && static_cast<std::size_t>(p) < n; })) {
            events.push_back(event);
        }
    }

    double y_scale = 0.0;
    for (double v : y) y_scale = std::max(y_scale, std::abs(v));
    if (y_scale == 0.0) y_scale = 1.0;
    const double t_scale = static_cast<double>(n - 1);

    // Hinge columns are divided by their standard deviation so one penalty
    // weight applies evenly to every changepoint.
    std::vector<double> hinge_sd(cps.size(), 1.0);
    for (std::size_t j = 0; j < cps.size(); ++j) {
        double s = 0.0, ss = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double h = std::max(0.0, static_cast<double>(t) - cps[j]) / t_scale;
            s += h;
            ss += h * h;
        }
        const double m = s / static_cast<double>(n);
        const double var = ss / static_cast<double>(n) - m * m;
        hinge_sd[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    std::size_t fourier_cols = 0;
    for (int h = 1; h <= order; ++h) fourier_cols += nyquist_sine(h, config.period) ? 1 : 2;
    const std::size_t cols = 2 + cps.size() + fourier_cols + events.size();
    const std::size_t hinge_first = 2;
    const bool penalised = config.lambda_delta > 0.0 && !cps.empty();
    const std::size_t rows = n + (penalised ? cps.size() : 0);

    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    Eigen::VectorXd target = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
    for (std::size_t t = 0; t < n; ++t) {
        const auto r = static_cast<Eigen::Index>(t);
        const double tt = static_cast<double>(t);
        Eigen::Index c = 0;
        X(r, c++) = 1.0;
        X(r, c++) = tt / t_scale;
        for (std::size_t j = 0; j < cps.size(); ++j) X(r, c++) = std::max(0.0, tt - cps[j]) / t_scale / hinge_sd[j];
        for (int h = 1; h <= order; ++h) {
            const double w = kTwoPi * h * tt / config.period;
            if (!nyquist_sine(h, config.period)) X(r, c++) = std::sin(w);
            X(r, c++) = std::cos(w);
        }
        for (const auto& event : events) {
            const auto& positions = config.holidays.at(event);
            X(r, c++) = std::count(positions.begin(), positions.end(), static_cast<long>(t)) > 0 ? 1.0 : 0.0;
        }
        target(r) = y[t] / y_scale;
    }
    if (penalised) {
        // Ridge rows: objective ||y - X b||^2 / n + lambda ||delta||^2.
        const double w = std::sqrt(config.lambda_delta * static_cast<double>(n));
        for (std::size_t j = 0; j < cps.size(); ++j) {
            X(static_cast<Eigen::Index>(n + j), static_cast<Eigen::Index>(hinge_first + j)) = w;
        }
    }

    const OlsFit fit = ols(X, target);
    const auto& b = fit.beta;

    TrendSeasonalModel model;
    model.period = config.period;
    model.train_length = n;
    model.changepoints = cps;
    model.b0 = b(0) * y_scale;
    model.k = b(1) * y_scale / t_scale;
    Eigen::Index c = 2;
    for (std::size_t j = 0; j < cps.size(); ++j) model.deltas.push_back(b(c++) * y_scale / t_scale / hinge_sd[j]);
    for (int h = 1; h <= order; ++h) {
        const double a = nyquist_sine(h, config.period) ? 0.0 : b(c++) * y_scale;
        const double bc = b(c++) * y_scale;
        model.fourier.emplace_back(a, bc);
    }
    for (const auto& event : events) model.holiday_effects[event] = b(c++) * y_scale;

    double ss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double e = y[t] - model.evaluate(static_cast<double>(t), config.holidays);
        ss += e * e;
    }
    model.noise_sd = std::sqrt(ss / static_cast<double>(n));
    return model;
}

std::vector<double> forecast_trend_seasonal(const TrendSeasonalModel& model, std::size_t horizon,
                                            const HolidayCalendar& calendar) {
    std::vector<double> out(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        out[h] = model.evaluate(static_cast<double>(model.train_length + h), calendar);
    }
    return out;
}

}  // namespace bwe
