#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bwe/ingest.hpp"

namespace bwe {

/// Forecasters in canonical order; ties in model selection go to the earlier one.
enum class ModelId { Sarima, TrendSeasonal, Rnn, Lstm };

inline constexpr std::array<ModelId, 4> kAllModels{ModelId::Sarima, ModelId::TrendSeasonal, ModelId::Rnn,
                                                   ModelId::Lstm};

std::string_view model_name(ModelId m) noexcept;  // "SARIMA", "TrendSeasonal", "RNN", "LSTM"
ModelId parse_model(std::string_view text);       // case-insensitive

/// 100 * mean(|a - f| / |a|).
double mape(std::span<const double> actual, std::span<const double> forecast);

struct SubPeriod {
    std::string label;
    YearMonth from;
    YearMonth to;
};

/// 2016-2019 and 2020-2023.
std::vector<SubPeriod> default_sub_periods();

struct BenchmarkRow {
    Kind kind = Kind::Demand;
    ModelId model = ModelId::Sarima;
    std::string period;
    double mape_mean = 0.0;
    double mape_variance = 0.0;  // sample variance across industries; 0 for one industry
    std::size_t industries = 0;
};

struct BenchmarkTable {
    std::vector<SubPeriod> periods;
    std::vector<BenchmarkRow> rows;  // ordered kind, model, period

    [[nodiscard]] const BenchmarkRow* find(Kind kind, ModelId model, std::string_view period) const;
    [[nodiscard]] std::vector<ModelId> models() const;
};

/// Forecasts per model for each (industry, kind), aligned with the test panel start.
using ForecastKey = std::pair<std::string, Kind>;
using ForecastPool = std::map<ModelId, std::map<ForecastKey, std::vector<double>>>;

/// Per-industry MAPE on each sub-period, then mean and sample variance across
/// industries. Sub-periods outside the test coverage are clipped; empty ones skipped.
BenchmarkTable benchmark(const IndustryPanel& test, const ForecastPool& forecasts,
                         const std::vector<SubPeriod>& periods = default_sub_periods());

/// Lowest mean of mape_mean across kinds in the first (baseline) sub-period;
/// ties go to lower variance, then canonical order.
ModelId select_best(const BenchmarkTable& table);

std::string benchmark_csv(const BenchmarkTable& table);

}  // namespace bwe
