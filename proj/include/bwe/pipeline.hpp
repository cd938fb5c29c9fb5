#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bwe/bullwhip.hpp"
#include "bwe/config.hpp"
#include "bwe/evaluation.hpp"
#include "bwe/ingest.hpp"
#include "bwe/neural.hpp"
#include "bwe/stationarity.hpp"

namespace bwe {

inline constexpr std::string_view kToolVersion = "0.3.0";

struct ForecastSettings {
    int window = 12;
    int hidden = 32;
    std::size_t epochs = 200;
    double learning_rate = 1e-3;
    PredictMode horizon_mode = PredictMode::RollingOneStep;
};

PredictMode parse_horizon_mode(std::string_view text);  // "rolling" | "recursive"
std::string_view horizon_mode_name(PredictMode mode) noexcept;

/// Everything a pipeline run depends on. Paths are resolved against the
/// manifest directory; `*_text` keep the values as written for the report.
struct PipelineOptions {
    std::filesystem::path panel;
    std::optional<std::filesystem::path> deflators;
    std::optional<std::filesystem::path> annotations;
    std::filesystem::path out_dir = "out";
    std::string panel_text, deflators_text, annotations_text, out_dir_text = "out";

    MarginConfig margins = MarginConfig::defaults();
    YearMonth train_end{2015, 12};
    YearMonth analysis_from{2020, 1};
    YearMonth analysis_to{2023, 12};
    std::uint64_t seed = 42;
    std::vector<ModelId> models{kAllModels.begin(), kAllModels.end()};
    ForecastSettings forecast;
    int jobs = 1;

    void validate() const;
};

/// Keys: panel, deflators, annotations, out_dir, margins.M/W/R, train_end,
/// analysis_from, analysis_to, seed, models, window, hidden, epochs,
/// learning_rate, horizon_mode, jobs.
PipelineOptions options_from_config(const KeyValueConfig& cfg, const std::filesystem::path& base_dir);
PipelineOptions load_manifest(const std::filesystem::path& path);

/// Options that determine report content (no jobs or out_dir), as embedded in reports.
nlohmann::json options_json(const PipelineOptions& options);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Parses, deflates and margin-adjusts the panel named by the options.
IndustryPanel load_panel(const PipelineOptions& options, std::vector<std::string>* warnings = nullptr);

struct AdfRow {
    std::string industry_id;
    Stage stage = Stage::Manufacturer;
    Kind kind = Kind::Demand;
    std::optional<AdfResult> result;
    std::string status = "ok";  // error text when the test is undefined (e.g. constant series)
};

/// ADF on every demand and inventory series (as levels).
std::vector<AdfRow> adf_panel(const IndustryPanel& panel, int jobs);
std::string adf_csv(const std::vector<AdfRow>& rows);

/// Forecast of `test.size()` months after `train`. `test` is only read by
/// neural models in rolling mode, which feed realized lags. A constant
/// training series is forecast as that constant by every model.
std::vector<double> forecast_series(ModelId model, const MonthlySeries& train, const MonthlySeries& test,
                                    const ForecastSettings& settings, std::uint64_t seed);

/// All (model, industry, kind) forecasts, fanned out over `jobs` threads.
ForecastPool forecast_panel(const IndustryPanel& train, const IndustryPanel& test, const std::vector<ModelId>& models,
                            const ForecastSettings& settings, std::uint64_t seed, int jobs);
/// Same tasks in a plain loop.
ForecastPool forecast_panel_serial(const IndustryPanel& train, const IndustryPanel& test,
                                   const std::vector<ModelId>& models, const ForecastSettings& settings,
                                   std::uint64_t seed);

/// `model,industry_id,kind,period,value`
std::string forecasts_csv(const ForecastPool& pool, YearMonth test_start);
ForecastPool parse_forecasts_csv(std::string_view text, YearMonth test_start);

/// Forecast-side and actual-side amplification per industry over [from, to].
/// Forecast production chains from the last training inventory.
std::vector<AmplificationRecord> measure_panel(const IndustryPanel& panel, const ForecastPool& pool, ModelId model,
                                               YearMonth train_end, YearMonth from, YearMonth to);

/// Plot-ready ratios with optional shock annotations.
std::string scatter_csv(const std::vector<AmplificationRecord>& records,
                        const std::map<std::string, ShockAnnotation>& annotations);

struct PipelineResult {
    BenchmarkTable table;
    ModelId best = ModelId::Sarima;
    std::vector<AmplificationRecord> records;
    ZoneSummary zones;
    std::vector<std::filesystem::path> outputs;
};

/// ingest -> stationarity -> forecasts -> benchmark -> best model -> bullwhip
/// -> zones, writing every report into out_dir. Outputs written by a failed
/// run are removed.
PipelineResult run_pipeline(const PipelineOptions& options);

}  // namespace bwe
