#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bwe/series.hpp"

namespace bwe {

/// Y[t] = S[t] + I[t] - I[t-1] for t = 1..n-1. Negative values are kept.
std::vector<double> infer_production(std::span<const double> shipments, std::span<const double> inventory);
/// Series form; the result starts one month after the inputs and needs n >= 3.
MonthlySeries infer_production(const MonthlySeries& shipments, const MonthlySeries& inventory);

/// Var(log-diff production) / Var(log-diff demand) over the whole spans.
double amplification_ratio(std::span<const double> production, std::span<const double> demand);
/// Restricted to [from, to]; both series must cover the window.
double amplification_ratio(const MonthlySeries& production, const MonthlySeries& demand, YearMonth from,
                           YearMonth to);

enum class Zone { TruePositive, TrueNegative, FalsePositive, FalseNegative };

inline constexpr std::array<Zone, 4> kAllZones{Zone::TruePositive, Zone::TrueNegative, Zone::FalsePositive,
                                               Zone::FalseNegative};

/// A ratio signals bullwhip only when strictly above 1.
Zone classify_zone(double forecast_ratio, double actual_ratio);
std::string_view zone_label(Zone z) noexcept;  // "Accurately Forecasted Bullwhip", ...
std::string_view zone_signs(Zone z) noexcept;  // "(+,+)", ...

struct AmplificationRecord {
    std::string industry_id;
    Stage stage = Stage::Manufacturer;
    std::optional<double> forecast_ratio;
    std::optional<double> actual_ratio;
    std::optional<Zone> zone;
    std::string status = "ok";  // or "undefined ratio: <reason>"

    [[nodiscard]] bool ok() const noexcept { return zone.has_value(); }
};

/// Builds a record from the actual and forecast (production, demand) pairs
/// over their full spans; failures become a status instead of an exception.
AmplificationRecord measure_industry(const std::string& industry_id, Stage stage,
                                     std::span<const double> forecast_production,
                                     std::span<const double> forecast_demand,
                                     std::span<const double> actual_production, std::span<const double> actual_demand);

struct ZoneCounts {
    std::array<std::size_t, 4> counts{};  // indexed like kAllZones
    std::size_t total = 0;

    [[nodiscard]] double percent(Zone z) const;
};

struct ZoneSummary {
    std::map<Stage, ZoneCounts> stages;
    ZoneCounts total;
    std::size_t undefined = 0;  // records without a zone, excluded from the counts
};

ZoneSummary summarize_zones(std::span<const AmplificationRecord> records);

/// `industry_id,stage,forecast_ratio,actual_ratio,zone,status`, ordered by industry id.
std::string ratios_csv(std::span<const AmplificationRecord> records);

/// Shock annotations keyed by industry id.
struct ShockAnnotation {
    std::string demand_shock;
    std::string supply_shock;
};
std::map<std::string, ShockAnnotation> parse_annotations_csv(std::string_view text);

}  // namespace bwe
