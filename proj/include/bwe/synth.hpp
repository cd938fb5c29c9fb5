#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bwe/config.hpp"
#include "bwe/ingest.hpp"

namespace bwe {

enum class ShockShape { Step, Spike, DipThenSurge };

ShockShape parse_shock_shape(std::string_view text);

/// Multiplicative disturbance starting at `onset`.
///   step:           1 + magnitude from onset on
///   spike:          1 + magnitude at onset, fading linearly over decay_months
///   dip_then_surge: 1 - |magnitude| for the first ceil(decay/2) months (at least
///                   one), then 1 + |magnitude| fading linearly over decay_months
struct ShockProfile {
    YearMonth onset{2020, 3};
    ShockShape shape = ShockShape::Step;
    double magnitude = 0.3;
    int decay_months = 0;

    void validate() const;
    [[nodiscard]] double factor(YearMonth month) const;
};

struct SeriesRecipe {
    double base = 100.0;
    double trend_slope = 0.0;
    double seasonal_amp = 0.0;
    double noise_sd = 0.0;
    std::optional<ShockProfile> shock;
    std::size_t n = 384;
    YearMonth start{1992, 1};
    std::uint64_t seed = 0;
};

/// (base + slope t + amp sin(2 pi t / 12)) * shock + noise.
/// NonPositiveGenerated when any value is <= 0.
MonthlySeries gen_series(const SeriesRecipe& recipe, const std::string& industry_id = "synthetic",
                         Stage stage = Stage::Manufacturer, Kind kind = Kind::Demand);

enum class OrderPolicy { OrderUpTo, PassThrough };

struct EchelonConfig {
    double demand_mean = 100.0;
    double demand_sd = 10.0;
    int lead_time = 2;        // periods between ordering and receipt, beyond one review period
    int forecast_window = 4;  // moving-average length
    double safety_factor = 2.0;
    OrderPolicy policy = OrderPolicy::OrderUpTo;
    std::size_t warmup = 24;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One stage facing i.i.d. normal demand truncated at 0. Each period: receive
/// the order placed lead_time + 1 periods earlier, ship min(demand, on hand),
/// then order up to (lead_time + 1) * MA forecast + safety stock (or order the
/// period's demand under pass-through).
struct EchelonRun {
    std::vector<double> demand;
    std::vector<double> shipments;
    std::vector<double> inventory;  // on hand at period end
    std::vector<double> receipts;
    std::vector<double> orders;
    std::vector<double> position;   // on hand plus in transit after ordering
};

/// `n` periods after the warm-up; n >= 60.
EchelonRun simulate_echelon(const EchelonConfig& cfg, std::size_t n);

/// Panel of echelon runs: shipments become demand and the inventory position
/// (on hand plus in transit) becomes inventory, so inferred production equals
/// orders placed.
IndustryPanel echelon_panel(const EchelonConfig& cfg, std::size_t industries, std::size_t n, YearMonth start,
                            Stage stage = Stage::Retailer);

struct SyntheticPanelConfig {
    std::size_t manufacturers = 51;
    std::size_t wholesalers = 19;
    std::size_t retailers = 7;
    std::size_t months = 384;
    YearMonth start{1992, 1};
    YearMonth shock_onset{2020, 3};
    std::uint64_t seed = 7;

    void validate() const;
};

/// Seasonal demand and inventory per industry with a pandemic-like shock.
IndustryPanel synthetic_panel(const SyntheticPanelConfig& cfg);

/// Builds the panel described by a simulation config: `mode = panel` (default)
/// or `mode = echelon`.
IndustryPanel simulate_from_config(const KeyValueConfig& cfg);

}  // namespace bwe
