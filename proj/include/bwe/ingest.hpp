#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bwe/series.hpp"

namespace bwe {

/// Series parsed from a panel CSV, keyed by (industry_id, kind).
struct RawSeriesSet {
    std::map<std::pair<std::string, Kind>, MonthlySeries> series;
    std::vector<std::string> warnings;  // one per interpolated gap
};

/// Parses `industry_id,stage,kind,period,value` rows. Gaps of at most
/// `max_gap` months are linearly interpolated with a warning.
RawSeriesSet parse_panel_csv(std::string_view text, int max_gap = 2);

/// Parses `stage,period,value` price-index rows (base 100), one series per stage.
std::map<Stage, MonthlySeries> parse_deflator_csv(std::string_view text);

/// real[k] = nominal[k] / (deflator[k] / 100) over the nominal's months.
MonthlySeries deflate(const MonthlySeries& nominal, const MonthlySeries& deflator);

/// Gross-margin rate per stage, each in [0, 1).
struct MarginConfig {
    std::map<Stage, double> rates;

    /// Placeholder rates (M 0.0, W 0.15, R 0.30); real margins should be supplied.
    static MarginConfig defaults();
    void validate() const;
};

/// cost[k] = sales[k] * (1 - rate(stage)); demand series only.
MonthlySeries margin_adjust(const MonthlySeries& sales, const MarginConfig& cfg);

struct IndustryRecord {
    Stage stage;
    MonthlySeries demand;
    MonthlySeries inventory;
};

/// Aligned demand/inventory series per industry over a common coverage.
struct IndustryPanel {
    std::map<std::string, IndustryRecord> industries;
    YearMonth start;
    YearMonth end;

    [[nodiscard]] std::size_t length() const { return static_cast<std::size_t>(months_between(start, end) + 1); }
    [[nodiscard]] std::size_t size() const noexcept { return industries.size(); }
    /// Throws Misaligned when any series leaves the common coverage.
    void validate() const;
};

/// Pairs demand and inventory per industry; Misaligned on differing ranges.
IndustryPanel assemble_panel(const RawSeriesSet& raw);

/// Deflates demand and inventory with the stage deflator (when given) and
/// margin-adjusts demand.
IndustryPanel preprocess_panel(const IndustryPanel& nominal, const std::map<Stage, MonthlySeries>* deflators,
                               const MarginConfig& margins);

/// Training covers start..train_end inclusive, test the remainder.
std::pair<IndustryPanel, IndustryPanel> split_panel(const IndustryPanel& panel, YearMonth train_end);

/// Restricts every series to [from, to].
IndustryPanel slice_panel(const IndustryPanel& panel, YearMonth from, YearMonth to);

std::string write_panel_csv(const IndustryPanel& panel);

}  // namespace bwe
