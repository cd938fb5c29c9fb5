#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bwe {

/// Calendar month. Ordered and convertible to a dense month index.
struct YearMonth {
    int year = 1970;
    int month = 1;  // 1..12

    static YearMonth parse(std::string_view text);  // "YYYY-MM"
    static YearMonth from_index(long index);

    [[nodiscard]] long index() const noexcept { return static_cast<long>(year) * 12 + (month - 1); }
    [[nodiscard]] YearMonth plus(long months) const { return from_index(index() + months); }
    [[nodiscard]] std::string str() const;

    friend auto operator<=>(const YearMonth& a, const YearMonth& b) noexcept {
        return a.index() <=> b.index();
    }
    friend bool operator==(const YearMonth& a, const YearMonth& b) noexcept = default;
};

/// Signed number of months from `from` to `to`.
inline long months_between(YearMonth from, YearMonth to) noexcept { return to.index() - from.index(); }

enum class Stage { Manufacturer, Wholesaler, Retailer };
enum class Kind { Demand, Inventory, Production, PriceIndex };

Stage parse_stage(std::string_view text);
Kind parse_kind(std::string_view text);
std::string_view stage_code(Stage s) noexcept;  // "M", "W", "R"
std::string_view stage_name(Stage s) noexcept;
std::string_view kind_name(Kind k) noexcept;

/// Contiguous monthly observations of one industry series.
///
/// Construction enforces length >= 2 and finite values; Demand and Inventory
/// must also be non-negative. Production may be negative (inventory drawdowns).
class MonthlySeries {
public:
    MonthlySeries(std::string industry_id, Stage stage, Kind kind, YearMonth start,
                  std::vector<double> values);

    [[nodiscard]] const std::string& industry_id() const noexcept { return industry_id_; }
    [[nodiscard]] Stage stage() const noexcept { return stage_; }
    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] YearMonth start() const noexcept { return start_; }
    [[nodiscard]] YearMonth end() const { return start_.plus(static_cast<long>(values_.size()) - 1); }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }

    [[nodiscard]] bool covers(YearMonth from, YearMonth to) const;
    /// Sub-series over [from, to] inclusive; OutOfRange when not covered.
    [[nodiscard]] MonthlySeries slice(YearMonth from, YearMonth to) const;
    [[nodiscard]] MonthlySeries with_values(std::vector<double> values) const;
    [[nodiscard]] MonthlySeries with_kind(Kind kind, std::vector<double> values) const;

private:
    std::string industry_id_;
    Stage stage_;
    Kind kind_;
    YearMonth start_;
    std::vector<double> values_;
};

// ---- elementwise transforms -------------------------------------------------

std::vector<double> log_values(std::span<const double> x);
std::vector<double> exp_values(std::span<const double> x);

/// ln(x[k+1]) - ln(x[k]); NonPositiveValue / TooShort.
std::vector<double> log_diff(std::span<const double> x);
std::vector<double> log_diff(const MonthlySeries& s);

/// First differences at the given lag.
std::vector<double> difference(std::span<const double> x, std::size_t lag = 1);

double mean(std::span<const double> x);
/// Unbiased sample variance (divisor n - 1); TooShort when n < 2.
double sample_variance(std::span<const double> x);

// ---- additive decomposition -----------------------------------------------

struct DecompositionResult {
    std::size_t period = 12;
    std::size_t phase = 0;  // seasonal slot of position 0
    std::vector<std::optional<double>> trend;
    std::vector<double> seasonal;  // `period` indices summing to 0
    std::vector<std::optional<double>> residual;

    [[nodiscard]] std::size_t size() const noexcept { return trend.size(); }
    [[nodiscard]] double seasonal_at(long position) const;
    /// Trend at any position; outside the defined span it is extended linearly
    /// from a least-squares line through the nearest `period` defined points.
    [[nodiscard]] double trend_at(long position) const;
    [[nodiscard]] std::size_t first_defined() const noexcept { return period / 2; }
    [[nodiscard]] std::size_t last_defined() const noexcept { return size() - 1 - period / 2; }
};

/// Centered moving-average decomposition. For a monthly series the seasonal
/// slot follows the calendar month of `start`.
DecompositionResult decompose_additive(std::span<const double> x, std::size_t period = 12,
                                       std::size_t phase = 0);
DecompositionResult decompose_additive(const MonthlySeries& s, std::size_t period = 12);

/// trend + seasonal + residual for an in-sample residual of the same length.
std::vector<double> recompose(const DecompositionResult& d, std::span<const double> residual);
/// trend + seasonal + values for positions first_index, first_index + 1, ...
/// (positions past the sample use the extrapolated trend).
std::vector<double> recompose_at(const DecompositionResult& d, std::span<const double> values,
                                 long first_index);
/// values - trend - seasonal at positions first_index, ...
std::vector<double> remove_components(const DecompositionResult& d, std::span<const double> values,
                                      long first_index);

// ---- min-max scaling -------------------------------------------------------

struct MinMaxRecipe {
    double lo = 0.0;
    double hi = 1.0;
};

MinMaxRecipe minmax_fit(std::span<const double> x);
std::vector<double> minmax_apply(std::span<const double> x, const MinMaxRecipe& r);
std::vector<double> minmax_invert(std::span<const double> y, const MinMaxRecipe& r);

}  // namespace bwe
