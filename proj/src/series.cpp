#include "bwe/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "bwe/error.hpp"

namespace bwe {

YearMonth YearMonth::parse(std::string_view text) {
    auto bad = [&] { return Error(ErrorCode::MalformedRow, "invalid period '" + std::string(text) + "'"); };
    if (text.size() != 7 || text[4] != '-') throw bad();
    int y = 0;
    int m = 0;
    auto r1 = std::from_chars(text.data(), text.data() + 4, y);
    auto r2 = std::from_chars(text.data() + 5, text.data() + 7, m);
    if (r1.ec != std::errc{} || r1.ptr != text.data() + 4 || r2.ec != std::errc{} ||
        r2.ptr != text.data() + 7 || m < 1 || m > 12) {
        throw bad();
    }
    return {y, m};
}

YearMonth YearMonth::from_index(long index) {
    long y = index >= 0 ? index / 12 : (index - 11) / 12;
    return {static_cast<int>(y), static_cast<int>(index - y * 12) + 1};
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

Stage parse_stage(std::string_view text) {
    const auto t = lower(text);
    if (t == "m" || t == "manufacturer") return Stage::Manufacturer;
    if (t == "w" || t == "wholesaler") return Stage::Wholesaler;
    if (t == "r" || t == "retailer") return Stage::Retailer;
    throw Error(ErrorCode::UnknownStage, "unknown stage '" + std::string(text) + "'");
}

Kind parse_kind(std::string_view text) {
    const auto t = lower(text);
    if (t == "demand") return Kind::Demand;
    if (t == "inventory") return Kind::Inventory;
    if (t == "production") return Kind::Production;
    throw Error(ErrorCode::UnknownKind, "unknown kind '" + std::string(text) + "'");
}

std::string_view stage_code(Stage s) noexcept {
    switch (s) {
        case Stage::Manufacturer: return "M";
        case Stage::Wholesaler: return "W";
        case Stage::Retailer: return "R";
    }
    return "?";
}

std::string_view stage_name(Stage s) noexcept {
    switch (s) {
        case Stage::Manufacturer: return "Manufacturer";
        case Stage::Wholesaler: return "Wholesaler";
        case Stage::Retailer: return "Retailer";
    }
    return "?";
}

std::string_view kind_name(Kind k) noexcept {
    switch (k) {
        case Kind::Demand: return "demand";
        case Kind::Inventory: return "inventory";
        case Kind::Production: return "production";
        case Kind::PriceIndex: return "price_index";
    }
    return "?";
}

MonthlySeries::MonthlySeries(std::string industry_id, Stage stage, Kind kind, YearMonth start,
                             std::vector<double> values)
    : industry_id_(std::move(industry_id)), stage_(stage), kind_(kind), start_(start), values_(std::move(values)) {
    if (values_.size() < 2) {
        throw Error(ErrorCode::TooShort, "series '" + industry_id_ + "' needs at least 2 observations");
    }
    const bool non_negative = kind_ == Kind::Demand || kind_ == Kind::Inventory;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw Error(ErrorCode::InvalidArgument,
                        "series '" + industry_id_ + "' has a non-finite value at " + start_.plus(k).str());
        }
        if (non_negative && values_[k] < 0.0) {
            throw Error(ErrorCode::InvalidArgument,
                        "series '" + industry_id_ + "' has a negative " + std::string(kind_name(kind_)) +
                            " value at " + start_.plus(k).str());
        }
    }
}

bool MonthlySeries::covers(YearMonth from, YearMonth to) const { return from >= start_ && to <= end() && from <= to; }

MonthlySeries MonthlySeries::slice(YearMonth from, YearMonth to) const {
    if (!covers(from, to)) {
        throw Error(ErrorCode::OutOfRange, "range " + from.str() + ".." + to.str() + " outside series '" +
                                               industry_id_ + "' (" + start_.str() + ".." + end().str() + ")");
    }
    const auto first = static_cast<std::size_t>(months_between(start_, from));
    const auto last = static_cast<std::size_t>(months_between(start_, to));
    return {industry_id_, stage_, kind_, from,
            std::vector<double>(values_.begin() + static_cast<long>(first), values_.begin() + static_cast<long>(last) + 1)};
}

MonthlySeries MonthlySeries::with_values(std::vector<double> values) const {
    return {industry_id_, stage_, kind_, start_, std::move(values)};
}

MonthlySeries MonthlySeries::with_kind(Kind kind, std::vector<double> values) const {
    return {industry_id_, stage_, kind, start_, std::move(values)};
}

std::vector<double> log_values(std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0)) throw Error(ErrorCode::NonPositiveValue, "log of non-positive value at position " + std::to_string(k));
        out[k] = std::log(x[k]);
    }
    return out;
}

std::vector<double> exp_values(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::exp(v); });
    return out;
}

std::vector<double> log_diff(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "log_diff needs at least 2 values");
    const auto logs = log_values(x);
    std::vector<double> out(x.size() - 1);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) out[k] = logs[k + 1] - logs[k];
    return out;
}

std::vector<double> log_diff(const MonthlySeries& s) { return log_diff(s.values()); }

std::vector<double> difference(std::span<const double> x, std::size_t lag) {
    if (lag == 0) throw Error(ErrorCode::InvalidArgument, "difference lag must be positive");
    if (x.size() <= lag) throw Error(ErrorCode::TooShort, "difference needs more than lag values");
    std::vector<double> out(x.size() - lag);
    for (std::size_t k = lag; k < x.size(); ++k) out[k - lag] = x[k] - x[k - lag];
    return out;
}

double mean(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorCode::TooShort, "mean of empty sequence");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "sample variance needs at least 2 values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

// ---- decomposition ---------------------------------------------------------

double DecompositionResult::seasonal_at(long position) const {
    const long p = static_cast<long>(period);
    long slot = (position + static_cast<long>(phase)) % p;
    if (slot < 0) slot += p;
    return seasonal[static_cast<std::size_t>(slot)];
}

double DecompositionResult::trend_at(long position) const {
    const long first = static_cast<long>(first_defined());
    const long last = static_cast<long>(last_defined());
    if (position >= first && position <= last) return *trend[static_cast<std::size_t>(position)];

    // Least-squares line through the `period` defined points nearest the gap.
    const long count = std::min<long>(static_cast<long>(period), last - first + 1);
    const long from = position > last ? last - count + 1 : first;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (long k = from; k < from + count; ++k) {
        const double t = static_cast<double>(k);
        const double y = *trend[static_cast<std::size_t>(k)];
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    const double n = static_cast<double>(count);
    const double denom = n * sxx - sx * sx;
    const double slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    const double intercept = (sy - slope * sx) / n;
    return intercept + slope * static_cast<double>(position);
}

DecompositionResult decompose_additive(std::span<const double> x, std::size_t period, std::size_t phase) {
    if (period < 2) throw Error(ErrorCode::InvalidArgument, "decomposition period must be at least 2");
    if (x.size() < 2 * period) {
        throw Error(ErrorCode::TooShort, "decomposition needs at least two full periods (" +
                                             std::to_string(2 * period) + " values)");
    }
    const std::size_t n = x.size();
    const std::size_t half = period / 2;
    DecompositionResult d;
    d.period = period;
    d.phase = phase % period;
    d.trend.assign(n, std::nullopt);
    d.residual.assign(n, std::nullopt);

    for (std::size_t k = half; k + half < n; ++k) {
        double s = 0.0;
        if (period % 2 == 0) {
            // 2 x m centered average: half weights on the two outer points.
            s = 0.5 * (x[k - half] + x[k + half]);
            for (std::size_t j = k - half + 1; j < k + half; ++j) s += x[j];
        } else {
            for (std::size_t j = k - half; j <= k + half; ++j) s += x[j];
        }
        d.trend[k] = s / static_cast<double>(period);
    }

    std::vector<double> sums(period, 0.0);
    std::vector<std::size_t> counts(period, 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (!d.trend[k]) continue;
        const std::size_t slot = (k + d.phase) % period;
        sums[slot] += x[k] - *d.trend[k];
        ++counts[slot];
    }
    d.seasonal.resize(period);
    for (std::size_t s = 0; s < period; ++s) d.seasonal[s] = sums[s] / static_cast<double>(counts[s]);
    const double centre = std::accumulate(d.seasonal.begin(), d.seasonal.end(), 0.0) / static_cast<double>(period);
    for (double& v : d.seasonal) v -= centre;

    for (std::size_t k = 0; k < n; ++k) {
        if (d.trend[k]) d.residual[k] = x[k] - *d.trend[k] - d.seasonal_at(static_cast<long>(k));
    }
    return d;
}

DecompositionResult decompose_additive(const MonthlySeries& s, std::size_t period) {
    const std::size_t phase = period == 12 ? static_cast<std::size_t>(s.start().month - 1) : 0;
    return decompose_additive(s.values(), period, phase);
}

std::vector<double> recompose(const DecompositionResult& d, std::span<const double> residual) {
    if (residual.size() != d.size()) {
        throw Error(ErrorCode::LengthMismatch, "recompose expects " + std::to_string(d.size()) +
                                                   " values, got " + std::to_string(residual.size()));
    }
    return recompose_at(d, residual, 0);
}

std::vector<double> recompose_at(const DecompositionResult& d, std::span<const double> values, long first_index) {
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        const long pos = first_index + static_cast<long>(k);
        out[k] = d.trend_at(pos) + d.seasonal_at(pos) + values[k];
    }
    return out;
}

std::vector<double> remove_components(const DecompositionResult& d, std::span<const double> values, long first_index) {
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        const long pos = first_index + static_cast<long>(k);
        out[k] = values[k] - d.trend_at(pos) - d.seasonal_at(pos);
    }
    return out;
}

// ---- min-max ---------------------------------------------------------------

MinMaxRecipe minmax_fit(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorCode::TooShort, "minmax_fit of empty sequence");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (!(*hi > *lo)) throw Error(ErrorCode::DegenerateRange, "minmax_fit needs max > min");
    return {*lo, *hi};
}

std::vector<double> minmax_apply(std::span<const double> x, const MinMaxRecipe& r) {
    const double span = r.hi - r.lo;
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - r.lo) / span;
    return out;
}

std::vector<double> minmax_invert(std::span<const double> y, const MinMaxRecipe& r) {
    const double span = r.hi - r.lo;
    std::vector<double> out(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) out[k] = r.lo + y[k] * span;
    return out;
}

}  // namespace bwe
