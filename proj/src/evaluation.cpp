#include "bwe/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "bwe/error.hpp"
#include "bwe/format.hpp"

namespace bwe {

std::string_view model_name(ModelId m) noexcept {
    switch (m) {
        case ModelId::Sarima: return "SARIMA";
        case ModelId::TrendSeasonal: return "TrendSeasonal";
        case ModelId::Rnn: return "RNN";
        case ModelId::Lstm: return "LSTM";
    }
    return "?";
}

ModelId parse_model(std::string_view text) {
    std::string lower;
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (ModelId m : kAllModels) {
        std::string name;
        for (char c : model_name(m)) name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (lower == name) return m;
    }
    if (lower == "trend-seasonal" || lower == "trend_seasonal" || lower == "prophet") return ModelId::TrendSeasonal;
    throw Error(ErrorCode::Config, "unknown model '" + std::string(text) + "'");
}

double mape(std::span<const double> actual, std::span<const double> forecast) {
    if (actual.size() != forecast.size()) {
        throw Error(ErrorCode::LengthMismatch, "actual has " + std::to_string(actual.size()) + " values, forecast " +
                                                   std::to_string(forecast.size()));
    }
    if (actual.empty()) throw Error(ErrorCode::TooShort, "MAPE needs at least one value");
    double sum = 0.0;
    for (std::size_t k = 0; k < actual.size(); ++k) {
        if (actual[k] == 0.0) throw Error(ErrorCode::ZeroActual, "actual value is 0 at position " + std::to_string(k));
        sum += std::abs(actual[k] - forecast[k]) / std::abs(actual[k]);
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

std::vector<SubPeriod> default_sub_periods() {
    return {{"2016-2019", {2016, 1}, {2019, 12}}, {"2020-2023", {2020, 1}, {2023, 12}}};
}

const BenchmarkRow* BenchmarkTable::find(Kind kind, ModelId model, std::string_view period) const {
    for (const auto& r : rows) {
        if (r.kind == kind && r.model == model && r.period == period) return &r;
    }
    return nullptr;
}

std::vector<ModelId> BenchmarkTable::models() const {
    std::vector<ModelId> out;
    for (const auto& r : rows) {
        if (std::find(out.begin(), out.end(), r.model) == out.end()) out.push_back(r.model);
    }
    std::sort(out.begin(), out.end());
    return out;
}

BenchmarkTable benchmark(const IndustryPanel& test, const ForecastPool& forecasts,
                         const std::vector<SubPeriod>& periods) {
    BenchmarkTable table;
    const std::size_t n = test.length();
    for (const auto& sp : periods) {
        const YearMonth from = std::max(sp.from, test.start);
        const YearMonth to = std::min(sp.to, test.end);
        if (from <= to) table.periods.push_back({sp.label, from, to});
    }
    if (table.periods.empty()) throw Error(ErrorCode::OutOfRange, "no sub-period overlaps the test range");

    for (Kind kind : {Kind::Demand, Kind::Inventory}) {
        for (const auto& [model, pool] : forecasts) {
            std::vector<std::vector<double>> per_period(table.periods.size());
            for (const auto& [id, rec] : test.industries) {
                const auto it = pool.find({id, kind});
                if (it == pool.end() || it->second.size() < n) {
                    throw Error(ErrorCode::MissingForecast, std::string(model_name(model)) + " has no full-horizon " +
                                                                std::string(kind_name(kind)) + " forecast for " + id);
                }
                const MonthlySeries& actual = kind == Kind::Demand ? rec.demand : rec.inventory;
                for (std::size_t s = 0; s < table.periods.size(); ++s) {
                    const auto a = static_cast<std::size_t>(months_between(test.start, table.periods[s].from));
                    const auto len = static_cast<std::size_t>(months_between(table.periods[s].from, table.periods[s].to) + 1);
                    per_period[s].push_back(mape(actual.values().subspan(a, len),
                                                 std::span<const double>(it->second).subspan(a, len)));
                }
            }
            for (std::size_t s = 0; s < table.periods.size(); ++s) {
                const auto& v = per_period[s];
                BenchmarkRow row{kind, model, table.periods[s].label, mean(v), v.size() > 1 ? sample_variance(v) : 0.0,
                                 v.size()};
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

ModelId select_best(const BenchmarkTable& table) {
    if (table.rows.empty() || table.periods.empty()) throw Error(ErrorCode::EmptyGrid, "benchmark table is empty");
    const std::string& baseline = table.periods.front().label;
    std::optional<ModelId> best;
    double best_mean = 0.0, best_var = 0.0;
    for (ModelId m : table.models()) {
        double sum_mean = 0.0, sum_var = 0.0;
        int count = 0;
        for (Kind kind : {Kind::Demand, Kind::Inventory}) {
            if (const auto* r = table.find(kind, m, baseline)) {
                sum_mean += r->mape_mean;
                sum_var += r->mape_variance;
                ++count;
            }
        }
        if (count == 0) continue;
        const double mm = sum_mean / count, vv = sum_var / count;
        if (!best || mm < best_mean || (mm == best_mean && vv < best_var)) {
            best = m;
            best_mean = mm;
            best_var = vv;
        }
    }
    if (!best) throw Error(ErrorCode::EmptyGrid, "no model has baseline rows");
    return *best;
}

std::string benchmark_csv(const BenchmarkTable& table) {
    std::ostringstream os;
    os << "kind,model,period,mape_mean,mape_variance,industries\n";
    for (const auto& r : table.rows) {
        os << kind_name(r.kind) << ',' << model_name(r.model) << ',' << r.period << ',' << format_number(r.mape_mean)
           << ',' << format_number(r.mape_variance) << ',' << r.industries << '\n';
    }
    return os.str();
}

}  // namespace bwe
