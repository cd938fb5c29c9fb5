#include "bwe/bullwhip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bwe/error.hpp"
#include "bwe/format.hpp"

namespace bwe {

std::vector<double> infer_production(std::span<const double> shipments, std::span<const double> inventory) {
    if (shipments.size() != inventory.size()) {
        throw Error(ErrorCode::Misaligned, "shipments and inventory differ in length");
    }
    if (shipments.size() < 2) throw Error(ErrorCode::TooShort, "production needs at least 2 months");
    std::vector<double> out(shipments.size() - 1);
    for (std::size_t t = 1; t < shipments.size(); ++t) out[t - 1] = shipments[t] + (inventory[t] - inventory[t - 1]);
    return out;
}

MonthlySeries infer_production(const MonthlySeries& shipments, const MonthlySeries& inventory) {
    if (shipments.start() != inventory.start() || shipments.size() != inventory.size()) {
        throw Error(ErrorCode::Misaligned, "shipments and inventory of " + shipments.industry_id() +
                                               " cover different months");
    }
    if (shipments.size() < 3) throw Error(ErrorCode::TooShort, "production series needs at least 3 months of input");
    return MonthlySeries(shipments.industry_id(), shipments.stage(), Kind::Production, shipments.start().plus(1),
                         infer_production(shipments.values(), inventory.values()));
}

double amplification_ratio(std::span<const double> production, std::span<const double> demand) {
    if (production.size() < 3 || demand.size() < 3) {
        throw Error(ErrorCode::TooShort, "amplification window needs at least 3 months");
    }
    const auto dp = log_diff(production);
    const auto dd = log_diff(demand);
    const double vd = sample_variance(dd);
    if (vd == 0.0) throw Error(ErrorCode::ZeroDemandVariance, "demand log-differences have zero variance");
    return sample_variance(dp) / vd;
}

double amplification_ratio(const MonthlySeries& production, const MonthlySeries& demand, YearMonth from,
                           YearMonth to) {
    if (months_between(from, to) < 2) throw Error(ErrorCode::TooShort, "amplification window needs at least 3 months");
    const auto p = production.slice(from, to);
    const auto d = demand.slice(from, to);
    return amplification_ratio(p.values(), d.values());
}

Zone classify_zone(double forecast_ratio, double actual_ratio) {
    const bool f = forecast_ratio > 1.0;
    const bool a = actual_ratio > 1.0;
    if (f && a) return Zone::TruePositive;
    if (!f && !a) return Zone::TrueNegative;
    return f ? Zone::FalsePositive : Zone::FalseNegative;
}

std::string_view zone_label(Zone z) noexcept {
    switch (z) {
        case Zone::TruePositive: return "Accurately Forecasted Bullwhip";
        case Zone::TrueNegative: return "Accurately Forecasted No Bullwhip";
        case Zone::FalsePositive: return "False Positive Bullwhip";
        case Zone::FalseNegative: return "False Negative Bullwhip";
    }
    return "?";
}

std::string_view zone_signs(Zone z) noexcept {
    switch (z) {
        case Zone::TruePositive: return "(+,+)";
        case Zone::TrueNegative: return "(-,-)";
        case Zone::FalsePositive: return "(+,-)";
        case Zone::FalseNegative: return "(-,+)";
    }
    return "?";
}

AmplificationRecord measure_industry(const std::string& industry_id, Stage stage,
                                     std::span<const double> forecast_production,
                                     std::span<const double> forecast_demand,
                                     std::span<const double> actual_production, std::span<const double> actual_demand) {
    AmplificationRecord rec;
    rec.industry_id = industry_id;
    rec.stage = stage;
    std::vector<std::string> problems;
    try {
        rec.forecast_ratio = amplification_ratio(forecast_production, forecast_demand);
    } catch (const Error& e) {
        problems.push_back(std::string("forecast ") + std::string(to_string(e.code())));
    }
    try {
        rec.actual_ratio = amplification_ratio(actual_production, actual_demand);
    } catch (const Error& e) {
        problems.push_back(std::string("actual ") + std::string(to_string(e.code())));
    }
    if (problems.empty()) {
        rec.zone = classify_zone(*rec.forecast_ratio, *rec.actual_ratio);
    } else {
        rec.status = "undefined ratio:";
        for (const auto& p : problems) rec.status += " " + p;
    }
    return rec;
}

double ZoneCounts::percent(Zone z) const {
    if (total == 0) return 0.0;
    return 100.0 * static_cast<double>(counts[static_cast<std::size_t>(z)]) / static_cast<double>(total);
}

ZoneSummary summarize_zones(std::span<const AmplificationRecord> records) {
    ZoneSummary s;
    for (const auto& r : records) {
        if (!r.zone) {
            ++s.undefined;
            continue;
        }
        const auto z = static_cast<std::size_t>(*r.zone);
        auto& stage = s.stages[r.stage];
        ++stage.counts[z];
        ++stage.total;
        ++s.total.counts[z];
        ++s.total.total;
    }
    return s;
}

std::string ratios_csv(std::span<const AmplificationRecord> records) {
    std::vector<const AmplificationRecord*> sorted;
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->industry_id < b->industry_id; });
    std::ostringstream os;
    os << "industry_id,stage,forecast_ratio,actual_ratio,zone,status\n";
    for (const auto* r : sorted) {
        os << r->industry_id << ',' << stage_code(r->stage) << ','
           << (r->forecast_ratio ? format_number(*r->forecast_ratio) : "") << ','
           << (r->actual_ratio ? format_number(*r->actual_ratio) : "") << ','
           << (r->zone ? std::string(zone_label(*r->zone)) : "") << ',' << r->status << '\n';
    }
    return os.str();
}

std::map<std::string, ShockAnnotation> parse_annotations_csv(std::string_view text) {
    std::map<std::string, ShockAnnotation> out;
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t n = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != "industry_id,demand_shock,supply_shock") {
                throw Error(ErrorCode::MalformedRow, "line " + std::to_string(n) + ": expected annotations header");
            }
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (line.back() == ',') f.emplace_back();
        if (f.size() != 3 || f[0].empty()) {
            throw Error(ErrorCode::MalformedRow, "line " + std::to_string(n) + ": expected 3 fields");
        }
        out[f[0]] = {f[1], f[2]};
    }
    return out;
}

}  // namespace bwe
