#include "bwe/serialize.hpp"

#include "bwe/error.hpp"

namespace bwe {

namespace {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorCode::Config, std::string("missing JSON field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("bad JSON field '") + key + "': " + e.what());
    }
}

Json zone_counts_json(const ZoneCounts& c) {
    Json out = Json::object();
    for (Zone z : kAllZones) {
        out[std::string(zone_signs(z))] = {{"label", zone_label(z)},
                                           {"count", c.counts[static_cast<std::size_t>(z)]},
                                           {"percent", c.percent(z)}};
    }
    out["total"] = c.total;
    return out;
}

template <class Model>
Json network_json(const Model& model, const char* type) {
    return {{"type", type},
            {"window", model.window},
            {"hidden", model.hidden},
            {"seed", model.seed},
            {"parameter_count", model.params.size()},
            {"params", model.params}};
}

template <class Model>
Model network_from_json(const Json& j, const char* type) {
    if (field<std::string>(j, "type") != type) throw Error(ErrorCode::Config, std::string("expected a ") + type + " model");
    Model model(field<int>(j, "window"), field<int>(j, "hidden"));
    model.seed = field<std::uint64_t>(j, "seed");
    auto params = field<std::vector<double>>(j, "params");
    if (params.size() != model.params.size()) {
        throw Error(ErrorCode::LengthMismatch, std::string(type) + " expects " + std::to_string(model.params.size()) +
                                                   " parameters, got " + std::to_string(params.size()));
    }
    model.params = std::move(params);
    return model;
}

}  // namespace

Json to_json(const SarimaModel& m) {
    const auto& s = m.spec;
    return {{"type", "SARIMA"},
            {"order", {s.p, s.d, s.q}},
            {"seasonal_order", {s.P, s.D, s.Q, s.m}},
            {"phi", m.phi},
            {"theta", m.theta},
            {"seasonal_phi", m.Phi},
            {"seasonal_theta", m.Theta},
            {"intercept", m.intercept},
            {"sigma2", m.sigma2}};
}

SarimaModel sarima_from_json(const Json& j) {
    const auto order = field<std::vector<int>>(j, "order");
    const auto seasonal = field<std::vector<int>>(j, "seasonal_order");
    if (order.size() != 3 || seasonal.size() != 4) throw Error(ErrorCode::Config, "SARIMA orders have the wrong shape");
    SarimaSpec spec{order[0], order[1], order[2], seasonal[0], seasonal[1], seasonal[2], seasonal[3]};
    spec.validate();
    SarimaModel m = SarimaModel::zeros(spec);
    m.phi = field<std::vector<double>>(j, "phi");
    m.theta = field<std::vector<double>>(j, "theta");
    m.Phi = field<std::vector<double>>(j, "seasonal_phi");
    m.Theta = field<std::vector<double>>(j, "seasonal_theta");
    m.intercept = field<double>(j, "intercept");
    m.sigma2 = field<double>(j, "sigma2");
    if (m.phi.size() != static_cast<std::size_t>(spec.p) || m.theta.size() != static_cast<std::size_t>(spec.q) ||
        m.Phi.size() != static_cast<std::size_t>(spec.P) || m.Theta.size() != static_cast<std::size_t>(spec.Q)) {
        throw Error(ErrorCode::LengthMismatch, "SARIMA coefficient counts do not match the orders");
    }
    return m;
}

Json to_json(const TrendSeasonalModel& m) {
    Json fourier = Json::array();
    for (const auto& [a, b] : m.fourier) fourier.push_back({a, b});
    return {{"type", "TrendSeasonal"},
            {"k", m.k},
            {"b0", m.b0},
            {"changepoints", m.changepoints},
            {"deltas", m.deltas},
            {"fourier", fourier},
            {"holiday_effects", m.holiday_effects},
            {"noise_sd", m.noise_sd},
            {"period", m.period},
            {"train_length", m.train_length}};
}

TrendSeasonalModel trend_seasonal_from_json(const Json& j) {
    TrendSeasonalModel m;
    m.k = field<double>(j, "k");
    m.b0 = field<double>(j, "b0");
    m.changepoints = field<std::vector<double>>(j, "changepoints");
    m.deltas = field<std::vector<double>>(j, "deltas");
    for (const auto& pair : field<std::vector<std::vector<double>>>(j, "fourier")) {
        if (pair.size() != 2) throw Error(ErrorCode::Config, "Fourier terms must be pairs");
        m.fourier.emplace_back(pair[0], pair[1]);
    }
    m.holiday_effects = field<std::map<std::string, double>>(j, "holiday_effects");
    m.noise_sd = field<double>(j, "noise_sd");
    m.period = field<double>(j, "period");
    m.train_length = field<std::size_t>(j, "train_length");
    if (m.changepoints.size() != m.deltas.size()) {
        throw Error(ErrorCode::LengthMismatch, "changepoints and deltas differ in length");
    }
    return m;
}

Json to_json(const RnnModel& model) { return network_json(model, "RNN"); }
RnnModel rnn_from_json(const Json& j) { return network_from_json<RnnModel>(j, "RNN"); }
Json to_json(const LstmModel& model) { return network_json(model, "LSTM"); }
LstmModel lstm_from_json(const Json& j) { return network_from_json<LstmModel>(j, "LSTM"); }

Json to_json(const BenchmarkTable& table) {
    Json periods = Json::array();
    for (const auto& p : table.periods) periods.push_back({{"label", p.label}, {"from", p.from.str()}, {"to", p.to.str()}});
    Json rows = Json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"kind", kind_name(r.kind)},
                        {"model", model_name(r.model)},
                        {"period", r.period},
                        {"mape_mean", r.mape_mean},
                        {"mape_variance", r.mape_variance},
                        {"industries", r.industries}});
    }
    return {{"periods", periods}, {"rows", rows}};
}

Json to_json(const ZoneSummary& summary) {
    Json stages = Json::object();
    for (const auto& [stage, counts] : summary.stages) stages[std::string(stage_name(stage))] = zone_counts_json(counts);
    return {{"stages", stages}, {"total", zone_counts_json(summary.total)}, {"undefined", summary.undefined}};
}

Json to_json(std::span<const AmplificationRecord> records) {
    Json out = Json::array();
    for (const auto& r : records) {
        Json j = {{"industry_id", r.industry_id}, {"stage", stage_code(r.stage)}, {"status", r.status}};
        j["forecast_ratio"] = r.forecast_ratio ? Json(*r.forecast_ratio) : Json(nullptr);
        j["actual_ratio"] = r.actual_ratio ? Json(*r.actual_ratio) : Json(nullptr);
        j["zone"] = r.zone ? Json(zone_label(*r.zone)) : Json(nullptr);
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace bwe
