#include "bwe/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "bwe/error.hpp"
#include "bwe/format.hpp"
#include "bwe/rng.hpp"
#include "bwe/sarima.hpp"
#include "bwe/serialize.hpp"
#include "bwe/trend_seasonal.hpp"

namespace fs = std::filesystem;

namespace bwe {

namespace {

Error with_context(const Error& e, const std::string& context) {
    std::string msg = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
    return Error(e.code(), context + ": " + msg);
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t from = 0;
    while (true) {
        const auto at = text.find(sep, from);
        out.emplace_back(text.substr(from, at == std::string_view::npos ? std::string_view::npos : at - from));
        if (at == std::string_view::npos) break;
        from = at + 1;
    }
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

YearMonth month_key(const KeyValueConfig& cfg, const std::string& key, YearMonth fallback) {
    const auto v = cfg.get(key);
    if (!v) return fallback;
    try {
        return YearMonth::parse(*v);
    } catch (const Error&) {
        throw Error(ErrorCode::Config, "key '" + key + "' expects YYYY-MM, got '" + *v + "'");
    }
}

fs::path resolve(const fs::path& base, const std::string& text) {
    const fs::path p(text);
    return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

template <class Model>
std::vector<double> neural_forecast(Model model, const MonthlySeries& history, const MonthlySeries& test,
                                    const ForecastSettings& s, std::uint64_t seed) {
    const std::size_t n = history.size();
    const std::size_t horizon = test.size();
    const auto parts = decompose_additive(history);
    const auto residual = remove_components(parts, history.values(), 0);
    const auto scale = minmax_fit(residual);
    const auto scaled = minmax_apply(residual, scale);
    const auto windows = make_windows(scaled, static_cast<std::size_t>(s.window));

    TrainConfig tc;
    tc.epochs = s.epochs;
    tc.learning_rate = s.learning_rate;
    tc.seed = seed;
    const auto fitted = train(std::move(model), windows, tc).model;

    std::vector<double> realized;
    if (s.horizon_mode == PredictMode::RollingOneStep) {
        realized = minmax_apply(remove_components(parts, test.values(), static_cast<long>(n)), scale);
    }
    const auto pred = predict(fitted, scaled, horizon, s.horizon_mode, realized);
    return recompose_at(parts, minmax_invert(pred, scale), static_cast<long>(n));
}

struct ForecastTask {
    ModelId model;
    std::string id;
    Kind kind;
    const MonthlySeries* train;
    const MonthlySeries* test;
};

std::vector<ForecastTask> forecast_tasks(const IndustryPanel& train, const IndustryPanel& test,
                                         const std::vector<ModelId>& models) {
    if (models.empty()) throw Error(ErrorCode::Config, "no models selected");
    std::vector<ForecastTask> tasks;
    for (ModelId m : models) {
        for (const auto& [id, rec] : train.industries) {
            const auto it = test.industries.find(id);
            if (it == test.industries.end()) throw Error(ErrorCode::Misaligned, "industry " + id + " has no test split");
            tasks.push_back({m, id, Kind::Demand, &rec.demand, &it->second.demand});
            tasks.push_back({m, id, Kind::Inventory, &rec.inventory, &it->second.inventory});
        }
    }
    return tasks;
}

std::string task_label(const ForecastTask& t) {
    return std::string(model_name(t.model)) + " " + std::string(kind_name(t.kind)) + " forecast for " + t.id;
}

std::uint64_t task_seed(std::uint64_t seed, const ForecastTask& t) {
    return derive_seed(seed, std::string(model_name(t.model)) + "/" + t.id + "/" + std::string(kind_name(t.kind)));
}

std::vector<double> run_task(const ForecastTask& t, const ForecastSettings& s, std::uint64_t seed) {
    return forecast_series(t.model, *t.train, *t.test, s, task_seed(seed, t));
}

ForecastPool collect(const std::vector<ForecastTask>& tasks, std::vector<std::vector<double>>& out,
                     const std::vector<std::exception_ptr>& errors) {
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    ForecastPool pool;
    for (std::size_t k = 0; k < tasks.size(); ++k) pool[tasks[k].model][{tasks[k].id, tasks[k].kind}] = std::move(out[k]);
    return pool;
}

bool all_positive(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
}

}  // namespace

PredictMode parse_horizon_mode(std::string_view text) {
    if (text == "rolling" || text == "rolling_one_step") return PredictMode::RollingOneStep;
    if (text == "recursive") return PredictMode::Recursive;
    throw Error(ErrorCode::Config, "horizon mode expects rolling or recursive, got '" + std::string(text) + "'");
}

std::string_view horizon_mode_name(PredictMode mode) noexcept {
    return mode == PredictMode::RollingOneStep ? "rolling" : "recursive";
}

void PipelineOptions::validate() const {
    if (panel.empty()) throw Error(ErrorCode::Config, "key 'panel' is required");
    margins.validate();
    if (models.empty()) throw Error(ErrorCode::Config, "key 'models' selects no model");
    if (analysis_to < analysis_from) throw Error(ErrorCode::Config, "analysis_to precedes analysis_from");
    if (forecast.window < 1) throw Error(ErrorCode::Config, "key 'window' must be at least 1");
    if (forecast.hidden < 1) throw Error(ErrorCode::Config, "key 'hidden' must be at least 1");
    if (forecast.epochs < 1) throw Error(ErrorCode::Config, "key 'epochs' must be at least 1");
    if (!(forecast.learning_rate > 0.0)) throw Error(ErrorCode::Config, "key 'learning_rate' must be positive");
    if (jobs < 1) throw Error(ErrorCode::Config, "jobs must be at least 1");
}

PipelineOptions options_from_config(const KeyValueConfig& cfg, const fs::path& base_dir) {
    cfg.require_known({"panel", "deflators", "annotations", "out_dir", "margins.M", "margins.W", "margins.R",
                       "train_end", "analysis_from", "analysis_to", "seed", "models", "window", "hidden", "epochs",
                       "learning_rate", "horizon_mode", "jobs"});
    PipelineOptions o;
    o.panel_text = cfg.get_string("panel", "");
    if (o.panel_text.empty()) throw Error(ErrorCode::Config, "key 'panel' is required");
    o.panel = resolve(base_dir, o.panel_text);
    if (auto v = cfg.get("deflators"); v && !v->empty()) {
        o.deflators_text = *v;
        o.deflators = resolve(base_dir, *v);
    }
    if (auto v = cfg.get("annotations"); v && !v->empty()) {
        o.annotations_text = *v;
        o.annotations = resolve(base_dir, *v);
    }
    o.out_dir_text = cfg.get_string("out_dir", "out");
    o.out_dir = resolve(base_dir, o.out_dir_text);

    for (Stage s : {Stage::Manufacturer, Stage::Wholesaler, Stage::Retailer}) {
        const std::string key = "margins." + std::string(stage_code(s));
        o.margins.rates[s] = cfg.get_double(key, o.margins.rates.at(s));
    }
    o.train_end = month_key(cfg, "train_end", o.train_end);
    o.analysis_from = month_key(cfg, "analysis_from", o.analysis_from);
    o.analysis_to = month_key(cfg, "analysis_to", o.analysis_to);
    o.seed = cfg.get_u64("seed", o.seed);
    if (auto v = cfg.get("models")) {
        std::set<ModelId> chosen;
        for (const auto& name : split(*v, ',')) {
            const auto t = trim(name);
            if (t.empty()) continue;
            try {
                chosen.insert(parse_model(t));
            } catch (const Error& e) {
                throw Error(ErrorCode::Config, "key 'models': unknown model '" + t + "'");
            }
        }
        o.models.assign(chosen.begin(), chosen.end());
    }
    o.forecast.window = static_cast<int>(cfg.get_long("window", o.forecast.window));
    o.forecast.hidden = static_cast<int>(cfg.get_long("hidden", o.forecast.hidden));
    const long epochs = cfg.get_long("epochs", static_cast<long>(o.forecast.epochs));
    if (epochs < 1) throw Error(ErrorCode::Config, "key 'epochs' must be at least 1");
    o.forecast.epochs = static_cast<std::size_t>(epochs);
    o.forecast.learning_rate = cfg.get_double("learning_rate", o.forecast.learning_rate);
    if (auto v = cfg.get("horizon_mode")) o.forecast.horizon_mode = parse_horizon_mode(*v);
    o.jobs = static_cast<int>(cfg.get_long("jobs", o.jobs));
    o.validate();
    return o;
}

PipelineOptions load_manifest(const fs::path& path) {
    const auto text = read_text_file(path);
    return options_from_config(KeyValueConfig::parse(text, path.string()), path.parent_path());
}

Json options_json(const PipelineOptions& o) {
    Json margins = Json::object();
    for (const auto& [s, r] : o.margins.rates) margins[std::string(stage_code(s))] = r;
    Json models = Json::array();
    for (ModelId m : o.models) models.push_back(std::string(model_name(m)));
    return Json{{"panel", o.panel_text},
                {"deflators", o.deflators ? Json(o.deflators_text) : Json(nullptr)},
                {"annotations", o.annotations ? Json(o.annotations_text) : Json(nullptr)},
                {"margins", margins},
                {"train_end", o.train_end.str()},
                {"analysis_from", o.analysis_from.str()},
                {"analysis_to", o.analysis_to.str()},
                {"seed", o.seed},
                {"models", models},
                {"window", o.forecast.window},
                {"hidden", o.forecast.hidden},
                {"epochs", o.forecast.epochs},
                {"learning_rate", o.forecast.learning_rate},
                {"horizon_mode", std::string(horizon_mode_name(o.forecast.horizon_mode))}};
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to '" + path.string() + "'");
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::Io, "SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int k = 0; k < len; ++k) {
        out.push_back(hex[md[k] >> 4]);
        out.push_back(hex[md[k] & 0xF]);
    }
    return out;
}

IndustryPanel load_panel(const PipelineOptions& options, std::vector<std::string>* warnings) {
    RawSeriesSet raw;
    try {
        raw = parse_panel_csv(read_text_file(options.panel));
    } catch (const Error& e) {
        throw e.code() == ErrorCode::Io ? e : with_context(e, options.panel.string());
    }
    if (warnings) warnings->insert(warnings->end(), raw.warnings.begin(), raw.warnings.end());
    const auto nominal = assemble_panel(raw);
    std::map<Stage, MonthlySeries> deflators;
    if (options.deflators) {
        try {
            deflators = parse_deflator_csv(read_text_file(*options.deflators));
        } catch (const Error& e) {
            throw e.code() == ErrorCode::Io ? e : with_context(e, options.deflators->string());
        }
    }
    return preprocess_panel(nominal, options.deflators ? &deflators : nullptr, options.margins);
}

std::vector<AdfRow> adf_panel(const IndustryPanel& panel, int jobs) {
    std::vector<AdfRow> rows;
    std::vector<const MonthlySeries*> series;
    for (const auto& [id, rec] : panel.industries) {
        rows.push_back({id, rec.stage, Kind::Demand, std::nullopt, "ok"});
        series.push_back(&rec.demand);
        rows.push_back({id, rec.stage, Kind::Inventory, std::nullopt, "ok"});
        series.push_back(&rec.inventory);
    }
    const long n = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
    for (long k = 0; k < n; ++k) {
        try {
            rows[k].result = adf_test(series[k]->values());
        } catch (const Error& e) {
            rows[k].status = e.what();
        }
    }
    return rows;
}

std::string adf_csv(const std::vector<AdfRow>& rows) {
    std::ostringstream os;
    os << "industry_id,stage,kind,statistic,lags,nobs,crit_1,crit_5,crit_10,reject_unit_root,status\n";
    for (const auto& r : rows) {
        os << r.industry_id << ',' << stage_code(r.stage) << ',' << kind_name(r.kind) << ',';
        if (const auto& a = r.result) {
            os << format_number(a->statistic) << ',' << a->lags_used << ',' << a->nobs << ','
               << format_number(a->crit_1) << ',' << format_number(a->crit_5) << ',' << format_number(a->crit_10)
               << ',' << (a->reject_unit_root ? "true" : "false");
        } else {
            os << ",,,,,,";
        }
        os << ',' << r.status << '\n';
    }
    return os.str();
}

std::vector<double> forecast_series(ModelId model, const MonthlySeries& history, const MonthlySeries& test,
                                    const ForecastSettings& s, std::uint64_t seed) {
    const std::size_t horizon = test.size();
    const auto x = history.values();
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
        return std::vector<double>(horizon, x.front());
    }
    switch (model) {
        case ModelId::Sarima: {
            const bool logged = all_positive(history.values());
            const auto y = logged ? log_values(history.values())
                                  : std::vector<double>(history.values().begin(), history.values().end());
            const auto spec = select_sarima(y, SarimaGrid::for_series(y));
            SarimaModel fitted;
            try {
                fitted = fit_sarima(y, spec).model;
            } catch (const SarimaNonConvergence& e) {
                fitted = e.best().model;
            }
            const auto f = forecast_sarima(fitted, y, horizon);
            return logged ? exp_values(f) : f;
        }
        case ModelId::TrendSeasonal:
            return forecast_trend_seasonal(fit_trend_seasonal(history.values()), horizon);
        case ModelId::Rnn:
            return neural_forecast(init_rnn(s.window, s.hidden, seed), history, test, s, seed);
        case ModelId::Lstm:
            return neural_forecast(init_lstm(s.window, s.hidden, seed), history, test, s, seed);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model");
}

ForecastPool forecast_panel(const IndustryPanel& train, const IndustryPanel& test, const std::vector<ModelId>& models,
                            const ForecastSettings& settings, std::uint64_t seed, int jobs) {
    const auto tasks = forecast_tasks(train, test, models);
    const long n = static_cast<long>(tasks.size());
    std::vector<std::vector<double>> out(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
    for (long k = 0; k < n; ++k) {
        try {
            out[k] = run_task(tasks[k], settings, seed);
        } catch (const Error& e) {
            errors[k] = std::make_exception_ptr(with_context(e, task_label(tasks[k])));
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    return collect(tasks, out, errors);
}

ForecastPool forecast_panel_serial(const IndustryPanel& train, const IndustryPanel& test,
                                   const std::vector<ModelId>& models, const ForecastSettings& settings,
                                   std::uint64_t seed) {
    const auto tasks = forecast_tasks(train, test, models);
    std::vector<std::vector<double>> out(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        try {
            out[k] = run_task(tasks[k], settings, seed);
        } catch (const Error& e) {
            errors[k] = std::make_exception_ptr(with_context(e, task_label(tasks[k])));
        }
    }
    return collect(tasks, out, errors);
}

std::string forecasts_csv(const ForecastPool& pool, YearMonth test_start) {
    std::ostringstream os;
    os << "model,industry_id,kind,period,value\n";
    for (const auto& [model, series] : pool) {
        for (const auto& [key, values] : series) {
            for (std::size_t k = 0; k < values.size(); ++k) {
                os << model_name(model) << ',' << key.first << ',' << kind_name(key.second) << ','
                   << test_start.plus(static_cast<long>(k)).str() << ',' << format_number(values[k]) << '\n';
            }
        }
    }
    return os.str();
}

ForecastPool parse_forecasts_csv(std::string_view text, YearMonth test_start) {
    ForecastPool pool;
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t n = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto where = "line " + std::to_string(n) + ": ";
        if (!header) {
            if (line != "model,industry_id,kind,period,value") {
                throw Error(ErrorCode::MalformedRow, where + "expected header model,industry_id,kind,period,value");
            }
            header = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 5) throw Error(ErrorCode::MalformedRow, where + "expected 5 fields");
        try {
            const ModelId model = parse_model(f[0]);
            const Kind kind = parse_kind(f[2]);
            const long offset = months_between(test_start, YearMonth::parse(f[3]));
            auto& values = pool[model][{f[1], kind}];
            if (offset != static_cast<long>(values.size())) {
                throw Error(ErrorCode::MalformedRow, "periods must run contiguously from " + test_start.str());
            }
            std::size_t used = 0;
            const double v = std::stod(f[4], &used);
            if (used != f[4].size()) throw Error(ErrorCode::MalformedRow, "bad value '" + f[4] + "'");
            values.push_back(v);
        } catch (const Error& e) {
            throw with_context(e, "line " + std::to_string(n));
        } catch (const std::exception&) {
            throw Error(ErrorCode::MalformedRow, where + "bad value '" + f[4] + "'");
        }
    }
    if (!header) throw Error(ErrorCode::MalformedRow, "empty forecasts file");
    return pool;
}

std::vector<AmplificationRecord> measure_panel(const IndustryPanel& panel, const ForecastPool& pool, ModelId model,
                                               YearMonth train_end, YearMonth from, YearMonth to) {
    const YearMonth test_start = train_end.plus(1);
    const long a = months_between(test_start, from);
    const long b = months_between(test_start, to);
    if (a < 0 || b < a) {
        throw Error(ErrorCode::OutOfRange,
                    "analysis window " + from.str() + ".." + to.str() + " must lie after " + train_end.str());
    }
    const auto model_it = pool.find(model);
    if (model_it == pool.end()) throw Error(ErrorCode::MissingForecast, "no forecasts for " + std::string(model_name(model)));

    std::vector<AmplificationRecord> records;
    for (const auto& [id, rec] : panel.industries) {
        const auto& forecasts = model_it->second;
        const auto fd = forecasts.find({id, Kind::Demand});
        const auto fi = forecasts.find({id, Kind::Inventory});
        if (fd == forecasts.end() || fi == forecasts.end()) {
            throw Error(ErrorCode::MissingForecast, std::string(model_name(model)) + " forecast missing for " + id);
        }
        const auto& demand_hat = fd->second;
        const auto& inventory_hat = fi->second;
        if (static_cast<long>(demand_hat.size()) <= b || static_cast<long>(inventory_hat.size()) <= b) {
            throw Error(ErrorCode::MissingForecast, std::string(model_name(model)) + " forecast for " + id +
                                                        " ends before " + to.str());
        }
        const long last_train = months_between(rec.demand.start(), train_end);
        if (last_train < 0 || last_train >= static_cast<long>(rec.demand.size())) {
            throw Error(ErrorCode::OutOfRange, "industry " + id + " does not cover " + train_end.str());
        }
        std::vector<double> s{rec.demand[static_cast<std::size_t>(last_train)]};
        std::vector<double> inv{rec.inventory[static_cast<std::size_t>(last_train)]};
        s.insert(s.end(), demand_hat.begin(), demand_hat.end());
        inv.insert(inv.end(), inventory_hat.begin(), inventory_hat.end());
        const auto forecast_production = infer_production(s, inv);

        const auto actual_production = infer_production(rec.demand, rec.inventory).slice(from, to);
        const auto actual_demand = rec.demand.slice(from, to);
        const auto ua = static_cast<std::size_t>(a);
        const auto len = static_cast<std::size_t>(b - a + 1);
        records.push_back(measure_industry(id, rec.stage, std::span(forecast_production).subspan(ua, len),
                                           std::span(demand_hat).subspan(ua, len), actual_production.values(),
                                           actual_demand.values()));
    }
    return records;
}

std::string scatter_csv(const std::vector<AmplificationRecord>& records,
                        const std::map<std::string, ShockAnnotation>& annotations) {
    std::ostringstream os;
    os << "industry_id,stage,forecast_ratio,actual_ratio,zone,demand_shock,supply_shock\n";
    for (const auto& r : records) {
        if (!r.ok()) continue;
        os << r.industry_id << ',' << stage_code(r.stage) << ',' << format_number(*r.forecast_ratio) << ','
           << format_number(*r.actual_ratio) << ',' << zone_signs(*r.zone).substr(1, 3) << ',';
        if (const auto it = annotations.find(r.industry_id); it != annotations.end()) {
            os << it->second.demand_shock << ',' << it->second.supply_shock;
        } else {
            os << ',';
        }
        os << '\n';
    }
    return os.str();
}

PipelineResult run_pipeline(const PipelineOptions& options) {
    options.validate();
    std::vector<std::string> warnings;
    const auto panel = load_panel(options, &warnings);
    std::map<std::string, ShockAnnotation> annotations;
    if (options.annotations) {
        try {
            annotations = parse_annotations_csv(read_text_file(*options.annotations));
        } catch (const Error& e) {
            throw e.code() == ErrorCode::Io ? e : with_context(e, options.annotations->string());
        }
    }

    const auto [train, test] = split_panel(panel, options.train_end);
    const auto adf = adf_panel(train, options.jobs);
    const auto pool = forecast_panel(train, test, options.models, options.forecast, options.seed, options.jobs);

    PipelineResult result;
    result.table = benchmark(test, pool);
    result.best = select_best(result.table);
    result.records = measure_panel(panel, pool, result.best, options.train_end, options.analysis_from,
                                   options.analysis_to);
    result.zones = summarize_zones(result.records);

    Json inputs = Json::object();
    const auto digest = [&](const std::string& role, const fs::path& path, const std::string& text) {
        inputs[role] = Json{{"path", text}, {"sha256", sha256_hex(read_text_file(path))}};
    };
    digest("panel", options.panel, options.panel_text);
    if (options.deflators) digest("deflators", *options.deflators, options.deflators_text);
    if (options.annotations) digest("annotations", *options.annotations, options.annotations_text);

    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("benchmark.csv", benchmark_csv(result.table));
    files.emplace_back("benchmark.json", dump(to_json(result.table)));
    files.emplace_back("adf.csv", adf_csv(adf));
    files.emplace_back("forecasts.csv", forecasts_csv(pool, test.start));
    files.emplace_back("ratios.csv", ratios_csv(result.records));
    files.emplace_back("scatter.csv", scatter_csv(result.records, annotations));
    files.emplace_back("zones.json", dump(to_json(result.zones)));

    Json report{{"tool", "bwe"},
                {"version", std::string(kToolVersion)},
                {"manifest", options_json(options)},
                {"inputs", inputs},
                {"warnings", warnings},
                {"industries", panel.size()},
                {"train", Json{{"from", train.start.str()}, {"to", train.end.str()}}},
                {"test", Json{{"from", test.start.str()}, {"to", test.end.str()}}},
                {"best_model", std::string(model_name(result.best))},
                {"benchmark", to_json(result.table)},
                {"zones", to_json(result.zones)},
                {"ratios", to_json(std::span<const AmplificationRecord>(result.records))}};
    files.emplace_back("report.json", dump(report));

    Json outputs = Json::object();
    for (const auto& [name, text] : files) outputs[name] = sha256_hex(text);
    Json manifest{{"tool", "bwe"},
                  {"version", std::string(kToolVersion)},
                  {"created", utc_timestamp()},
                  {"jobs", options.jobs},
                  {"out_dir", options.out_dir_text},
                  {"options", options_json(options)},
                  {"inputs", inputs},
                  {"outputs", outputs}};
    files.emplace_back("manifest.json", dump(manifest));

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + options.out_dir.string() + "': " + ec.message());
    try {
        for (const auto& [name, text] : files) {
            const auto path = options.out_dir / name;
            result.outputs.push_back(path);
            write_text_file(path, text);
        }
    } catch (...) {
        for (const auto& p : result.outputs) fs::remove(p, ec);
        throw;
    }
    return result;
}

}  // namespace bwe
