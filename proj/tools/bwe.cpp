// bwe: forecast benchmarking and bullwhip measurement for industry panels.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bwe/config.hpp"
#include "bwe/error.hpp"
#include "bwe/format.hpp"
#include "bwe/pipeline.hpp"
#include "bwe/serialize.hpp"
#include "bwe/synth.hpp"

namespace fs = std::filesystem;
using namespace bwe;

namespace {

// Manifest keys that may be given on the command line; flag > manifest > default.
struct Overrides {
    std::string config;
    std::string panel, deflators, annotations, out_dir;
    std::string train_end, analysis_from, analysis_to;
    std::string models, horizon_mode;
    std::optional<std::uint64_t> seed;
    std::optional<long> epochs, window, hidden;
    std::optional<int> jobs;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Pipeline manifest (key = value)")->envname("BWE_CONFIG");
    cmd->add_option("--panel", o.panel, "Panel CSV");
    cmd->add_option("--deflators", o.deflators, "Deflator CSV");
    cmd->add_option("--train-end", o.train_end, "Last training month, YYYY-MM");
    cmd->add_option("--seed", o.seed, "Run seed");
    cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void add_model_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--models", o.models, "Comma-separated models (SARIMA,TrendSeasonal,RNN,LSTM)");
    cmd->add_option("--horizon-mode", o.horizon_mode, "Neural test-period mode")
        ->check(CLI::IsMember({"rolling", "recursive"}));
    cmd->add_option("--epochs", o.epochs, "Training epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--window", o.window, "Input window")->check(CLI::PositiveNumber);
    cmd->add_option("--hidden", o.hidden, "Hidden units")->check(CLI::PositiveNumber);
}

void add_analysis_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--annotations", o.annotations, "Shock annotation CSV");
    cmd->add_option("--analysis-from", o.analysis_from, "First analysis month, YYYY-MM");
    cmd->add_option("--analysis-to", o.analysis_to, "Last analysis month, YYYY-MM");
}

PipelineOptions resolve_options(const Overrides& o) {
    KeyValueConfig cfg;
    fs::path base = fs::current_path();
    if (!o.config.empty()) {
        const fs::path path(o.config);
        cfg = KeyValueConfig::parse(read_text_file(path), path.string());
        base = path.parent_path().empty() ? fs::current_path() : path.parent_path();
    }
    const auto set_path = [&](const char* key, const std::string& v) {
        if (!v.empty()) cfg.set(key, fs::absolute(v).lexically_normal().string());
    };
    const auto set = [&](const char* key, const std::string& v) {
        if (!v.empty()) cfg.set(key, v);
    };
    set_path("panel", o.panel);
    set_path("deflators", o.deflators);
    set_path("annotations", o.annotations);
    set_path("out_dir", o.out_dir);
    set("train_end", o.train_end);
    set("analysis_from", o.analysis_from);
    set("analysis_to", o.analysis_to);
    set("models", o.models);
    set("horizon_mode", o.horizon_mode);
    if (o.seed) cfg.set("seed", std::to_string(*o.seed));
    if (o.epochs) cfg.set("epochs", std::to_string(*o.epochs));
    if (o.window) cfg.set("window", std::to_string(*o.window));
    if (o.hidden) cfg.set("hidden", std::to_string(*o.hidden));
    if (o.jobs) cfg.set("jobs", std::to_string(*o.jobs));
    if (!cfg.has("panel")) throw Error(ErrorCode::Config, "no panel given (use --panel or --config)");
    return options_from_config(cfg, base);
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string print_report(const Json& report) {
    std::string out;
    out += "best model: " + report.at("best_model").get<std::string>() + "\n\n";
    const auto& bench = report.at("benchmark");
    std::vector<std::string> periods;
    for (const auto& p : bench.at("periods")) periods.push_back(p.at("label").get<std::string>());
    for (const char* kind : {"demand", "inventory"}) {
        out += std::string("MAPE % (variance), ") + kind + "\n";
        out += pad("model", 16);
        for (const auto& p : periods) out += pad(p, 24);
        out += "\n";
        std::vector<std::string> models;
        for (const auto& r : bench.at("rows")) {
            const auto m = r.at("model").get<std::string>();
            if (r.at("kind") == kind && std::find(models.begin(), models.end(), m) == models.end()) models.push_back(m);
        }
        for (const auto& m : models) {
            out += pad(m, 16);
            for (const auto& p : periods) {
                std::string cell = "-";
                for (const auto& r : bench.at("rows")) {
                    if (r.at("kind") == kind && r.at("model") == m && r.at("period") == p) {
                        cell = format_fixed(r.at("mape_mean").get<double>(), 2) + " (" +
                               format_fixed(r.at("mape_variance").get<double>(), 2) + ")";
                    }
                }
                out += pad(cell, 24);
            }
            out += "\n";
        }
        out += "\n";
    }

    const auto& zones = report.at("zones");
    const char* signs[] = {"(+,+)", "(-,-)", "(+,-)", "(-,+)"};
    out += "forecast vs actual amplification zones\n" + pad("stage", 14);
    for (const char* s : signs) out += pad(s, 16);
    out += "total\n";
    const auto row = [&](const std::string& name, const Json& c) {
        out += pad(name, 14);
        for (const char* s : signs) {
            out += pad(std::to_string(c.at(s).at("count").get<std::size_t>()) + " (" +
                           format_fixed(c.at(s).at("percent").get<double>(), 1) + "%)",
                       16);
        }
        out += std::to_string(c.at("total").get<std::size_t>()) + "\n";
    };
    for (const char* stage : {"Manufacturer", "Wholesaler", "Retailer"}) {
        if (zones.at("stages").contains(stage)) row(stage, zones.at("stages").at(stage));
    }
    row("Total", zones.at("total"));
    const auto undefined = zones.at("undefined").get<std::size_t>();
    if (undefined > 0) out += "undefined ratios: " + std::to_string(undefined) + "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forecast benchmarking and bullwhip measurement for industry panels"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Overrides o;
    std::string out_file, forecasts_file, report_file, model_name_arg;

    auto* ingest = app.add_subcommand("ingest", "Parse, deflate and margin-adjust a panel; print it as CSV");
    add_run_flags(ingest, o);
    ingest->add_option("-o,--output", out_file, "Output file (default stdout)");

    auto* adf = app.add_subcommand("adf", "ADF unit-root tests on every training series");
    add_run_flags(adf, o);
    adf->add_option("-o,--output", out_file, "Output file (default stdout)");

    auto* forecast = app.add_subcommand("forecast", "Forecast the test period with each model");
    add_run_flags(forecast, o);
    add_model_flags(forecast, o);
    forecast->add_option("-o,--output", out_file, "Output file (default stdout)");

    auto* bench = app.add_subcommand("benchmark", "MAPE table for a forecasts file");
    add_run_flags(bench, o);
    bench->add_option("--forecasts", forecasts_file, "Forecasts CSV")->required();
    bench->add_option("-o,--output", out_file, "Output file (default stdout)");

    auto* bullwhip = app.add_subcommand("bullwhip", "Amplification ratios and zones for one model's forecasts");
    add_run_flags(bullwhip, o);
    add_analysis_flags(bullwhip, o);
    bullwhip->add_option("--forecasts", forecasts_file, "Forecasts CSV")->required();
    bullwhip->add_option("--model", model_name_arg, "Model to analyse (default: best by benchmark)");
    bullwhip->add_option("-o,--output", out_file, "Output file (default stdout)");

    auto* report = app.add_subcommand("report", "Print the tables of a pipeline report");
    report->add_option("report", report_file, "report.json")->required();

    std::string sim_config;
    std::optional<std::uint64_t> sim_seed;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic panel CSV");
    simulate->add_option("--config", sim_config, "Simulation config (key = value)");
    simulate->add_option("--seed", sim_seed, "Seed override");
    simulate->add_option("-o,--output", out_file, "Output file (default stdout)");

    auto* pipeline = app.add_subcommand("pipeline", "Run the full pipeline and write every report");
    add_run_flags(pipeline, o);
    add_model_flags(pipeline, o);
    add_analysis_flags(pipeline, o);
    pipeline->add_option("--out-dir", o.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*ingest) {
            std::vector<std::string> warnings;
            const auto panel = load_panel(resolve_options(o), &warnings);
            print_warnings(warnings);
            emit(out_file, write_panel_csv(panel));
        } else if (*adf) {
            const auto opts = resolve_options(o);
            const auto panel = load_panel(opts);
            const auto train = split_panel(panel, opts.train_end).first;
            emit(out_file, adf_csv(adf_panel(train, opts.jobs)));
        } else if (*forecast) {
            const auto opts = resolve_options(o);
            const auto [train, test] = split_panel(load_panel(opts), opts.train_end);
            const auto pool = forecast_panel(train, test, opts.models, opts.forecast, opts.seed, opts.jobs);
            emit(out_file, forecasts_csv(pool, test.start));
        } else if (*bench) {
            const auto opts = resolve_options(o);
            const auto test = split_panel(load_panel(opts), opts.train_end).second;
            const auto pool = parse_forecasts_csv(read_text_file(forecasts_file), test.start);
            const auto table = benchmark(test, pool);
            emit(out_file, benchmark_csv(table));
            std::cerr << "best model: " << model_name(select_best(table)) << '\n';
        } else if (*bullwhip) {
            const auto opts = resolve_options(o);
            const auto panel = load_panel(opts);
            const auto test = split_panel(panel, opts.train_end).second;
            const auto pool = parse_forecasts_csv(read_text_file(forecasts_file), test.start);
            const ModelId model =
                model_name_arg.empty() ? select_best(benchmark(test, pool)) : parse_model(model_name_arg);
            const auto records =
                measure_panel(panel, pool, model, opts.train_end, opts.analysis_from, opts.analysis_to);
            emit(out_file, ratios_csv(records));
            std::cerr << "model: " << model_name(model) << '\n';
        } else if (*report) {
            const auto text = read_text_file(report_file);
            Json j;
            try {
                j = Json::parse(text);
                std::cout << print_report(j);
            } catch (const Json::exception& e) {
                throw Error(ErrorCode::MalformedRow, report_file + ": " + e.what());
            }
        } else if (*simulate) {
            KeyValueConfig cfg;
            if (!sim_config.empty()) cfg = KeyValueConfig::parse(read_text_file(sim_config), sim_config);
            if (sim_seed) cfg.set("seed", std::to_string(*sim_seed));
            emit(out_file, write_panel_csv(simulate_from_config(cfg)));
        } else if (*pipeline) {
            const auto opts = resolve_options(o);
            const auto result = run_pipeline(opts);
            std::cout << "best model " << model_name(result.best) << "; " << result.records.size()
                      << " industries; reports in " << opts.out_dir.string() << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
