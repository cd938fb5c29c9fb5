#include "bwe/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numbers>

#include "bwe/error.hpp"
#include "bwe/rng.hpp"

namespace bwe {

ShockShape parse_shock_shape(std::string_view text) {
    if (text == "step") return ShockShape::Step;
    if (text == "spike") return ShockShape::Spike;
    if (text == "dip_then_surge") return ShockShape::DipThenSurge;
    throw Error(ErrorCode::Config, "unknown shock shape '" + std::string(text) + "'");
}

void ShockProfile::validate() const {
    if (!(magnitude > -1.0) || !std::isfinite(magnitude)) {
        throw Error(ErrorCode::InvalidArgument, "shock magnitude must exceed -1");
    }
    if (decay_months < 0) throw Error(ErrorCode::InvalidArgument, "shock decay_months must be non-negative");
    if (shape == ShockShape::DipThenSurge && std::abs(magnitude) >= 1.0) {
        throw Error(ErrorCode::InvalidArgument, "dip_then_surge magnitude must be below 1 in absolute value");
    }
}

double ShockProfile::factor(YearMonth month) const {
    const long k = months_between(onset, month);
    if (k < 0) return 1.0;
    const auto fade = [&](long since) {
        if (since < 0) return 0.0;
        if (decay_months == 0) return since == 0 ? 1.0 : 0.0;
        return std::max(0.0, 1.0 - static_cast<double>(since) / static_cast<double>(decay_months + 1));
    };
    switch (shape) {
        case ShockShape::Step: return 1.0 + magnitude;
        case ShockShape::Spike: return 1.0 + magnitude * fade(k);
        case ShockShape::DipThenSurge: {
            const long dip = std::max(1L, static_cast<long>((decay_months + 1) / 2));
            const double m = std::abs(magnitude);
            if (k < dip) return 1.0 - m;
            return 1.0 + m * fade(k - dip);
        }
    }
    return 1.0;
}

MonthlySeries gen_series(const SeriesRecipe& r, const std::string& industry_id, Stage stage, Kind kind) {
    if (r.n < 24) throw Error(ErrorCode::TooShort, "generated series needs n >= 24");
    if (r.noise_sd < 0.0) throw Error(ErrorCode::InvalidArgument, "noise_sd must be non-negative");
    if (r.shock) r.shock->validate();
    Rng rng(r.seed);
    std::vector<double> v(r.n);
    for (std::size_t t = 0; t < r.n; ++t) {
        const double tt = static_cast<double>(t);
        const YearMonth month = r.start.plus(static_cast<long>(t));
        double x = r.base + r.trend_slope * tt + r.seasonal_amp * std::sin(2.0 * std::numbers::pi * tt / 12.0);
        if (r.shock) x *= r.shock->factor(month);
        if (r.noise_sd > 0.0) x += r.noise_sd * rng.normal();
        if (!(x > 0.0)) {
            throw Error(ErrorCode::NonPositiveGenerated, "generated value " + std::to_string(x) + " at " + month.str() +
                                                             "; raise the base level");
        }
        v[t] = x;
    }
    return MonthlySeries(industry_id, stage, kind, r.start, std::move(v));
}

void EchelonConfig::validate() const {
    if (!(demand_sd >= 0.0)) throw Error(ErrorCode::Config, "demand_sd must be non-negative");
    if (!(demand_mean > 3.0 * demand_sd)) throw Error(ErrorCode::Config, "demand_mean must exceed 3 * demand_sd");
    if (lead_time < 0) throw Error(ErrorCode::Config, "lead_time must be non-negative");
    if (forecast_window < 1) throw Error(ErrorCode::Config, "forecast_window must be at least 1");
    if (!(safety_factor >= 0.0)) throw Error(ErrorCode::Config, "safety_factor must be non-negative");
}

EchelonRun simulate_echelon(const EchelonConfig& cfg, std::size_t n) {
    cfg.validate();
    if (n < 60) throw Error(ErrorCode::TooShort, "echelon simulation needs n >= 60");
    Rng rng(cfg.seed);
    const auto delay = static_cast<std::size_t>(cfg.lead_time) + 1;
    const double mu = cfg.demand_mean;
    const double safety = cfg.safety_factor * cfg.demand_sd * std::sqrt(static_cast<double>(delay));

    std::deque<double> in_transit(delay - 1, mu);  // front arrives next
    std::deque<double> history(static_cast<std::size_t>(cfg.forecast_window), mu);
    double on_hand = mu + safety;
    double history_sum = mu * static_cast<double>(cfg.forecast_window);

    EchelonRun run;
    const std::size_t total = cfg.warmup + n;
    for (std::size_t t = 0; t < total; ++t) {
        double receipt = 0.0;
        if (!in_transit.empty()) {
            receipt = in_transit.front();
            in_transit.pop_front();
        }
        on_hand += receipt;
        const double demand = std::max(0.0, rng.normal(mu, cfg.demand_sd));
        const double shipped = std::min(demand, on_hand);
        on_hand -= shipped;

        history_sum += demand - history.front();
        history.pop_front();
        history.push_back(demand);
        const double forecast = history_sum / static_cast<double>(cfg.forecast_window);

        double order = demand;
        if (cfg.policy == OrderPolicy::OrderUpTo) {
            double position = on_hand;
            for (double q : in_transit) position += q;
            order = std::max(0.0, static_cast<double>(delay) * forecast + safety - position);
        }
        in_transit.push_back(order);

        if (t >= cfg.warmup) {
            double position = on_hand;
            for (double q : in_transit) position += q;
            run.position.push_back(position);
            run.demand.push_back(demand);
            run.shipments.push_back(shipped);
            run.inventory.push_back(on_hand);
            run.receipts.push_back(receipt);
            run.orders.push_back(order);
        }
    }
    return run;
}

IndustryPanel echelon_panel(const EchelonConfig& cfg, std::size_t industries, std::size_t n, YearMonth start,
                            Stage stage) {
    if (industries == 0) throw Error(ErrorCode::Config, "industries must be at least 1");
    IndustryPanel panel;
    panel.start = start;
    panel.end = start.plus(static_cast<long>(n) - 1);
    const int width = industries >= 100 ? 3 : 2;
    for (std::size_t k = 1; k <= industries; ++k) {
        std::string id = std::to_string(k);
        id.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(id.size()))), '0');
        id.insert(0, "E");
        EchelonConfig c = cfg;
        c.seed = derive_seed(cfg.seed, id);
        auto run = simulate_echelon(c, n);
        panel.industries.emplace(id, IndustryRecord{stage, MonthlySeries(id, stage, Kind::Demand, start, run.shipments),
                                                    MonthlySeries(id, stage, Kind::Inventory, start, run.position)});
    }
    return panel;
}

void SyntheticPanelConfig::validate() const {
    if (months < 60) throw Error(ErrorCode::Config, "months must be at least 60");
    if (manufacturers + wholesalers + retailers == 0) throw Error(ErrorCode::Config, "panel needs at least one industry");
}

IndustryPanel synthetic_panel(const SyntheticPanelConfig& cfg) {
    cfg.validate();
    IndustryPanel panel;
    panel.start = cfg.start;
    panel.end = cfg.start.plus(static_cast<long>(cfg.months) - 1);
    const std::pair<Stage, std::size_t> groups[] = {
        {Stage::Manufacturer, cfg.manufacturers}, {Stage::Wholesaler, cfg.wholesalers}, {Stage::Retailer, cfg.retailers}};
    for (const auto& [stage, count] : groups) {
        for (std::size_t k = 1; k <= count; ++k) {
            std::string id = std::string(stage_code(stage)) + (k < 10 ? "0" : "") + std::to_string(k);
            Rng rng(derive_seed(cfg.seed, id));
            SeriesRecipe demand;
            demand.n = cfg.months;
            demand.start = cfg.start;
            demand.base = rng.uniform(2000.0, 20000.0);
            demand.trend_slope = demand.base * rng.uniform(-0.0005, 0.003);
            demand.seasonal_amp = demand.base * rng.uniform(0.02, 0.12);
            demand.noise_sd = demand.base * rng.uniform(0.005, 0.03);
            demand.seed = derive_seed(cfg.seed, id + "/demand");
            ShockProfile shock;
            shock.onset = cfg.shock_onset;
            const double pick = rng.uniform();
            shock.shape = pick < 0.4 ? ShockShape::DipThenSurge : (pick < 0.7 ? ShockShape::Spike : ShockShape::Step);
            shock.magnitude = rng.uniform(-0.25, 0.35);
            shock.decay_months = static_cast<int>(rng.uniform(3.0, 18.0));
            demand.shock = shock;

            SeriesRecipe inventory = demand;
            const double cover = rng.uniform(1.0, 2.5);
            inventory.base = demand.base * cover;
            inventory.trend_slope = demand.trend_slope * cover;
            inventory.seasonal_amp = demand.seasonal_amp * cover * 0.3;
            inventory.noise_sd = demand.noise_sd * cover * 0.5;
            inventory.seed = derive_seed(cfg.seed, id + "/inventory");
            ShockProfile inv_shock = shock;
            inv_shock.onset = shock.onset.plus(static_cast<long>(rng.uniform(1.0, 4.0)));
            inv_shock.magnitude = -0.5 * shock.magnitude;
            inventory.shock = inv_shock;

            panel.industries.emplace(id, IndustryRecord{stage, gen_series(demand, id, stage, Kind::Demand),
                                                        gen_series(inventory, id, stage, Kind::Inventory)});
        }
    }
    return panel;
}

IndustryPanel simulate_from_config(const KeyValueConfig& cfg) {
    cfg.require_known({"mode", "seed", "months", "start", "manufacturers", "wholesalers", "retailers", "shock_onset",
                       "industries", "stage", "demand_mean", "demand_sd", "lead_time", "forecast_window",
                       "safety_factor", "policy", "warmup"});
    const auto positive = [&](const std::string& key, long fallback) {
        const long v = cfg.get_long(key, fallback);
        if (v < 0) throw Error(ErrorCode::Config, "key '" + key + "' must be non-negative");
        return static_cast<std::size_t>(v);
    };
    const std::string mode = cfg.get_string("mode", "panel");
    const std::size_t months = positive("months", mode == "echelon" ? 240 : 384);
    if (months < 60) throw Error(ErrorCode::Config, "key 'months' must be at least 60");
    const auto month_key = [&](const std::string& key, YearMonth fallback) {
        const auto v = cfg.get(key);
        if (!v) return fallback;
        try {
            return YearMonth::parse(*v);
        } catch (const Error&) {
            throw Error(ErrorCode::Config, "key '" + key + "' expects YYYY-MM, got '" + *v + "'");
        }
    };
    if (mode == "panel") {
        SyntheticPanelConfig p;
        p.seed = cfg.get_u64("seed", p.seed);
        p.months = months;
        p.start = month_key("start", p.start);
        p.shock_onset = month_key("shock_onset", p.shock_onset);
        p.manufacturers = positive("manufacturers", static_cast<long>(p.manufacturers));
        p.wholesalers = positive("wholesalers", static_cast<long>(p.wholesalers));
        p.retailers = positive("retailers", static_cast<long>(p.retailers));
        return synthetic_panel(p);
    }
    if (mode == "echelon") {
        EchelonConfig e;
        e.seed = cfg.get_u64("seed", e.seed);
        e.demand_mean = cfg.get_double("demand_mean", e.demand_mean);
        e.demand_sd = cfg.get_double("demand_sd", e.demand_sd);
        e.lead_time = static_cast<int>(cfg.get_long("lead_time", e.lead_time));
        e.forecast_window = static_cast<int>(cfg.get_long("forecast_window", e.forecast_window));
        e.safety_factor = cfg.get_double("safety_factor", e.safety_factor);
        e.warmup = positive("warmup", static_cast<long>(e.warmup));
        const std::string policy = cfg.get_string("policy", "order_up_to");
        if (policy == "order_up_to") {
            e.policy = OrderPolicy::OrderUpTo;
        } else if (policy == "pass_through") {
            e.policy = OrderPolicy::PassThrough;
        } else {
            throw Error(ErrorCode::Config, "key 'policy' expects order_up_to or pass_through, got '" + policy + "'");
        }
        const Stage stage = parse_stage(cfg.get_string("stage", "R"));
        return echelon_panel(e, positive("industries", 50), months, month_key("start", YearMonth{2004, 1}), stage);
    }
    throw Error(ErrorCode::Config, "key 'mode' expects panel or echelon, got '" + mode + "'");
}

}  // namespace bwe
