#include <doctest.h>

#include <cmath>

#include "bwe/bullwhip.hpp"
#include "bwe/config.hpp"
#include "bwe/error.hpp"
#include "bwe/rng.hpp"
#include "bwe/synth.hpp"

using namespace bwe;

namespace {

std::vector<double> vals(const MonthlySeries& s) { return {s.values().begin(), s.values().end()}; }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("generated series examples") {
    SeriesRecipe r;
    const auto flat = gen_series(r);
    CHECK(flat.size() == 384);
    for (double v : flat.values()) CHECK(v == 100.0);

    r.noise_sd = 5.0;
    r.trend_slope = 0.1;
    r.seasonal_amp = 10.0;
    r.seed = 11;
    CHECK(vals(gen_series(r)) == vals(gen_series(r)));
    auto other = r;
    other.seed = 12;
    CHECK(vals(gen_series(r)) != vals(gen_series(other)));

    SeriesRecipe s;
    s.shock = ShockProfile{};
    const auto shocked = gen_series(s);
    for (std::size_t k = 0; k < shocked.size(); ++k) {
        const bool after = !(shocked.start().plus(static_cast<long>(k)) < YearMonth{2020, 3});
        CHECK(shocked[k] == doctest::Approx(after ? 130.0 : 100.0).epsilon(1e-15));
    }

    SeriesRecipe small;
    small.n = 23;
    CHECK(code_of([&] { (void)gen_series(small); }) == ErrorCode::TooShort);
    SeriesRecipe low;
    low.base = 1.0;
    low.seasonal_amp = 5.0;
    CHECK(code_of([&] { (void)gen_series(low); }) == ErrorCode::NonPositiveGenerated);
}

TEST_CASE("shock shapes") {
    ShockProfile spike{{2020, 3}, ShockShape::Spike, 0.5, 3};
    CHECK(spike.factor({2020, 2}) == 1.0);
    CHECK(spike.factor({2020, 3}) == 1.5);
    CHECK(spike.factor({2020, 5}) == doctest::Approx(1.25));
    CHECK(spike.factor({2020, 7}) == 1.0);
    ShockProfile dip{{2020, 3}, ShockShape::DipThenSurge, 0.2, 4};
    CHECK(dip.factor({2020, 3}) == doctest::Approx(0.8));
    CHECK(dip.factor({2020, 4}) == doctest::Approx(0.8));
    CHECK(dip.factor({2020, 5}) == doctest::Approx(1.2));
    CHECK_THROWS_AS((ShockProfile{{2020, 3}, ShockShape::Step, -1.0, 0}.validate()), Error);
    CHECK_THROWS_AS((ShockProfile{{2020, 3}, ShockShape::Step, 0.1, -1}.validate()), Error);
}

TEST_CASE("echelon bookkeeping") {
    for (OrderPolicy policy : {OrderPolicy::OrderUpTo, OrderPolicy::PassThrough}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            EchelonConfig cfg;
            cfg.seed = seed;
            cfg.policy = policy;
            cfg.demand_sd = 25.0;
            const auto run = simulate_echelon(cfg, 120);
            REQUIRE(run.demand.size() == 120);
            for (std::size_t t = 1; t < 120; ++t) {
                CHECK(run.inventory[t] == run.inventory[t - 1] + run.receipts[t] - run.shipments[t]);
                CHECK(run.shipments[t] <= run.demand[t]);
                CHECK(run.shipments[t] <= run.inventory[t - 1] + run.receipts[t]);
                CHECK(run.inventory[t] >= 0.0);
                CHECK(run.position[t] == doctest::Approx(run.position[t - 1] + run.orders[t] - run.shipments[t]));
                CHECK(run.position[t] > 0.0);
            }
        }
    }
}

TEST_CASE("echelon determinism and degenerate demand") {
    EchelonConfig cfg;
    cfg.seed = 3;
    const auto a = simulate_echelon(cfg, 60);
    const auto b = simulate_echelon(cfg, 60);
    CHECK(a.demand == b.demand);
    CHECK(a.inventory == b.inventory);
    CHECK(a.shipments == b.shipments);

    cfg.demand_sd = 0.0;
    const auto flat = simulate_echelon(cfg, 60);
    for (double o : flat.orders) CHECK(o == 100.0);
    CHECK(code_of([&] { (void)amplification_ratio(flat.orders, flat.demand); }) == ErrorCode::ZeroDemandVariance);
    CHECK(code_of([&] { (void)simulate_echelon(cfg, 59); }) == ErrorCode::TooShort);

    EchelonConfig wide;
    wide.demand_sd = 40.0;
    CHECK(code_of([&] { wide.validate(); }) == ErrorCode::Config);
}

TEST_CASE("order-up-to amplifies") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        EchelonConfig cfg;
        cfg.seed = seed;
        const auto run = simulate_echelon(cfg, 240);
        CHECK(amplification_ratio(run.orders, run.demand) > 1.0);
    }
}

TEST_CASE("pass-through does not amplify") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        EchelonConfig cfg;
        cfg.seed = seed;
        cfg.lead_time = 0;
        cfg.policy = OrderPolicy::PassThrough;
        const auto run = simulate_echelon(cfg, 240);
        const double r = amplification_ratio(run.orders, run.demand);
        CHECK(r >= 0.85);
        CHECK(r <= 1.15);
    }
}

TEST_CASE("echelon panel production equals orders") {
    EchelonConfig cfg;
    cfg.seed = 5;
    const auto panel = echelon_panel(cfg, 3, 60, {2004, 1});
    CHECK(panel.size() == 3);
    const auto& rec = panel.industries.at("E02");
    EchelonConfig one = cfg;
    one.seed = derive_seed(cfg.seed, "E02");
    const auto run = simulate_echelon(one, 60);
    const auto y = infer_production(rec.demand, rec.inventory);
    for (std::size_t t = 0; t < y.size(); ++t) CHECK(y[t] == doctest::Approx(run.orders[t + 1]));
}

TEST_CASE("default synthetic panel") {
    const auto p = synthetic_panel({});
    CHECK(p.size() == 77);
    CHECK(p.length() == 384);
    std::size_t m = 0, w = 0, r = 0;
    for (const auto& [id, rec] : p.industries) {
        CHECK(rec.demand.size() == 384);
        CHECK(rec.inventory.size() == 384);
        m += rec.stage == Stage::Manufacturer;
        w += rec.stage == Stage::Wholesaler;
        r += rec.stage == Stage::Retailer;
        const auto y = infer_production(rec.demand, rec.inventory);
        double sy = 0.0, ss = 0.0;
        for (double v : y.values()) sy += v;
        for (std::size_t k = 1; k < rec.demand.size(); ++k) ss += rec.demand[k];
        CHECK(std::abs(sy - (ss + rec.inventory[383] - rec.inventory[0])) <= 1e-9 * std::abs(sy));
    }
    CHECK(m == 51);
    CHECK(w == 19);
    CHECK(r == 7);
    p.validate();
}

TEST_CASE("simulation config") {
    KeyValueConfig cfg;
    const auto base = simulate_from_config(cfg);
    CHECK(base.size() == 77);

    cfg.set("seed", "8");
    const auto reseeded = simulate_from_config(cfg);
    CHECK(reseeded.size() == 77);
    CHECK(vals(reseeded.industries.at("M01").demand) != vals(base.industries.at("M01").demand));

    cfg.set("months", "59");
    try {
        (void)simulate_from_config(cfg);
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        CHECK(std::string(e.what()).find("months") != std::string::npos);
    }

    KeyValueConfig echelon = KeyValueConfig::parse("mode = echelon\nindustries = 3\nmonths = 60\n", "test");
    const auto e = simulate_from_config(echelon);
    CHECK(e.size() == 3);
    CHECK(e.industries.count("E01") == 1);
    CHECK(e.start.str() == "2004-01");

    KeyValueConfig typo = KeyValueConfig::parse("mdoe = panel\n", "test");
    CHECK(code_of([&] { (void)simulate_from_config(typo); }) == ErrorCode::Config);
}
