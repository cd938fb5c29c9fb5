#include <doctest.h>

#include <cmath>

#include "bwe/bullwhip.hpp"
#include "bwe/error.hpp"
#include "bwe/rng.hpp"

using namespace bwe;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

double brute_ratio(const std::vector<double>& p, const std::vector<double>& d) {
    auto var_logdiff = [](const std::vector<double>& x) {
        std::vector<double> r;
        for (std::size_t k = 1; k < x.size(); ++k) r.push_back(std::log(x[k]) - std::log(x[k - 1]));
        double m = 0.0;
        for (double v : r) m += v;
        m /= static_cast<double>(r.size());
        double ss = 0.0;
        for (double v : r) ss += (v - m) * (v - m);
        return ss / static_cast<double>(r.size() - 1);
    };
    return var_logdiff(p) / var_logdiff(d);
}

AmplificationRecord labelled(std::string id, Stage s, Zone z) {
    AmplificationRecord r;
    r.industry_id = std::move(id);
    r.stage = s;
    r.zone = z;
    return r;
}

}  // namespace

TEST_CASE("production examples") {
    CHECK(infer_production(std::vector<double>{5, 6, 7}, std::vector<double>{10, 10, 10}) == std::vector<double>{6, 7});
    CHECK(infer_production(std::vector<double>{100, 110, 90}, std::vector<double>{50, 60, 55}) ==
          std::vector<double>{120, 85});
    CHECK(infer_production(std::vector<double>{4, 3}, std::vector<double>{10, 2}) == std::vector<double>{-5});
    CHECK(code_of([] { (void)infer_production(std::vector<double>{1, 2}, std::vector<double>{1}); }) ==
          ErrorCode::Misaligned);
    CHECK(code_of([] { (void)infer_production(std::vector<double>{1}, std::vector<double>{1}); }) == ErrorCode::TooShort);

    const MonthlySeries s("X", Stage::Wholesaler, Kind::Demand, {2020, 1}, {100, 110, 90});
    const MonthlySeries i("X", Stage::Wholesaler, Kind::Inventory, {2020, 1}, {50, 60, 55});
    const auto y = infer_production(s, i);
    CHECK(y.kind() == Kind::Production);
    CHECK(y.start().str() == "2020-02");
    const MonthlySeries late("X", Stage::Wholesaler, Kind::Inventory, {2020, 2}, {50, 60, 55});
    CHECK(code_of([&] { (void)infer_production(s, late); }) == ErrorCode::Misaligned);
}

TEST_CASE("production conserves flow") {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> s(50), inv(50);
        for (std::size_t k = 0; k < 50; ++k) {
            s[k] = std::round(rng.uniform(0, 1000));
            inv[k] = std::round(rng.uniform(0, 1000));
        }
        const auto y = infer_production(s, inv);
        double sy = 0.0, ss = 0.0;
        for (double v : y) sy += v;
        for (std::size_t k = 1; k < 50; ++k) ss += s[k];
        CHECK(sy == ss + (inv.back() - inv.front()));
    }
}

TEST_CASE("ratio examples") {
    std::vector<double> d(48), p(48);
    for (std::size_t k = 0; k < 48; ++k) {
        d[k] = k % 2 ? 110.0 : 100.0;
        p[k] = k % 2 ? 120.0 : 100.0;
    }
    CHECK(amplification_ratio(d, d) == 1.0);
    const double closed = std::pow(std::log(1.2) / std::log(1.1), 2.0);
    CHECK(std::abs(amplification_ratio(p, d) - closed) < 1e-12);
    CHECK(std::abs(closed - 3.6592953460058064) < 1e-12);
    CHECK(code_of([] { (void)amplification_ratio(std::vector<double>{1, 2, 3}, std::vector<double>(3, 5.0)); }) ==
          ErrorCode::ZeroDemandVariance);
    CHECK(code_of([] { (void)amplification_ratio(std::vector<double>{1, -2, 3}, std::vector<double>{1, 2, 3}); }) ==
          ErrorCode::NonPositiveValue);
    CHECK(code_of([] { (void)amplification_ratio(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }) ==
          ErrorCode::TooShort);
}

TEST_CASE("ratio over a calendar window") {
    std::vector<double> d(60), p(60);
    for (std::size_t k = 0; k < 60; ++k) {
        d[k] = 100.0 + static_cast<double>(k % 3);
        p[k] = 100.0 + 2.0 * static_cast<double>(k % 4);
    }
    const MonthlySeries ds("X", Stage::Retailer, Kind::Demand, {2019, 1}, d);
    const MonthlySeries ps("X", Stage::Retailer, Kind::Production, {2019, 1}, p);
    const double r = amplification_ratio(ps, ds, {2020, 1}, {2022, 12});
    CHECK(std::abs(r - brute_ratio({p.begin() + 12, p.begin() + 48}, {d.begin() + 12, d.begin() + 48})) < 1e-12);
    CHECK(code_of([&] { (void)amplification_ratio(ps, ds, {2018, 1}, {2020, 1}); }) == ErrorCode::OutOfRange);
}

TEST_CASE("ratio matches brute force and is scale invariant") {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(trial % 60);
        std::vector<double> p(n), d(n);
        for (std::size_t k = 0; k < n; ++k) {
            p[k] = rng.uniform(1.0, 500.0);
            d[k] = rng.uniform(1.0, 500.0);
        }
        const double r = amplification_ratio(p, d);
        CHECK(std::abs(r - brute_ratio(p, d)) <= 1e-12 * std::max(1.0, r));
        const double c = rng.uniform(0.01, 100.0), k = rng.uniform(0.01, 100.0);
        std::vector<double> cp(n), kd(n);
        for (std::size_t j = 0; j < n; ++j) {
            cp[j] = c * p[j];
            kd[j] = k * d[j];
        }
        CHECK(std::abs(amplification_ratio(cp, kd) - r) <= 1e-12 * std::max(1.0, r));
    }
}

TEST_CASE("zone classification") {
    CHECK(classify_zone(1.2, 1.5) == Zone::TruePositive);
    CHECK(zone_label(Zone::TruePositive) == "Accurately Forecasted Bullwhip");
    CHECK(classify_zone(0.8, 1.5) == Zone::FalseNegative);
    CHECK(zone_label(Zone::FalseNegative) == "False Negative Bullwhip");
    CHECK(classify_zone(1.0, 1.0) == Zone::TrueNegative);
    CHECK(classify_zone(1.3, 0.2) == Zone::FalsePositive);
    CHECK(classify_zone(1.0, 1.0000001) == Zone::FalseNegative);
    CHECK(zone_signs(Zone::FalsePositive) == "(+,-)");
}

TEST_CASE("zone percentages for 21, 30, 2 and 24 records") {
    std::vector<AmplificationRecord> recs;
    const std::pair<Zone, int> totals[] = {
        {Zone::TruePositive, 21}, {Zone::TrueNegative, 30}, {Zone::FalsePositive, 2}, {Zone::FalseNegative, 24}};
    int k = 0;
    for (const auto& [z, n] : totals) {
        for (int i = 0; i < n; ++i) recs.push_back(labelled("I" + std::to_string(k++), Stage::Manufacturer, z));
    }
    const auto s = summarize_zones(recs);
    CHECK(s.total.total == 77);
    CHECK(std::abs(s.total.percent(Zone::TruePositive) - 27.3) < 0.05);
    CHECK(std::abs(s.total.percent(Zone::TrueNegative) - 39.0) < 0.05);
    CHECK(std::abs(s.total.percent(Zone::FalsePositive) - 2.6) < 0.05);
    CHECK(std::abs(s.total.percent(Zone::FalseNegative) - 31.2) < 0.05);
}

TEST_CASE("single record and brute-force tally") {
    const auto one = summarize_zones(std::vector<AmplificationRecord>{labelled("A", Stage::Retailer, Zone::FalsePositive)});
    CHECK(one.total.percent(Zone::FalsePositive) == 100.0);
    CHECK(one.stages.at(Stage::Retailer).total == 1);

    const Stage stages[] = {Stage::Manufacturer, Stage::Wholesaler, Stage::Retailer};
    std::vector<AmplificationRecord> recs;
    for (int i = 0; i < 10; ++i) recs.push_back(labelled("I" + std::to_string(i), stages[i % 3], kAllZones[static_cast<std::size_t>((i * 7) % 4)]));
    AmplificationRecord bad;
    bad.industry_id = "Z";
    bad.status = "undefined ratio: actual NonPositiveValue";
    recs.push_back(bad);
    const auto s = summarize_zones(recs);
    CHECK(s.undefined == 1);
    std::size_t sum = 0;
    for (const auto& [stage, c] : s.stages) {
        std::size_t stage_sum = 0;
        double pct = 0.0;
        for (Zone z : kAllZones) {
            std::size_t tally = 0;
            for (const auto& r : recs) tally += (r.zone && r.stage == stage && *r.zone == z) ? 1 : 0;
            CHECK(c.counts[static_cast<std::size_t>(z)] == tally);
            stage_sum += c.counts[static_cast<std::size_t>(z)];
            pct += c.percent(z);
        }
        CHECK(stage_sum == c.total);
        CHECK(std::abs(pct - 100.0) < 0.1);
        sum += stage_sum;
    }
    CHECK(sum + s.undefined == recs.size());
}

TEST_CASE("industry measurement keeps undefined ratios visible") {
    const std::vector<double> d{100, 110, 100, 110}, p{100, 120, 100, 120}, neg{100, -5, 100, 120};
    const auto ok = measure_industry("A", Stage::Manufacturer, p, d, p, d);
    CHECK(ok.ok());
    CHECK(ok.status == "ok");
    const auto bad = measure_industry("B", Stage::Manufacturer, p, d, neg, d);
    CHECK_FALSE(bad.ok());
    CHECK(bad.forecast_ratio.has_value());
    CHECK(bad.status.find("undefined ratio") == 0);
    const std::vector<AmplificationRecord> recs{bad, ok};
    const auto csv = ratios_csv(recs);
    CHECK(csv.find("industry_id,stage,forecast_ratio,actual_ratio,zone,status\nA,M,") == 0);
    CHECK(csv.find("\nB,M,") != std::string::npos);
}

TEST_CASE("annotations") {
    const auto a = parse_annotations_csv("industry_id,demand_shock,supply_shock\n33A,Less affected,Negative\n11C,,\n");
    CHECK(a.at("33A").supply_shock == "Negative");
    CHECK(a.at("11C").demand_shock.empty());
    CHECK_THROWS_AS((void)parse_annotations_csv("id,x\n"), Error);
}
