#include <doctest.h>

#include <cmath>

#include "bwe/error.hpp"
#include "bwe/rng.hpp"
#include "bwe/stationarity.hpp"

using namespace bwe;

namespace {

std::vector<double> white_noise(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    return x;
}

std::vector<double> random_walk(std::uint64_t seed, std::size_t n) {
    auto x = white_noise(seed, n);
    for (std::size_t k = 1; k < n; ++k) x[k] += x[k - 1];
    return x;
}

}  // namespace

TEST_CASE("constant series has a singular design") {
    try {
        (void)adf_statistic(std::vector<double>(30, 4.0), 0);
        FAIL("expected SingularDesign");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularDesign);
    }
}

TEST_CASE("ten-point fixture matches hand OLS") {
    const std::vector<double> x{1, 2, 1, 3, 2, 4, 3, 5, 4, 6};
    CHECK(std::abs(adf_statistic(x, 0) - -1.1864302154801294) < 1e-10);
    CHECK(std::abs(adf_statistic(x, 0, AdfRegression::ConstantTrend) - -12.933333333333335) < 1e-9);
}

TEST_CASE("seeded statistics match a reference implementation") {
    const auto wn = white_noise(42, 200);
    CHECK(std::abs(adf_statistic(wn, 0) - -14.972594390281062) < 1e-9);
    CHECK(adf_statistic(wn, 0) < -6.0);

    const auto auto_wn = adf_test(wn);
    CHECK(auto_wn.lags_used == 3);
    CHECK(auto_wn.nobs == 196);
    CHECK(std::abs(auto_wn.statistic - -5.386408675505371) < 1e-9);
    CHECK(std::abs(auto_wn.crit_5 - -2.876401960790147) < 1e-9);

    Rng rng(7);
    std::vector<double> rw(300);
    double acc = 0.0;
    for (double& v : rw) {
        acc += rng.normal();
        v = acc;
    }
    const auto r = adf_test(rw);
    CHECK(r.lags_used == 0);
    CHECK(r.nobs == 299);
    CHECK(std::abs(r.statistic - -1.001218382297335) < 1e-9);
    CHECK(std::abs(r.crit_1 - -3.4524113009049935) < 1e-9);
    CHECK(std::abs(r.crit_5 - -2.8712554127251764) < 1e-9);
    CHECK(std::abs(r.crit_10 - -2.571946570731871) < 1e-9);
    CHECK_FALSE(r.reject_unit_root);

    const auto ct = adf_test(rw, {AdfRegression::ConstantTrend, SignificanceLevel::FivePercent});
    CHECK(ct.lags_used == 1);
    CHECK(std::abs(ct.statistic - -2.750315535631889) < 1e-9);
    CHECK(std::abs(ct.crit_5 - -3.4253263526614224) < 1e-9);
}

TEST_CASE("decisions on white noise and random walk") {
    CHECK(adf_test(white_noise(3, 300)).reject_unit_root);
    CHECK_FALSE(adf_test(random_walk(3, 300)).reject_unit_root);
}

TEST_CASE("too short") {
    try {
        (void)adf_test(std::vector<double>(10, 1.0));
        FAIL("expected TooShort");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooShort);
    }
}

TEST_CASE("result invariants") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = adf_test(seed % 2 ? white_noise(seed, 120) : random_walk(seed, 120));
        CHECK(r.crit_1 < r.crit_5);
        CHECK(r.crit_5 < r.crit_10);
        CHECK(r.reject_unit_root == (r.statistic < r.crit_5));
        CHECK(r.lags_used <= schwert_max_lag(120));
    }
    CHECK(schwert_max_lag(300) == 15);
    CHECK(schwert_max_lag(100) == 12);
}

TEST_CASE("affine invariance with a constant") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = random_walk(seed, 150);
        std::vector<double> y(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) y[k] = 3.5 * x[k] - 20.0;
        for (std::size_t lags : {0u, 2u, 5u}) CHECK(std::abs(adf_statistic(x, lags) - adf_statistic(y, lags)) < 1e-8);
    }
}

TEST_CASE("parallel rejection rate equals the serial reference") {
    AdfSweep sweep{40, 150, 1, false};
    CHECK(adf_rejection_rate(sweep, 2) == adf_rejection_rate_serial(sweep));
    sweep.random_walk = true;
    CHECK(adf_rejection_rate(sweep, 3) == adf_rejection_rate_serial(sweep));
}
