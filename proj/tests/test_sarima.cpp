#include <doctest.h>

#include <cmath>

#include "bwe/error.hpp"
#include "bwe/rng.hpp"
#include "bwe/sarima.hpp"
#include "bwe/serialize.hpp"

using namespace bwe;

namespace {

std::vector<double> simulate_ar1(double phi, std::size_t n, std::uint64_t seed, double c = 0.0) {
    Rng rng(seed);
    std::vector<double> x(n + 100, 0.0);
    for (std::size_t t = 1; t < x.size(); ++t) x[t] = c + phi * x[t - 1] + rng.normal();
    return {x.begin() + 100, x.end()};
}

std::vector<double> simulate_seasonal_ar(double Phi, std::size_t m, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n + 10 * m, 0.0);
    for (std::size_t t = m; t < x.size(); ++t) x[t] = Phi * x[t - m] + rng.normal();
    return {x.begin() + static_cast<long>(10 * m), x.end()};
}

const std::vector<double> kFixture{1.2, -0.3, 0.8, 2.1, -1.0, 0.4, 0.9, -0.7, 1.5, 0.2,
                                   -0.4, 1.1, 0.6, -0.9, 0.3, 1.8, -0.2, 0.5, 0.7, -1.3};

}  // namespace

TEST_CASE("spec validation") {
    CHECK_NOTHROW(SarimaSpec{2, 1, 2, 1, 1, 1, 12}.validate());
    CHECK_THROWS_AS((SarimaSpec{0, 2, 0, 0, 1, 0, 12}.validate()), Error);
    CHECK_THROWS_AS((SarimaSpec{4, 0, 0, 0, 0, 0, 12}.validate()), Error);
    CHECK_THROWS_AS((SarimaSpec{-1, 0, 0, 0, 0, 0, 12}.validate()), Error);
    CHECK(SarimaSpec{1, 0, 1, 1, 0, 0, 12}.parameter_count() == 4);
    CHECK(SarimaSpec{1, 1, 1, 1, 0, 0, 12}.parameter_count() == 3);
}

TEST_CASE("polynomials") {
    CHECK(multiply({1, -1}, {1, -1}) == LagPolynomial{1, -2, 1});
    const auto d = differencing_polynomial(1, 1, 4);
    CHECK(d == LagPolynomial{1, -1, 0, 0, -1, 1});
    CHECK(difference_series(std::vector<double>{1, 4, 9, 16}, 1, 0, 12) == std::vector<double>{3, 5, 7});
    CHECK(std::abs(min_root_modulus({1, -0.5}) - 2.0) < 1e-12);
    CHECK(std::isinf(min_root_modulus({1})));
}

TEST_CASE("zero model objective is the sum of squared observations") {
    const auto m = SarimaModel::zeros({0, 0, 0, 0, 0, 0, 12});
    double ss = 0.0;
    for (double v : kFixture) ss += v * v;
    CHECK(std::abs(css_objective(m, kFixture) - ss) < 1e-12);
}

TEST_CASE("objective and forecasts match an independent recursion") {
    auto m = SarimaModel::zeros({1, 0, 1, 1, 0, 1, 4});
    m.phi = {0.4};
    m.theta = {0.3};
    m.Phi = {-0.2};
    m.Theta = {0.25};
    m.intercept = 0.1;
    CHECK(std::abs(css_objective(m, kFixture) - 16.730499468285668) < 1e-10);
    const auto f = forecast_differenced(m, kFixture, 6);
    const std::vector<double> expected{-1.0152602885465403, -0.28404161541861617, -0.019585396167446437,
                                       -0.024381033466978563, 0.05760957218588153, 0.09863132887435262};
    for (std::size_t h = 0; h < 6; ++h) CHECK(std::abs(f[h] - expected[h]) < 1e-12);
}

TEST_CASE("objective is lower at the generating coefficient") {
    const auto x = simulate_ar1(0.7, 400, 5);
    auto m = SarimaModel::zeros({1, 0, 0, 0, 0, 0, 12});
    const double at_zero = css_objective(m, x);
    m.phi = {0.7};
    CHECK(css_objective(m, x) < at_zero);
}

TEST_CASE("white noise MA(1) scan is minimised near zero") {
    Rng rng(21);
    std::vector<double> x(500);
    for (double& v : x) v = rng.normal();
    auto m = SarimaModel::zeros({0, 0, 1, 0, 0, 0, 12});
    double best_theta = 1.0, best = INFINITY;
    for (int k = -8; k <= 8; ++k) {
        m.theta = {0.1 * k};
        const double v = css_objective(m, x);
        if (v < best) {
            best = v;
            best_theta = 0.1 * k;
        }
    }
    CHECK(std::abs(best_theta) <= 0.1 + 1e-12);
}

TEST_CASE("AR(1) recovery") {
    const auto fit = fit_sarima(simulate_ar1(0.7, 500, 1), {1, 0, 0, 0, 0, 0, 12});
    CHECK(std::abs(fit.model.phi[0] - 0.7) <= 0.1);
    CHECK(fit.css <= fit.start_css);
    CHECK(is_admissible(fit.model));
}

TEST_CASE("seasonal AR recovery") {
    const auto fit = fit_sarima(simulate_seasonal_ar(0.5, 12, 600, 2), {0, 0, 0, 1, 0, 0, 12});
    CHECK(std::abs(fit.model.Phi[0] - 0.5) <= 0.15);
}

TEST_CASE("random-walk spec has no free coefficients") {
    Rng rng(4);
    std::vector<double> x(100);
    double acc = 10.0;
    for (double& v : x) v = (acc += rng.normal());
    const auto fit = fit_sarima(x, {0, 1, 0, 0, 0, 0, 12});
    const auto dx = difference_series(x, 1, 0, 12);
    double ms = 0.0;
    for (double v : dx) ms += v * v;
    CHECK(std::abs(fit.model.sigma2 - ms / static_cast<double>(dx.size())) < 1e-12);
    const auto f = forecast_sarima(fit.model, x, 24);
    for (double v : f) CHECK(v == x.back());
}

TEST_CASE("forecast examples") {
    auto c = SarimaModel::zeros({0, 0, 0, 0, 0, 0, 12});
    c.intercept = 3.25;
    for (double v : forecast_sarima(c, kFixture, 5)) CHECK(v == 3.25);

    auto ar = SarimaModel::zeros({1, 0, 0, 0, 0, 0, 12});
    ar.phi = {0.5};
    const auto f = forecast_differenced(ar, std::vector<double>{0.3, 2.0}, 3);
    CHECK(f == std::vector<double>{1.0, 0.5, 0.25});
}

TEST_CASE("stationary forecasts converge to the long-run mean") {
    auto m = SarimaModel::zeros({1, 0, 0, 1, 0, 0, 4});
    m.phi = {0.5};
    m.Phi = {0.3};
    m.intercept = 2.0;
    const auto f = forecast_sarima(m, kFixture, 200);
    const double a1 = (1.0 - 0.5) * (1.0 - 0.3);
    CHECK(std::abs(f.back() - 2.0 / a1) < 1e-3);
}

TEST_CASE("root flipping restores admissibility") {
    auto m = SarimaModel::zeros({1, 0, 1, 0, 0, 0, 12});
    m.phi = {1.25};
    m.theta = {-2.0};
    CHECK_FALSE(is_admissible(m));
    const auto p = project_admissible(m);
    CHECK(is_admissible(p));
    CHECK(std::abs(p.phi[0] - 0.8) < 1e-12);
    CHECK(std::abs(p.theta[0] - -0.5) < 1e-12);
}

TEST_CASE("fitted models are admissible and never worse than the start") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto x = simulate_ar1(0.6, 200, seed, 1.0);
        for (const SarimaSpec& s : {SarimaSpec{2, 0, 1, 0, 0, 0, 12}, SarimaSpec{1, 0, 1, 1, 0, 1, 12},
                                    SarimaSpec{0, 1, 2, 0, 0, 0, 12}}) {
            try {
                const auto fit = fit_sarima(x, s);
                CHECK(is_admissible(fit.model));
                CHECK(fit.css <= fit.start_css);
                CHECK(fit.model.sigma2 >= 0.0);
            } catch (const SarimaNonConvergence& e) {
                CHECK(is_admissible(e.best().model));
            }
        }
    }
}

TEST_CASE("too short") {
    try {
        (void)fit_sarima(std::vector<double>(20, 1.0), {1, 0, 0, 1, 0, 0, 12});
        FAIL("expected TooShort");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooShort);
    }
}

TEST_CASE("selection") {
    SarimaGrid empty;
    empty.p.clear();
    CHECK_THROWS_AS((void)select_sarima(kFixture, empty), Error);

    Rng rng(1);
    std::vector<double> wn(240);
    for (double& v : wn) v = rng.normal();
    SarimaGrid g;
    const auto spec = select_sarima(wn, g);
    CHECK(spec == SarimaSpec{0, 0, 0, 0, 0, 0, 12});

    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = select_sarima(simulate_ar1(0.8, 300, seed), g);
        hits += (s.p >= 1 && s.q == 0) ? 1 : 0;
    }
    CHECK(hits >= 16);
}

TEST_CASE("grid specs are lexicographic") {
    const auto specs = SarimaGrid{}.specs();
    CHECK(specs.size() == 72);
    CHECK(specs.front() == SarimaSpec{0, 0, 0, 0, 0, 0, 12});
    CHECK(specs.back() == SarimaSpec{2, 0, 2, 1, 1, 1, 12});
}

TEST_CASE("json round trip") {
    auto m = SarimaModel::zeros({1, 0, 1, 1, 0, 1, 4});
    m.phi = {0.4};
    m.theta = {0.3};
    m.Phi = {-0.2};
    m.Theta = {0.25};
    m.intercept = 0.1;
    m.sigma2 = 0.7;
    const auto back = sarima_from_json(Json::parse(to_json(m).dump()));
    CHECK(back.spec == m.spec);
    CHECK(back.phi == m.phi);
    CHECK(back.Theta == m.Theta);
    CHECK(back.sigma2 == m.sigma2);
}
