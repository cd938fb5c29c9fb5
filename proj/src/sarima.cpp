#include "bwe/sarima.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "bwe/optim.hpp"
#include "bwe/series.hpp"
#include "bwe/stationarity.hpp"

namespace bwe {

void SarimaSpec::validate() const {
    if (p < 0 || d < 0 || q < 0 || P < 0 || D < 0 || Q < 0) {
        throw Error(ErrorCode::InvalidArgument, "SARIMA orders must be non-negative: " + str());
    }
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "seasonal period must be at least 1");
    if (d + D > 2) throw Error(ErrorCode::InvalidArgument, "total differencing d + D must not exceed 2: " + str());
    if (p > 3 || q > 3 || P > 3 || Q > 3) throw Error(ErrorCode::InvalidArgument, "ARMA orders are bounded by 3: " + str());
    if ((P > 0 || Q > 0 || D > 0) && m < 2) {
        throw Error(ErrorCode::InvalidArgument, "seasonal terms need a period of at least 2");
    }
}

std::string SarimaSpec::str() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")(" + std::to_string(P) +
           "," + std::to_string(D) + "," + std::to_string(Q) + ")" + std::to_string(m);
}

SarimaModel SarimaModel::zeros(const SarimaSpec& spec) {
    SarimaModel model;
    model.spec = spec;
    model.phi.assign(static_cast<std::size_t>(spec.p), 0.0);
    model.theta.assign(static_cast<std::size_t>(spec.q), 0.0);
    model.Phi.assign(static_cast<std::size_t>(spec.P), 0.0);
    model.Theta.assign(static_cast<std::size_t>(spec.Q), 0.0);
    return model;
}

LagPolynomial multiply(const LagPolynomial& a, const LagPolynomial& b) {
    if (a.empty() || b.empty()) return {};
    LagPolynomial out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

namespace {

LagPolynomial factor(const std::vector<double>& coefs, double sign, int stride) {
    LagPolynomial out(coefs.size() * static_cast<std::size_t>(stride) + 1, 0.0);
    out[0] = 1.0;
    for (std::size_t i = 0; i < coefs.size(); ++i) out[(i + 1) * static_cast<std::size_t>(stride)] = sign * coefs[i];
    return out;
}

// Lag/coefficient pairs of the non-zero entries above lag 0.
std::vector<std::pair<std::size_t, double>> nonzero_lags(const LagPolynomial& poly, double sign) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t j = 1; j < poly.size(); ++j) {
        if (poly[j] != 0.0) out.emplace_back(j, sign * poly[j]);
    }
    return out;
}

std::vector<std::complex<double>> roots(const LagPolynomial& c) {
    std::size_t deg = c.size();
    while (deg > 1 && c[deg - 1] == 0.0) --deg;
    if (deg <= 1) return {};
    const std::size_t k = deg - 1;
    if (k == 1) return {std::complex<double>(-c[0] / c[1], 0.0)};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) companion(0, static_cast<Eigen::Index>(i)) = -c[k - 1 - i] / c[k];
    for (std::size_t i = 1; i < k; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<std::complex<double>> out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i));
    return out;
}

// Rebuilds 1 + a1 z + ... from roots inside the unit circle reflected outward.
std::vector<double> flip_factor(const std::vector<double>& coefs, double sign) {
    if (coefs.empty()) return coefs;
    LagPolynomial poly(coefs.size() + 1, 0.0);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < coefs.size(); ++i) poly[i + 1] = sign * coefs[i];
    auto rs = roots(poly);
    bool changed = false;
    for (auto& r : rs) {
        if (std::abs(r) <= 1.0) {
            r = 1.0 / std::conj(r);
            changed = true;
        }
    }
    if (!changed) return coefs;
    // prod (1 - z / r_i) keeps the constant term at 1
    std::vector<std::complex<double>> acc{1.0};
    for (const auto& r : rs) {
        std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i];
            next[i + 1] -= acc[i] / r;
        }
        acc = std::move(next);
    }
    std::vector<double> out(coefs.size(), 0.0);
    for (std::size_t i = 0; i < coefs.size() && i + 1 < acc.size(); ++i) out[i] = sign * acc[i + 1].real();
    return out;
}

bool factor_ok(const std::vector<double>& coefs, double sign) {
    if (coefs.empty()) return true;
    if (coefs.size() == 1) return std::abs(coefs[0]) < 1.0;
    LagPolynomial poly(coefs.size() + 1, 0.0);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < coefs.size(); ++i) poly[i + 1] = sign * coefs[i];
    return min_root_modulus(poly) > 1.0;
}

}  // namespace

LagPolynomial differencing_polynomial(int d, int D, int m) {
    LagPolynomial out{1.0};
    for (int i = 0; i < d; ++i) out = multiply(out, {1.0, -1.0});
    LagPolynomial seasonal(static_cast<std::size_t>(m) + 1, 0.0);
    seasonal.front() = 1.0;
    seasonal.back() = -1.0;
    for (int i = 0; i < D; ++i) out = multiply(out, seasonal);
    return out;
}

LagPolynomial ar_polynomial(const SarimaModel& model) {
    return multiply(factor(model.phi, -1.0, 1), factor(model.Phi, -1.0, model.spec.m));
}

LagPolynomial ma_polynomial(const SarimaModel& model) {
    return multiply(factor(model.theta, 1.0, 1), factor(model.Theta, 1.0, model.spec.m));
}

double min_root_modulus(const LagPolynomial& c) {
    const auto rs = roots(c);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rs) best = std::min(best, std::abs(r));
    return best;
}

bool is_admissible(const SarimaModel& model) {
    return factor_ok(model.phi, -1.0) && factor_ok(model.Phi, -1.0) && factor_ok(model.theta, 1.0) &&
           factor_ok(model.Theta, 1.0);
}

SarimaModel project_admissible(SarimaModel model) {
    model.phi = flip_factor(model.phi, -1.0);
    model.Phi = flip_factor(model.Phi, -1.0);
    model.theta = flip_factor(model.theta, 1.0);
    model.Theta = flip_factor(model.Theta, 1.0);
    return model;
}

std::vector<double> difference_series(std::span<const double> x, int d, int D, int m) {
    const auto delta = differencing_polynomial(d, D, m);
    const std::size_t deg = delta.size() - 1;
    if (x.size() <= deg) throw Error(ErrorCode::TooShort, "series too short for the requested differencing");
    std::vector<double> out(x.size() - deg);
    for (std::size_t t = deg; t < x.size(); ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= deg; ++j) acc += delta[j] * x[t - j];
        out[t - deg] = acc;
    }
    return out;
}

std::vector<double> css_residuals(const SarimaModel& model, std::span<const double> w) {
    const std::size_t start = model.spec.max_ar_lag();
    if (w.size() <= start) throw Error(ErrorCode::TooShort, "differenced series must be longer than p + m P");
    const auto ar = nonzero_lags(ar_polynomial(model), -1.0);
    const auto ma = nonzero_lags(ma_polynomial(model), 1.0);
    std::vector<double> e(w.size(), 0.0);
    for (std::size_t t = start; t < w.size(); ++t) {
        double pred = model.intercept;
        for (const auto& [lag, a] : ar) pred += a * w[t - lag];
        for (const auto& [lag, b] : ma) {
            if (lag <= t) pred += b * e[t - lag];
        }
        e[t] = w[t] - pred;
    }
    return e;
}

double css_objective(const SarimaModel& model, std::span<const double> w, std::size_t first) {
    const auto e = css_residuals(model, w);
    double ss = 0.0;
    for (std::size_t t = std::max(first, model.spec.max_ar_lag()); t < e.size(); ++t) ss += e[t] * e[t];
    return ss;
}

double SarimaFit::aic() const {
    const double n = static_cast<double>(nobs);
    const double safe = std::max(css, std::numeric_limits<double>::min());
    return n * std::log(safe / n) + 2.0 * static_cast<double>(model.spec.parameter_count());
}

namespace {

SarimaModel unpack(const SarimaSpec& spec, const std::vector<double>& x, double fixed_intercept) {
    SarimaModel model = SarimaModel::zeros(spec);
    std::size_t k = 0;
    for (double& v : model.phi) v = x[k++];
    for (double& v : model.theta) v = x[k++];
    for (double& v : model.Phi) v = x[k++];
    for (double& v : model.Theta) v = x[k++];
    model.intercept = spec.has_intercept() ? x[k] : fixed_intercept;
    return model;
}

}  // namespace

SarimaFit fit_sarima(std::span<const double> series, const SarimaSpec& spec, const SarimaFitOptions& options) {
    spec.validate();
    const std::size_t needed = 3 * static_cast<std::size_t>(spec.p + spec.q + spec.m * (spec.P + spec.Q) + 1);
    if (series.size() < needed) {
        throw Error(ErrorCode::TooShort, "SARIMA " + spec.str() + " needs at least " + std::to_string(needed) +
                                             " observations, got " + std::to_string(series.size()));
    }
    const auto w = difference_series(series, spec.d, spec.D, spec.m);
    const auto lost = static_cast<std::size_t>(spec.d + spec.m * spec.D);
    const std::size_t first = std::max(spec.max_ar_lag(), options.sample_start > lost ? options.sample_start - lost : 0);
    if (w.size() <= first + 1) throw Error(ErrorCode::TooShort, "differenced series too short");

    const std::size_t dim = static_cast<std::size_t>(spec.parameter_count());
    std::vector<double> x0(dim, 0.0);
    std::vector<double> steps(dim, 0.1);
    if (spec.has_intercept()) {
        const double mu = mean(w);
        x0.back() = mu;
        const double sd = w.size() > 1 ? std::sqrt(sample_variance(w)) : 1.0;
        steps.back() = std::max({0.1 * sd, 1e-3 * std::abs(mu), 1e-8});
    }

    auto objective = [&](const std::vector<double>& x) {
        const SarimaModel model = unpack(spec, x, 0.0);
        if (!is_admissible(model)) return std::numeric_limits<double>::infinity();
        const double v = css_objective(model, w, first);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    SarimaFit fit;
    fit.nobs = w.size() - first;
    fit.start_css = objective(x0);

    SimplexOptions simplex;
    simplex.max_iterations = options.max_iterations;
    simplex.relative_tolerance = options.relative_tolerance;
    SimplexResult run = nelder_mead(objective, x0, steps, simplex);
    fit.iterations = run.iterations;
    const bool converged = run.converged;
    if (converged && dim > 0 && run.iterations < options.max_iterations) {
        // One restart around the optimum guards against a collapsed simplex.
        simplex.max_iterations = options.max_iterations - run.iterations;
        std::vector<double> restart_steps(dim);
        for (std::size_t i = 0; i < dim; ++i) restart_steps[i] = std::max(0.05 * std::abs(run.x[i]), 0.01 * steps[i]);
        SimplexResult polish = nelder_mead(objective, run.x, restart_steps, simplex);
        fit.iterations += polish.iterations;
        if (polish.value <= run.value) run = std::move(polish);
    }

    fit.model = unpack(spec, run.x, 0.0);
    fit.css = run.value;
    if (!is_admissible(fit.model)) {
        SarimaModel projected = project_admissible(fit.model);
        const double css = css_objective(projected, w, first);
        if (css <= fit.start_css) {
            fit.model = projected;
            fit.css = css;
        } else {
            fit.model = unpack(spec, x0, 0.0);
            fit.css = fit.start_css;
        }
    }
    fit.model.sigma2 = fit.css / static_cast<double>(fit.nobs);
    if (!converged) {
        throw SarimaNonConvergence(fit, "SARIMA " + spec.str() + " did not converge in " +
                                            std::to_string(options.max_iterations) + " iterations");
    }
    return fit;
}

SarimaGrid SarimaGrid::for_series(std::span<const double> series) {
    SarimaGrid grid;
    grid.d = {adf_test(series).reject_unit_root ? 0 : 1};
    return grid;
}

std::vector<SarimaSpec> SarimaGrid::specs() const {
    std::vector<SarimaSpec> out;
    for (int p_ : p)
        for (int d_ : d)
            for (int q_ : q)
                for (int P_ : P)
                    for (int D_ : D)
                        for (int Q_ : Q) out.push_back({p_, d_, q_, P_, D_, Q_, m});
    std::sort(out.begin(), out.end(), [](const SarimaSpec& a, const SarimaSpec& b) {
        return std::tie(a.p, a.d, a.q, a.P, a.D, a.Q) < std::tie(b.p, b.d, b.q, b.P, b.D, b.Q);
    });
    return out;
}

SarimaSpec select_sarima(std::span<const double> series, const SarimaGrid& grid, const SarimaFitOptions& options) {
    const auto specs = grid.specs();
    if (specs.empty()) throw Error(ErrorCode::EmptyGrid, "SARIMA order grid is empty");
    SarimaFitOptions common = options;
    for (const auto& spec : specs) {
        common.sample_start = std::max(common.sample_start,
                                       static_cast<std::size_t>(spec.d + spec.m * spec.D) + spec.max_ar_lag());
    }

    bool found = false;
    SarimaSpec best{};
    double best_aic = 0.0;
    std::string last_error;
    for (const auto& spec : specs) {
        double aic = 0.0;
        try {
            aic = fit_sarima(series, spec, common).aic();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonConvergence && e.code() != ErrorCode::TooShort) throw;
            last_error = e.what();
            continue;
        }
        const double tol = 1e-9 * std::max(1.0, std::abs(aic));
        const bool better = !found || aic < best_aic - tol ||
                            (std::abs(aic - best_aic) <= tol && spec.parameter_count() < best.parameter_count());
        if (better) {
            found = true;
            best = spec;
            best_aic = aic;
        }
    }
    if (!found) throw Error(ErrorCode::NonConvergence, "no SARIMA grid cell could be fitted: " + last_error);
    return best;
}

std::vector<double> forecast_differenced(const SarimaModel& model, std::span<const double> w, std::size_t horizon) {
    std::vector<double> ext(w.begin(), w.end());
    std::vector<double> e = w.size() > model.spec.max_ar_lag() ? css_residuals(model, w) : std::vector<double>(w.size(), 0.0);
    const auto ar = nonzero_lags(ar_polynomial(model), -1.0);
    const auto ma = nonzero_lags(ma_polynomial(model), 1.0);
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const std::size_t t = ext.size();
        double pred = model.intercept;
        for (const auto& [lag, a] : ar) {
            if (lag <= t) pred += a * ext[t - lag];
        }
        for (const auto& [lag, b] : ma) {
            if (lag <= t) pred += b * e[t - lag];
        }
        ext.push_back(pred);
        e.push_back(0.0);
        out.push_back(pred);
    }
    return out;
}

std::vector<double> forecast_sarima(const SarimaModel& model, std::span<const double> history, std::size_t horizon) {
    if (horizon == 0) return {};
    const auto delta = differencing_polynomial(model.spec.d, model.spec.D, model.spec.m);
    const std::size_t deg = delta.size() - 1;
    if (history.size() <= deg) throw Error(ErrorCode::TooShort, "history too short for the model's differencing");
    const auto w = difference_series(history, model.spec.d, model.spec.D, model.spec.m);
    const auto w_hat = forecast_differenced(model, w, horizon);

    std::vector<double> x(history.begin(), history.end());
    std::vector<double> out(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const std::size_t t = x.size();
        double v = w_hat[h];
        for (std::size_t j = 1; j <= deg; ++j) v -= delta[j] * x[t - j];
        x.push_back(v);
        out[h] = v;
    }
    return out;
}

}  // namespace bwe
