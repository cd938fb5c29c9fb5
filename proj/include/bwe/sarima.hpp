#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bwe/error.hpp"

namespace bwe {

/// Orders of a SARIMA(p, d, q)(P, D, Q)m model.
struct SarimaSpec {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int m = 12;

    void validate() const;
    [[nodiscard]] bool has_intercept() const noexcept { return d + D == 0; }
    /// Free parameters: ARMA coefficients plus the intercept when undifferenced.
    [[nodiscard]] int parameter_count() const noexcept { return p + q + P + Q + (has_intercept() ? 1 : 0); }
    [[nodiscard]] std::size_t max_ar_lag() const noexcept { return static_cast<std::size_t>(p + m * P); }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const SarimaSpec&, const SarimaSpec&) = default;
};

struct SarimaModel {
    SarimaSpec spec;
    std::vector<double> phi;    // non-seasonal AR
    std::vector<double> theta;  // non-seasonal MA
    std::vector<double> Phi;    // seasonal AR
    std::vector<double> Theta;  // seasonal MA
    double intercept = 0.0;
    double sigma2 = 0.0;

    static SarimaModel zeros(const SarimaSpec& spec);
};

/// Polynomial coefficients c[0..] of c0 + c1 L + ... ; index = lag.
using LagPolynomial = std::vector<double>;

LagPolynomial multiply(const LagPolynomial& a, const LagPolynomial& b);
/// (1 - L)^d (1 - L^m)^D
LagPolynomial differencing_polynomial(int d, int D, int m);
/// (1 - sum phi_i L^i)(1 - sum Phi_i L^{i m})
LagPolynomial ar_polynomial(const SarimaModel& model);
/// (1 + sum theta_i L^i)(1 + sum Theta_i L^{i m})
LagPolynomial ma_polynomial(const SarimaModel& model);

/// Smallest modulus among the roots of c0 + c1 z + ... + ck z^k (inf when k = 0).
double min_root_modulus(const LagPolynomial& c);
/// Roots of all four factor polynomials lie strictly outside the unit circle.
bool is_admissible(const SarimaModel& model);
/// Reflects every root inside the unit circle to 1/conj(root), factor by factor.
SarimaModel project_admissible(SarimaModel model);

/// Applies (1 - L)^d (1 - L^m)^D.
std::vector<double> difference_series(std::span<const double> x, int d, int D, int m);

/// One-step residuals on an already differenced series, pre-sample residuals
/// zeroed. Entries before max_ar_lag() are zero and excluded from the CSS.
std::vector<double> css_residuals(const SarimaModel& model, std::span<const double> differenced);
/// Conditional sum of squares over the differenced series, summing residuals
/// from index max(first, max_ar_lag()) on.
double css_objective(const SarimaModel& model, std::span<const double> differenced, std::size_t first = 0);

struct SarimaFit {
    SarimaModel model;
    double css = 0.0;
    double start_css = 0.0;  // objective at the origin start
    std::size_t nobs = 0;    // residuals entering the CSS
    std::size_t iterations = 0;
    [[nodiscard]] double aic() const;
};

/// Thrown when the simplex hits its iteration cap; carries the best point.
class SarimaNonConvergence : public Error {
public:
    SarimaNonConvergence(SarimaFit best, const std::string& message)
        : Error(ErrorCode::NonConvergence, message), best_(std::move(best)) {}
    [[nodiscard]] const SarimaFit& best() const noexcept { return best_; }

private:
    SarimaFit best_;
};

struct SarimaFitOptions {
    std::size_t max_iterations = 2000;
    double relative_tolerance = 1e-10;
    /// First index of the raw series whose residual enters the objective
    /// (0 = as early as the differencing and AR lags allow). Selection sets it
    /// so that every grid cell is scored on the same observations.
    std::size_t sample_start = 0;
};

/// Conditional-sum-of-squares fit on the raw (undifferenced) series.
SarimaFit fit_sarima(std::span<const double> series, const SarimaSpec& spec, const SarimaFitOptions& options = {});

struct SarimaGrid {
    std::vector<int> p{0, 1, 2}, d{0}, q{0, 1, 2};
    std::vector<int> P{0, 1}, D{0, 1}, Q{0, 1};
    int m = 12;

    /// Default grid with d = 0 when ADF rejects a unit root, else 1.
    static SarimaGrid for_series(std::span<const double> series);
    [[nodiscard]] std::vector<SarimaSpec> specs() const;  // lexicographic order
};

/// Minimum-AIC spec over the grid; skips cells whose fit fails.
SarimaSpec select_sarima(std::span<const double> series, const SarimaGrid& grid,
                         const SarimaFitOptions& options = {});

/// Iterated one-step expectations on the differenced scale.
std::vector<double> forecast_differenced(const SarimaModel& model, std::span<const double> differenced,
                                         std::size_t horizon);
/// Forecasts on the original scale, integrating back through the differencing.
std::vector<double> forecast_sarima(const SarimaModel& model, std::span<const double> history, std::size_t horizon);

}  // namespace bwe
