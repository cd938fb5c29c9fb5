#include "bwe/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bwe {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          std::vector<double> steps, const SimplexOptions& options) {
    const std::size_t dim = x0.size();
    SimplexResult result;
    if (dim == 0) {
        result.value = f(x0);
        result.x = std::move(x0);
        result.converged = true;
        return result;
    }
    if (steps.size() != dim) steps.assign(dim, options.initial_step);

    std::vector<std::vector<double>> pts(dim + 1, x0);
    std::vector<double> vals(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += steps[i];
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = f(pts[i]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t, std::vector<double>& out) {
        for (std::size_t j = 0; j < dim; ++j) out[j] = a[j] + t * (b[j] - a[j]);
    };

    std::size_t it = 0;
    for (; it < options.max_iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[dim - 1];

        if (std::isfinite(vals[worst]) &&
            vals[worst] - vals[best] <= options.relative_tolerance * std::abs(vals[best]) + 1e-300) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        blend(centroid, pts[worst], -1.0, trial);  // reflection
        const double fr = f(trial);
        if (fr < vals[best]) {
            blend(centroid, pts[worst], -2.0, trial2);  // expansion
            const double fe = f(trial2);
            if (fe < fr) {
                pts[worst] = trial2;
                vals[worst] = fe;
            } else {
                pts[worst] = trial;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = trial;
            vals[worst] = fr;
            continue;
        }
        // contraction, outside or inside
        if (fr < vals[worst]) {
            blend(centroid, pts[worst], -0.5, trial2);
            const double fc = f(trial2);
            if (fc <= fr) {
                pts[worst] = trial2;
                vals[worst] = fc;
                continue;
            }
        } else {
            blend(centroid, pts[worst], 0.5, trial2);
            const double fc = f(trial2);
            if (fc < vals[worst]) {
                pts[worst] = trial2;
                vals[worst] = fc;
                continue;
            }
        }
        // shrink towards the best vertex
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            blend(pts[best], pts[i], 0.5, pts[i]);
            vals[i] = f(pts[i]);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    result.x = pts[best];
    result.value = vals[best];
    result.iterations = it;
    return result;
}

}  // namespace bwe
