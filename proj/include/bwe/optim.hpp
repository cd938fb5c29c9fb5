#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bwe {

struct SimplexOptions {
    std::size_t max_iterations = 2000;
    double relative_tolerance = 1e-10;  // on the spread of objective values
    double initial_step = 0.1;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead minimisation. Infinite objective values are
/// allowed and act as a barrier. The returned point is never worse than x0.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          std::vector<double> steps, const SimplexOptions& options = {});

}  // namespace bwe
