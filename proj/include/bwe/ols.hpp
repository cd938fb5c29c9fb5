#pragma once

#include <Eigen/Dense>

namespace bwe {

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residual;
    double rss = 0.0;
    Eigen::MatrixXd xtx_inverse;  // (X'X)^-1, for standard errors
};

/// Least squares with a rank check; SingularDesign when X is rank deficient.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace bwe
