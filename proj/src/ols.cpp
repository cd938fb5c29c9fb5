#include "bwe/ols.hpp"

#include "bwe/error.hpp"

namespace bwe {

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() < X.cols()) throw Error(ErrorCode::TooShort, "fewer observations than regressors");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) throw Error(ErrorCode::SingularDesign, "collinear regressors");

    OlsFit fit;
    fit.beta = qr.solve(y);
    fit.residual = y - X * fit.beta;
    fit.rss = fit.residual.squaredNorm();

    // (X'X)^-1 = P R^-1 R^-T P'
    const auto k = X.cols();
    Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd inner = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    fit.xtx_inverse = perm * inner * perm.transpose();
    return fit;
}

}  // namespace bwe
