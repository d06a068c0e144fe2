#include "gmd/regression.hpp"

#include <Eigen/QR>
#include <string>

#include "gmd/errors.hpp"

namespace gmd {

RegressionData make_regression_data(Eigen::MatrixXd X, Eigen::VectorXd y) {
  if (X.rows() != y.size()) {
    throw InvalidInput("design has " + std::to_string(X.rows()) + " rows but response has " +
                       std::to_string(y.size()));
  }
  if (X.cols() < 1 || X.rows() <= X.cols()) {
    throw InvalidInput("need n > p >= 1; got n = " + std::to_string(X.rows()) +
                       ", p = " + std::to_string(X.cols()));
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw InvalidInput("regression data has non-finite entries");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < X.cols()) {
    throw InvalidInput("design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                       " < p = " + std::to_string(X.cols()) + ")");
  }
  return {std::move(X), std::move(y)};
}

Eigen::MatrixXd make_uniform_design(std::size_t n, std::size_t p, double lo, double hi,
                                    Rng& rng) {
  if (p < 1 || n <= p) throw InvalidInput("make_uniform_design: need n > p >= 1");
  if (!(hi > lo)) throw InvalidInput("make_uniform_design: need hi > lo");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  X.col(0).setOnes();
  // Row-major fill so the draw order is a documented, stable convention.
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 1; j < X.cols(); ++j) X(i, j) = rng.uniform(lo, hi);
  }
  return X;
}

}  // namespace gmd
