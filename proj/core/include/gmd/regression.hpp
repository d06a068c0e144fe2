#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "gmd/rng.hpp"

namespace gmd {

// Observed regression data y = X beta + error. Validated on construction via
// make_regression_data: finite entries, n > p >= 1, full column rank.
// Whether a column of ones is present is a construction convention (the CSV
// loader and the simulated designs prepend one); no estimator assumes it.
struct RegressionData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

RegressionData make_regression_data(Eigen::MatrixXd X, Eigen::VectorXd y);

// Intercept column followed by p-1 columns of iid U[lo, hi) entries.
Eigen::MatrixXd make_uniform_design(std::size_t n, std::size_t p, double lo, double hi,
                                    Rng& rng);

}  // namespace gmd
