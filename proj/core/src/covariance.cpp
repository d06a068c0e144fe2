#include "gmd/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "gmd/errors.hpp"

namespace gmd {

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n < 1 || entries_.cols() != n) {
    throw InvalidInput("covariance matrix must be square and non-empty");
  }
  if (!entries_.allFinite()) {
    throw InvalidInput("covariance matrix has non-finite entries");
  }
  const double scale = entries_.cwiseAbs().maxCoeff();
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolRel * std::max(scale, 1.0)) {
    throw InvalidInput("covariance matrix is not symmetric (relative asymmetry " +
                       std::to_string(asym / std::max(scale, 1.0)) + ")");
  }
  // Exact symmetrization removes representation noise below the tolerance.
  entries_ = ((entries_ + entries_.transpose()) / 2.0).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("eigendecomposition failed on covariance matrix");
  }
  min_eig_ = eig.eigenvalues().minCoeff();
  max_eig_ = eig.eigenvalues().maxCoeff();
  if (!(max_eig_ > 0.0) || min_eig_ < kEigenvalueFloorRel * max_eig_) {
    throw NumericalFailure("covariance matrix is not positive definite: min eigenvalue " +
                           std::to_string(min_eig_) + " below floor " +
                           std::to_string(kEigenvalueFloorRel) + " x max eigenvalue " +
                           std::to_string(max_eig_));
  }
}

CovarianceMatrix CovarianceMatrix::identity(Eigen::Index n) {
  return CovarianceMatrix(Eigen::MatrixXd::Identity(n, n));
}

CovarianceMatrix toeplitz_covariance(const Eigen::VectorXd& gamma, Eigen::Index n) {
  if (gamma.size() < 1) throw InvalidInput("toeplitz_covariance: need gamma(0)");
  if (n < 1) throw InvalidInput("toeplitz_covariance: n must be >= 1");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index lag = i >= j ? i - j : j - i;
      m(i, j) = lag < gamma.size() ? gamma[lag] : 0.0;
    }
  }
  return CovarianceMatrix(std::move(m));
}

}  // namespace gmd
