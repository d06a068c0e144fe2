#pragma once

#include <Eigen/Core>

namespace gmd {

// A validated symmetric positive definite matrix. Construction is the only
// gate: symmetry to 1e-12 relative, finiteness, and a spectral floor of
// 1e-10 x (largest eigenvalue). Matrices failing the floor are rejected,
// never clamped; silent regularization would bias every transform built
// from the matrix downstream.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Eigen::MatrixXd entries);

  static CovarianceMatrix identity(Eigen::Index n);

  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

  double min_eigenvalue() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }
  double condition_number() const { return max_eig_ / min_eig_; }

 private:
  Eigen::MatrixXd entries_;
  double min_eig_;
  double max_eig_;
};

// Toeplitz matrix with entry (i,j) = gamma(|i-j|); lags beyond the given
// vector are zero (banded). The result still has to pass CovarianceMatrix
// validation, so a gamma sequence that is not positive definite at size n
// is rejected.
CovarianceMatrix toeplitz_covariance(const Eigen::VectorXd& gamma, Eigen::Index n);

// Relative spectral-floor constant shared by validation and transforms.
inline constexpr double kEigenvalueFloorRel = 1e-10;
inline constexpr double kSymmetryTolRel = 1e-12;
inline constexpr double kConditionLimit = 1e12;

}  // namespace gmd
