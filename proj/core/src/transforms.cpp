#include "gmd/transforms.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <string>

#include "gmd/errors.hpp"

namespace gmd {

namespace {

// Inverse symmetric square root of an SPD matrix already known to be
// symmetric. Rejects spectra past the condition limit instead of clamping.
Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure(std::string("eigendecomposition failed for ") + what);
  }
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmin > 0.0) || lmax / lmin > kConditionLimit) {
    throw NumericalFailure(std::string(what) + " is singular or ill-conditioned: eigenvalues in [" +
                           std::to_string(lmin) + ", " + std::to_string(lmax) + "]");
  }
  const Eigen::VectorXd inv_roots = eig.eigenvalues().array().rsqrt();
  Eigen::MatrixXd q =
      eig.eigenvectors() * inv_roots.asDiagonal() * eig.eigenvectors().transpose();
  return ((q + q.transpose()) / 2.0).eval();
}

}  // namespace

Eigen::MatrixXd sym_inverse_sqrt(const CovarianceMatrix& omega) {
  return inverse_sqrt_spd(omega.entries(), "covariance matrix");
}

Eigen::MatrixXd cholesky_inverse_factor(const CovarianceMatrix& omega) {
  Eigen::LLT<Eigen::MatrixXd> llt(omega.entries());
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("Cholesky factorization failed on covariance matrix");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  // Forward-substitute columns of the identity: Q = L^{-1}, lower triangular.
  return L.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(omega.size(), omega.size()));
}

Eigen::MatrixXd make_transform(TransformKind kind, const CovarianceMatrix& omega) {
  switch (kind) {
    case TransformKind::SymmetricRoot:
      return sym_inverse_sqrt(omega);
    case TransformKind::CholeskyFactor:
      return cholesky_inverse_factor(omega);
    case TransformKind::Identity:
      return Eigen::MatrixXd::Identity(omega.size(), omega.size());
  }
  throw NumericalFailure("unreachable transform kind");
}

WeightMatrices build_weights(const Eigen::MatrixXd& X, Eigen::MatrixXd Q) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n <= p || p < 1) {
    throw InvalidInput("design must have n > p >= 1");
  }
  if (Q.rows() != n || Q.cols() != n) {
    throw InvalidInput("transform Q must be n x n matching the design");
  }
  if (!X.allFinite() || !Q.allFinite()) {
    throw InvalidInput("design or transform has non-finite entries");
  }

  const Eigen::MatrixXd QX = Q * X;
  // Gram reading of X'Q^2 X: for symmetric Q the two agree; the Gram form
  // keeps D'D = I for arbitrary invertible Q.
  const Eigen::MatrixXd M = QX.transpose() * QX;
  WeightMatrices w;
  w.A = inverse_sqrt_spd(((M + M.transpose()) / 2.0).eval(), "X'Q'QX");
  w.D = QX * w.A;
  w.theta = w.D.rowwise().norm();
  w.Q = std::move(Q);
  return w;
}

}  // namespace gmd
