#pragma once

#include <Eigen/Core>

#include "gmd/covariance.hpp"

namespace gmd {

enum class TransformKind { SymmetricRoot, CholeskyFactor, Identity };

// Omega^{-1/2} via eigendecomposition: V diag(lambda^{-1/2}) V'. Symmetric by
// construction (explicitly symmetrized to kill roundoff). Q Q Omega = I.
Eigen::MatrixXd sym_inverse_sqrt(const CovarianceMatrix& omega);

// L^{-1} for the lower Cholesky factor Omega = L L'. Lower triangular,
// Q' Q = Omega^{-1} and Q Omega Q' = I. Not symmetric.
Eigen::MatrixXd cholesky_inverse_factor(const CovarianceMatrix& omega);

Eigen::MatrixXd make_transform(TransformKind kind, const CovarianceMatrix& omega);

// Decorrelation weights for a fixed design. D has unit-norm columns for any
// invertible Q (the Noether condition), because A is the inverse symmetric
// square root of the Gram matrix M = (QX)'(QX): D'D = A M A = I.
struct WeightMatrices {
  Eigen::MatrixXd Q;      // n x n transform actually used
  Eigen::MatrixXd A;      // p x p, symmetric PD, A = M^{-1/2}
  Eigen::MatrixXd D;      // n x p, D = Q X A
  Eigen::VectorXd theta;  // row norms of D, theta_i = ||d_i.||
};

// Rejects rank-deficient or ill-conditioned Gram matrices:
// cond(M) > 1e12 or a non-positive spectrum is a NumericalFailure.
WeightMatrices build_weights(const Eigen::MatrixXd& X, Eigen::MatrixXd Q);

}  // namespace gmd
