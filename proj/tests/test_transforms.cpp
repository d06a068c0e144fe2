#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "gmd/covariance.hpp"
#include "gmd/errors.hpp"
#include "gmd/rng.hpp"
#include "gmd/transforms.hpp"

using gmd::CovarianceMatrix;
using gmd::Rng;
using gmd::TransformKind;

namespace {

Eigen::MatrixXd random_spd(int n, Rng& rng) {
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = rng.normal01();
  return b * b.transpose() + Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_matrix(int r, int c, Rng& rng) {
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal01();
  return m;
}

}  // namespace

TEST_CASE("2x2 worked example: both whitening transforms invert the covariance") {
  Eigen::MatrixXd omega(2, 2);
  omega << 2.0, 1.0, 1.0, 2.0;
  const CovarianceMatrix cov(omega);

  const Eigen::MatrixXd qs = gmd::sym_inverse_sqrt(cov);
  CHECK((qs - qs.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((qs * qs * omega - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((qs * omega * qs.transpose() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-10);

  const Eigen::MatrixXd qc = gmd::cholesky_inverse_factor(cov);
  CHECK(std::abs(qc(0, 1)) < 1e-14);  // lower triangular
  CHECK((qc * omega * qc.transpose() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK((qc.transpose() * qc * omega - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-10);

  // The two transforms differ unless omega is diagonal.
  CHECK((qs - qc).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("random SPD matrices: whitening identities hold at scale") {
  Rng rng(424242);
  for (int n : {2, 5, 20, 60}) {
    const Eigen::MatrixXd omega = random_spd(n, rng);
    const CovarianceMatrix cov(omega);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

    const Eigen::MatrixXd qs = gmd::make_transform(TransformKind::SymmetricRoot, cov);
    CHECK((qs * omega * qs.transpose() - id).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((qs - qs.transpose()).cwiseAbs().maxCoeff() < 1e-12 * qs.cwiseAbs().maxCoeff());

    const Eigen::MatrixXd qc = gmd::make_transform(TransformKind::CholeskyFactor, cov);
    CHECK((qc * omega * qc.transpose() - id).cwiseAbs().maxCoeff() < 1e-8);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) CHECK(std::abs(qc(i, j)) < 1e-14);

    const Eigen::MatrixXd qi = gmd::make_transform(TransformKind::Identity, cov);
    CHECK((qi - id).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("build_weights produces orthonormal direction columns") {
  Rng rng(7);
  const Eigen::MatrixXd x = random_matrix(10, 3, rng);
  const Eigen::MatrixXd omega = random_spd(10, rng);
  const Eigen::MatrixXd q = gmd::sym_inverse_sqrt(CovarianceMatrix(omega));

  const gmd::WeightMatrices w = gmd::build_weights(x, q);
  const Eigen::MatrixXd id3 = Eigen::MatrixXd::Identity(3, 3);
  CHECK((w.D.transpose() * w.D - id3).cwiseAbs().maxCoeff() < 1e-10);

  // A is the symmetric inverse square root of the Gram matrix.
  const Eigen::MatrixXd gram = (q * x).transpose() * (q * x);
  CHECK((w.A - w.A.transpose()).cwiseAbs().maxCoeff() < 1e-12 * w.A.cwiseAbs().maxCoeff());
  CHECK((w.A * gram * w.A - id3).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((w.D - q * x * w.A).cwiseAbs().maxCoeff() < 1e-12);

  // Row norms and their square sum (= trace of D D' = p).
  CHECK(w.theta.size() == 10);
  CHECK(w.theta.squaredNorm() == doctest::Approx(3.0).epsilon(1e-10));
  for (int i = 0; i < 10; ++i)
    CHECK(w.theta[i] == doctest::Approx(w.D.row(i).norm()).epsilon(1e-14));

  // QR cross-check: D and the thin Q factor of QX span the same column space.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(q * x);
  const Eigen::MatrixXd q1 = qr.householderQ() * Eigen::MatrixXd::Identity(10, 3);
  const Eigen::MatrixXd proj_qr = q1 * q1.transpose();
  const Eigen::MatrixXd proj_d = w.D * w.D.transpose();
  CHECK((proj_qr - proj_d).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("build_weights orthonormality across random instances") {
  Rng rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const int p = 1 + static_cast<int>(rng.next_u64() % 4);
    const int n = p + 2 + static_cast<int>(rng.next_u64() % 10);
    const Eigen::MatrixXd x = random_matrix(n, p, rng);
    const Eigen::MatrixXd q = random_matrix(n, n, rng) +
                              5.0 * Eigen::MatrixXd::Identity(n, n);  // keep QX full rank
    const gmd::WeightMatrices w = gmd::build_weights(x, q);
    CHECK((w.D.transpose() * w.D - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("covariance validation rejects bad inputs and never repairs them") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.1, 0.3, 1.0;
  CHECK_THROWS_AS(CovarianceMatrix{asym}, gmd::InvalidInput);

  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(CovarianceMatrix{indef}, gmd::NumericalFailure);

  // Minimum eigenvalue sits below the relative floor: reject, do not clamp.
  Eigen::MatrixXd nearsing = Eigen::MatrixXd::Identity(3, 3);
  nearsing(2, 2) = 5e-11;
  CHECK_THROWS_AS(CovarianceMatrix{nearsing}, gmd::NumericalFailure);

  Eigen::MatrixXd nan2 = Eigen::MatrixXd::Identity(2, 2);
  nan2(0, 0) = std::nan("");
  CHECK_THROWS_AS(CovarianceMatrix{nan2}, gmd::InvalidInput);

  CHECK_THROWS_AS(CovarianceMatrix{Eigen::MatrixXd()}, gmd::InvalidInput);

  // A tiny relative perturbation of a symmetric matrix is accepted and
  // symmetrized, not rejected.
  Eigen::MatrixXd nearly(2, 2);
  nearly << 2.0, 1.0, 1.0 + 1e-14, 2.0;
  const CovarianceMatrix ok(nearly);
  CHECK(ok.entries()(0, 1) == ok.entries()(1, 0));
  CHECK(ok.min_eigenvalue() > 0.0);
  CHECK(ok.condition_number() < 10.0);
}

TEST_CASE("toeplitz_covariance lays out the band correctly") {
  Eigen::VectorXd gamma(3);
  gamma << 4.0, 1.5, 0.25;
  const Eigen::MatrixXd m = gmd::toeplitz_covariance(gamma, 6).entries();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const int h = std::abs(i - j);
      CHECK(m(i, j) == (h < 3 ? gamma[h] : 0.0));
    }
  }
}

TEST_CASE("build_weights input validation") {
  Rng rng(3);
  const Eigen::MatrixXd x = random_matrix(6, 2, rng);
  CHECK_THROWS_AS(gmd::build_weights(x, Eigen::MatrixXd::Identity(5, 5)), gmd::InvalidInput);
  CHECK_THROWS_AS(gmd::build_weights(random_matrix(3, 3, rng), Eigen::MatrixXd::Identity(3, 3)),
                  gmd::InvalidInput);  // n == p
  // Rank-deficient QX must be rejected rather than silently truncated.
  Eigen::MatrixXd xdup(6, 2);
  xdup.col(0) = Eigen::VectorXd::Ones(6);
  xdup.col(1) = Eigen::VectorXd::Ones(6);
  CHECK_THROWS(gmd::build_weights(xdup, Eigen::MatrixXd::Identity(6, 6)));
}
