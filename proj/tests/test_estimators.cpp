#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "gmd/covariance.hpp"
#include "gmd/dispersion.hpp"
#include "gmd/errors.hpp"
#include "gmd/estimators.hpp"
#include "gmd/innovations.hpp"
#include "gmd/linear_process.hpp"
#include "gmd/nelder_mead.hpp"
#include "gmd/regression.hpp"
#include "gmd/rng.hpp"
#include "gmd/transforms.hpp"

using gmd::CovarianceMatrix;
using gmd::FitOptions;
using gmd::Method;
using gmd::RegressionData;
using gmd::Rng;
using gmd::TransformKind;

namespace {

RegressionData noisy_data(int n, const Eigen::VectorXd& beta, double noise, Rng& rng) {
  const int p = static_cast<int>(beta.size());
  Eigen::MatrixXd x = gmd::make_uniform_design(n, p, 0.0, 50.0, rng);
  Eigen::VectorXd y = x * beta;
  for (int i = 0; i < n; ++i) y[i] += noise * rng.normal01();
  return gmd::make_regression_data(std::move(x), std::move(y));
}

const Eigen::Vector4d kBeta(-2.0, 3.0, 1.5, -4.3);

}  // namespace

TEST_CASE("method names round-trip") {
  for (Method m : {Method::OLS, Method::GLS, Method::GMD1, Method::GMD2})
    CHECK(gmd::method_from_name(gmd::method_name(m)) == m);
  CHECK(gmd::method_name(Method::GMD1) == "gmd1");
  CHECK_THROWS_AS(gmd::method_from_name("ridge"), gmd::InvalidInput);
}

TEST_CASE("OLS: noiseless recovery, intercept-only mean, residual orthogonality") {
  Rng rng(1);
  RegressionData clean = noisy_data(30, kBeta, 0.0, rng);
  const auto fit = gmd::fit_ols(clean);
  CHECK((fit.beta_hat - kBeta).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(fit.method == Method::OLS);
  CHECK(fit.converged);
  CHECK_FALSE(fit.objective_value.has_value());

  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(7, 1);
  Eigen::VectorXd y(7);
  y << 1, 2, 3, 4, 5, 6, 14;
  const auto mean_fit = gmd::fit_ols(gmd::make_regression_data(ones, y));
  CHECK(mean_fit.beta_hat[0] == doctest::Approx(5.0).epsilon(1e-12));

  RegressionData noisy = noisy_data(40, kBeta, 3.0, rng);
  const auto nf = gmd::fit_ols(noisy);
  const Eigen::VectorXd resid = noisy.y - noisy.X * nf.beta_hat;
  CHECK((noisy.X.transpose() * resid).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("GLS with identity covariance is OLS; scaling the covariance is a no-op") {
  Rng rng(2);
  RegressionData data = noisy_data(35, kBeta, 2.0, rng);
  const auto ols = gmd::fit_ols(data);
  const auto gls_id = gmd::fit_gls(data, CovarianceMatrix::identity(35));
  CHECK((ols.beta_hat - gls_id.beta_hat).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(gls_id.method == Method::GLS);

  const CovarianceMatrix scaled(7.3 * Eigen::MatrixXd::Identity(35, 35));
  const auto gls_scaled = gmd::fit_gls(data, scaled);
  CHECK((ols.beta_hat - gls_scaled.beta_hat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("GLS equals the closed-form sandwich on a correlated covariance") {
  Rng rng(3);
  RegressionData data = noisy_data(20, kBeta, 2.0, rng);
  Eigen::MatrixXd b(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) b(i, j) = rng.normal01();
  const Eigen::MatrixXd omega = b * b.transpose() + 20.0 * Eigen::MatrixXd::Identity(20, 20);
  const CovarianceMatrix cov(omega);

  const auto gls = gmd::fit_gls(data, cov);
  const Eigen::MatrixXd oi = omega.inverse();
  const Eigen::VectorXd direct =
      (data.X.transpose() * oi * data.X).ldlt().solve(data.X.transpose() * oi * data.y);
  CHECK((gls.beta_hat - direct).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("GMD: noiseless recovery with identity weights") {
  Rng rng(4);
  RegressionData clean = noisy_data(40, kBeta, 0.0, rng);
  const CovarianceMatrix id = CovarianceMatrix::identity(40);
  for (TransformKind kind : {TransformKind::SymmetricRoot, TransformKind::CholeskyFactor}) {
    const auto fit = gmd::fit_gmd(clean, kind, id, gmd::Lebesgue{});
    CHECK((fit.beta_hat - kBeta).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(fit.converged);
    CHECK(fit.objective_value.has_value());
    CHECK(*fit.objective_value >= -1e-9);
    CHECK(*fit.objective_value < 1e-8);  // zero residuals at the optimum
  }
}

TEST_CASE("GMD1 equals GMD2 under the identity covariance") {
  Rng rng(5);
  RegressionData data = noisy_data(30, kBeta, 2.0, rng);
  const CovarianceMatrix id = CovarianceMatrix::identity(30);
  const auto g1 = gmd::fit_gmd(data, TransformKind::SymmetricRoot, id, gmd::Lebesgue{});
  const auto g2 = gmd::fit_gmd(data, TransformKind::CholeskyFactor, id, gmd::Lebesgue{});
  CHECK(g1.method == Method::GMD1);
  CHECK(g2.method == Method::GMD2);
  CHECK((g1.beta_hat - g2.beta_hat).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("GMD translation equivariance") {
  Rng rng(6);
  RegressionData data = noisy_data(25, kBeta, 1.5, rng);
  const CovarianceMatrix id = CovarianceMatrix::identity(25);
  const Eigen::Vector4d shift(1.0, -0.5, 2.0, 0.25);
  RegressionData shifted = gmd::make_regression_data(data.X, data.y + data.X * shift);

  FitOptions opts;
  opts.tol = 1e-8;
  const auto base = gmd::fit_gmd(data, TransformKind::SymmetricRoot, id, gmd::Lebesgue{}, opts);
  const auto moved =
      gmd::fit_gmd(shifted, TransformKind::SymmetricRoot, id, gmd::Lebesgue{}, opts);
  CHECK((moved.beta_hat - base.beta_hat - shift).cwiseAbs().maxCoeff() < 2e-6);
}

TEST_CASE("GMD never ends above its starting value and is deterministic") {
  Rng rng(7);
  RegressionData data = noisy_data(30, kBeta, 4.0, rng);
  const auto omega = gmd::estimate_covariance(data, gmd::ToeplitzResidualCov{5});

  const auto a = gmd::fit_gmd(data, TransformKind::SymmetricRoot, omega, gmd::Lebesgue{});
  const auto b = gmd::fit_gmd(data, TransformKind::SymmetricRoot, omega, gmd::Lebesgue{});
  for (int j = 0; j < 4; ++j) CHECK(a.beta_hat[j] == b.beta_hat[j]);  // bit-for-bit
  CHECK(*a.objective_value == *b.objective_value);
  CHECK(a.iterations == b.iterations);

  // Start at GLS and confirm the reported objective does not exceed it.
  const auto gls = gmd::fit_gls(data, omega);
  const gmd::WeightMatrices w =
      gmd::build_weights(data.X, gmd::sym_inverse_sqrt(omega));
  gmd::DispersionContext ctx(data, w, gmd::Lebesgue{});
  CHECK(*a.objective_value <= gmd::dispersion(ctx, gls.beta_hat) + 1e-9);
}

TEST_CASE("fit_gmd weight overload matches the covariance overload") {
  Rng rng(8);
  RegressionData data = noisy_data(28, kBeta, 2.0, rng);
  const auto omega = gmd::estimate_covariance(data, gmd::ToeplitzResidualCov{4});
  const auto via_cov = gmd::fit_gmd(data, TransformKind::SymmetricRoot, omega, gmd::Lebesgue{});

  const gmd::WeightMatrices w = gmd::build_weights(data.X, gmd::sym_inverse_sqrt(omega));
  FitOptions opts;
  opts.start = FitOptions::Start::Given;
  opts.start_value = gmd::fit_gls(data, omega).beta_hat;
  const auto via_weights = gmd::fit_gmd(data, w, Method::GMD1, gmd::Lebesgue{}, opts);
  for (int j = 0; j < 4; ++j) CHECK(via_cov.beta_hat[j] == via_weights.beta_hat[j]);

  // The weight overload has no covariance, so a GLS start cannot be honored.
  FitOptions bad;
  bad.start = FitOptions::Start::FromGLS;
  CHECK_THROWS_AS(gmd::fit_gmd(data, w, Method::GMD1, gmd::Lebesgue{}, bad), gmd::InvalidInput);
  CHECK_THROWS_AS(gmd::fit_gmd(data, w, Method::OLS, gmd::Lebesgue{}, opts), gmd::InvalidInput);
}

TEST_CASE("covariance estimators: oracle white noise, Toeplitz band, identity") {
  Rng rng(9);
  RegressionData data = noisy_data(40, kBeta, 2.0, rng);

  const gmd::LinearProcessSpec white(8.0, 1.0, 0);
  const auto oracle = gmd::estimate_covariance(
      data, gmd::OracleProcessCov{white, gmd::InnovationDist::normal(2.0)});
  CHECK((oracle.entries() - 4.0 * Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() <
        1e-12);

  const auto toep = gmd::estimate_covariance(data, gmd::ToeplitzResidualCov{6});
  const Eigen::MatrixXd& t = toep.entries();
  CHECK(t.rows() == 40);
  // Constant diagonals within the band, zeros beyond lag 6 (up to the
  // eigenvalue floor, which leaves a PD matrix but may perturb entries).
  for (int h = 0; h < 6; ++h)
    CHECK(std::abs(t(0, h) - t(10, 10 + h)) < 1e-8 * std::abs(t(0, 0)) + 1e-12);
  CHECK(toep.min_eigenvalue() > 0.0);

  // gamma_hat(0) equals the mean squared OLS residual.
  const auto ols = gmd::fit_ols(data);
  const Eigen::VectorXd r = data.y - data.X * ols.beta_hat;
  CHECK(t(0, 0) == doctest::Approx(r.squaredNorm() / 40.0).epsilon(1e-9));

  const auto ident = gmd::estimate_covariance(data, gmd::IdentityCov{});
  CHECK((ident.entries() - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(gmd::estimate_covariance(data, gmd::ToeplitzResidualCov{20}),
                  gmd::InvalidInput);  // max_lag >= n/2
  CHECK_THROWS_AS(gmd::estimate_covariance(data, gmd::ToeplitzResidualCov{-1}),
                  gmd::InvalidInput);
}

TEST_CASE("oracle covariance matches the analytic band for a dependent process") {
  Rng rng(10);
  RegressionData data = noisy_data(30, kBeta, 2.0, rng);
  const gmd::LinearProcessSpec spec(7.5, 1.0, 50);
  const auto dist = gmd::InnovationDist::laplace(5.0);
  const auto cov = gmd::estimate_covariance(data, gmd::OracleProcessCov{spec, dist});
  const Eigen::VectorXd g = gmd::analytic_autocovariance(spec, dist, 29);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      CHECK(cov.entries()(i, j) == doctest::Approx(g[std::abs(i - j)]).epsilon(1e-12));
}

TEST_CASE("nelder_mead drives a smooth quadratic to its minimum") {
  const auto f = [](const Eigen::VectorXd& v) {
    const double a = v[0] - 3.0, b = v[1] + 1.0;
    return a * a + 10.0 * b * b + 2.0;
  };
  Eigen::VectorXd start(2);
  start << -5.0, 4.0;
  const auto res =
      gmd::nelder_mead(f, start, Eigen::MatrixXd::Identity(2, 2), 1e-9, 2000);
  CHECK(res.converged);
  CHECK(std::abs(res.x[0] - 3.0) < 1e-6);
  CHECK(std::abs(res.x[1] + 1.0) < 1e-6);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(res.value <= f(start));
  CHECK(res.iterations > 0);
}

TEST_CASE("nelder_mead handles a nonsmooth V-shaped objective") {
  const auto f = [](const Eigen::VectorXd& v) {
    return std::abs(v[0] - 1.0) + 2.0 * std::abs(v[1] - 2.0);
  };
  Eigen::VectorXd start(2);
  start << 10.0, -10.0;
  const auto res =
      gmd::nelder_mead(f, start, Eigen::MatrixXd::Identity(2, 2), 1e-10, 5000);
  CHECK(std::abs(res.x[0] - 1.0) < 1e-5);
  CHECK(std::abs(res.x[1] - 2.0) < 1e-5);
}
