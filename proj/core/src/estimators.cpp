#include "gmd/estimators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>

#include "gmd/dispersion.hpp"
#include "gmd/errors.hpp"
#include "gmd/nelder_mead.hpp"
#include "gmd/rng.hpp"

namespace gmd {

std::string method_name(Method m) {
  switch (m) {
    case Method::OLS: return "ols";
    case Method::GLS: return "gls";
    case Method::GMD1: return "gmd1";
    case Method::GMD2: return "gmd2";
  }
  throw NumericalFailure("unreachable method");
}

Method method_from_name(const std::string& name) {
  if (name == "ols") return Method::OLS;
  if (name == "gls") return Method::GLS;
  if (name == "gmd1") return Method::GMD1;
  if (name == "gmd2") return Method::GMD2;
  throw InvalidInput("unknown estimator '" + name + "' (expected ols, gls, gmd1, or gmd2)");
}

EstimatorResult fit_ols(const RegressionData& data) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(data.X);
  if (qr.rank() < data.p()) {
    throw NumericalFailure("OLS: design matrix is rank deficient");
  }
  EstimatorResult res;
  res.beta_hat = qr.solve(data.y);
  res.method = Method::OLS;
  return res;
}

EstimatorResult fit_gls(const RegressionData& data, const CovarianceMatrix& omega_hat) {
  if (omega_hat.size() != data.n()) {
    throw InvalidInput("GLS: covariance size does not match sample size");
  }
  // Whiten by the Cholesky factor and least-squares solve; algebraically
  // (X'W X)^{-1} X'W y with W = Omega^{-1}, without forming W.
  Eigen::LLT<Eigen::MatrixXd> llt(omega_hat.entries());
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("GLS: Cholesky factorization of covariance failed");
  }
  const Eigen::MatrixXd Xw = llt.matrixL().solve(data.X);
  const Eigen::VectorXd yw = llt.matrixL().solve(data.y);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
  if (qr.rank() < data.p()) {
    throw NumericalFailure("GLS: whitened design is rank deficient");
  }
  EstimatorResult res;
  res.beta_hat = qr.solve(yw);
  res.method = Method::GLS;
  return res;
}

namespace {

EstimatorResult gmd_minimize(const RegressionData& data, const WeightMatrices& weights,
                             Method tag, const IntegratingMeasure& measure,
                             const FitOptions& opts, const Eigen::VectorXd& start) {
  if (!(opts.tol > 0.0)) throw InvalidInput("GMD: tol must be positive");
  if (opts.restarts < 0) throw InvalidInput("GMD: restarts must be >= 0");
  const Eigen::Index p = data.p();
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : 500 * static_cast<int>(p);
  if (max_iter < p + 1) throw InvalidInput("GMD: max_iter must be >= p + 1");

  DispersionContext ctx(data, weights, measure);
  const auto objective = [&ctx](const Eigen::VectorXd& b) { return dispersion(ctx, b); };

  // Columns of A set the natural parameter scale: a unit step in A-space
  // moves the transformed fitted values by a unit-norm direction.
  const Eigen::MatrixXd& A = ctx.weights().A;
  SimplexResult best = nelder_mead(objective, start, 2.0 * A, opts.tol, max_iter);
  int total_iterations = best.iterations;

  for (int r = 1; r <= opts.restarts; ++r) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd z(p);
    for (Eigen::Index k = 0; k < p; ++k) z[k] = rng.normal01();
    const Eigen::VectorXd jittered = best.x + 0.5 * (A * z);
    SimplexResult trial = nelder_mead(objective, jittered, 0.5 * A, opts.tol, max_iter);
    total_iterations += trial.iterations;
    if (trial.value < best.value) best = trial;
  }

  // The start is a simplex vertex, so the final value cannot exceed the
  // start value; fail loudly if arithmetic ever breaks that.
  if (best.value > objective(start) + 1e-9) {
    throw NumericalFailure("GMD: optimizer returned a value above its starting point");
  }

  EstimatorResult res;
  res.beta_hat = best.x;
  res.method = tag;
  res.objective_value = best.value;
  res.iterations = total_iterations;
  res.converged = best.converged;
  return res;
}

Eigen::VectorXd given_start(const RegressionData& data, const FitOptions& opts) {
  if (opts.start_value.size() != data.p()) {
    throw InvalidInput("GMD: start_value must have length p");
  }
  return opts.start_value;
}

}  // namespace

EstimatorResult fit_gmd(const RegressionData& data, TransformKind transform,
                        const CovarianceMatrix& omega_hat, const IntegratingMeasure& measure,
                        const FitOptions& opts) {
  if (omega_hat.size() != data.n()) {
    throw InvalidInput("GMD: covariance size does not match sample size");
  }
  const WeightMatrices weights =
      build_weights(data.X, make_transform(transform, omega_hat));

  Eigen::VectorXd start;
  switch (opts.start) {
    case FitOptions::Start::FromGLS:
      start = fit_gls(data, omega_hat).beta_hat;
      break;
    case FitOptions::Start::FromOLS:
      start = fit_ols(data).beta_hat;
      break;
    case FitOptions::Start::Given:
      start = given_start(data, opts);
      break;
  }
  const Method tag =
      transform == TransformKind::CholeskyFactor ? Method::GMD2 : Method::GMD1;
  return gmd_minimize(data, weights, tag, measure, opts, start);
}

EstimatorResult fit_gmd(const RegressionData& data, const WeightMatrices& weights, Method tag,
                        const IntegratingMeasure& measure, const FitOptions& opts) {
  if (tag != Method::GMD1 && tag != Method::GMD2) {
    throw InvalidInput("GMD: tag must be gmd1 or gmd2");
  }
  if (opts.start == FitOptions::Start::FromGLS) {
    throw InvalidInput("GMD with precomputed weights cannot derive a GLS start; "
                       "use Given or FromOLS");
  }
  const Eigen::VectorXd start = opts.start == FitOptions::Start::Given
                                    ? given_start(data, opts)
                                    : fit_ols(data).beta_hat;
  return gmd_minimize(data, weights, tag, measure, opts, start);
}

CovarianceMatrix estimate_covariance(const RegressionData& data,
                                     const CovarianceEstimator& method) {
  const Eigen::Index n = data.n();
  if (std::holds_alternative<IdentityCov>(method)) {
    return CovarianceMatrix::identity(n);
  }
  if (const auto* oracle = std::get_if<OracleProcessCov>(&method)) {
    const auto max_lag = static_cast<std::size_t>(
        std::min<Eigen::Index>(n - 1, oracle->process.truncation()));
    const Eigen::VectorXd gamma =
        analytic_autocovariance(oracle->process, oracle->innovation, max_lag);
    return toeplitz_covariance(gamma, n);
  }

  const auto& topts = std::get<ToeplitzResidualCov>(method);
  if (topts.max_lag < 0 || 2 * topts.max_lag >= n) {
    throw InvalidInput("ToeplitzFromResiduals: need 0 <= max_lag < n/2");
  }
  const Eigen::VectorXd resid = data.y - data.X * fit_ols(data).beta_hat;
  Eigen::VectorXd gamma(topts.max_lag + 1);
  for (int h = 0; h <= topts.max_lag; ++h) {
    double acc = 0.0;
    for (Eigen::Index t = 0; t + h < n; ++t) acc += resid[t] * resid[t + h];
    gamma[h] = acc / static_cast<double>(n);
  }
  if (!(gamma[0] > 0.0)) {
    throw NumericalFailure("ToeplitzFromResiduals: residual variance is zero");
  }

  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index lag = i >= j ? i - j : j - i;
      m(i, j) = lag <= topts.max_lag ? gamma[lag] : 0.0;
    }
  }
  // The truncated empirical sequence need not be PD; floor the spectrum at
  // 1e-8 gamma_hat(0) and let CovarianceMatrix apply the final judgment.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("ToeplitzFromResiduals: eigendecomposition failed");
  }
  const double floor = 1e-8 * gamma[0];
  const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(floor);
  Eigen::MatrixXd floored = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
  try {
    return CovarianceMatrix(std::move(floored));
  } catch (const InvalidInput& e) {
    throw NumericalFailure(std::string("ToeplitzFromResiduals: flooring failed: ") + e.what());
  }
}

}  // namespace gmd
