#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "gmd/covariance.hpp"
#include "gmd/innovations.hpp"
#include "gmd/linear_process.hpp"
#include "gmd/measure.hpp"
#include "gmd/regression.hpp"
#include "gmd/transforms.hpp"

namespace gmd {

enum class Method { OLS, GLS, GMD1, GMD2 };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct EstimatorResult {
  Eigen::VectorXd beta_hat;
  Method method = Method::OLS;
  std::optional<double> objective_value;  // dispersion at beta_hat, GMD only
  int iterations = 0;
  bool converged = true;
};

struct FitOptions {
  enum class Start { FromGLS, FromOLS, Given };
  Start start = Start::FromGLS;
  Eigen::VectorXd start_value;  // used when start == Given
  double tol = 1e-6;            // relative simplex diameter
  int max_iter = 0;             // 0 means the default 500 * p
  int restarts = 2;
  // Seeds the restart perturbations only; the base fit is seed-free.
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// beta = (X'X)^{-1} X'y through a QR decomposition, not normal equations.
EstimatorResult fit_ols(const RegressionData& data);

// beta = (X'Omega^{-1}X)^{-1} X'Omega^{-1} y, computed by whitening with the
// Cholesky factor of Omega and solving the induced least-squares problem.
EstimatorResult fit_gls(const RegressionData& data, const CovarianceMatrix& omega_hat);

// Minimize the dispersion over b with a simplex search started at the GLS
// (default) solution; `restarts` additional seeded starts hedge the
// non-convex piecewise-linear landscape and the best value wins.
// SymmetricRoot tags the result GMD1, CholeskyFactor GMD2; Identity gives
// the common Q = I estimator (tagged GMD1).
EstimatorResult fit_gmd(const RegressionData& data, TransformKind transform,
                        const CovarianceMatrix& omega_hat, const IntegratingMeasure& measure,
                        const FitOptions& opts = {});

// Same search with caller-supplied weights, letting replicate loops hoist the
// transform construction. No covariance is available here, so opts.start must
// be Given or FromOLS, and tag must be GMD1 or GMD2.
EstimatorResult fit_gmd(const RegressionData& data, const WeightMatrices& weights, Method tag,
                        const IntegratingMeasure& measure, const FitOptions& opts);

// Error-covariance constructions for Omega-hat.
struct OracleProcessCov {
  LinearProcessSpec process;
  InnovationDist innovation;
};
struct ToeplitzResidualCov {
  int max_lag = 10;
};
struct IdentityCov {};
using CovarianceEstimator = std::variant<OracleProcessCov, ToeplitzResidualCov, IdentityCov>;

// OracleProcessCov: exact banded Toeplitz from the analytic autocovariance.
// ToeplitzResidualCov: sample autocovariances of OLS residuals up to max_lag
// (max_lag < n/2), zero beyond, eigenvalue-floored at 1e-8 gamma_hat(0) to
// restore positive definiteness; still-degenerate results are rejected.
// IdentityCov: the identity matrix (no whitening).
CovarianceMatrix estimate_covariance(const RegressionData& data, const CovarianceEstimator& method);

}  // namespace gmd
