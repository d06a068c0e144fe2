#include "gmd/linear_process.hpp"

#include <cmath>
#include <string>

#include "gmd/errors.hpp"

namespace gmd {

LinearProcessSpec::LinearProcessSpec(double kappa, double g0, int truncation)
    : kappa_(kappa), g0_(g0), truncation_(truncation) {
  if (!std::isfinite(kappa) || !std::isfinite(g0)) {
    throw InvalidInput("linear process parameters must be finite");
  }
  if (truncation < 0) {
    throw InvalidInput("truncation must be >= 0");
  }
  const double eta = mixing_rate_eta();
  if (!(eta > 3.0)) {
    throw InvalidInput("kappa = " + std::to_string(kappa) +
                       " gives mixing rate eta = " + std::to_string(eta) +
                       "; need eta > 3 (kappa > 7) for the CLT conditions");
  }
  // Truncation negligibility: the last kept coefficient must already be at
  // double-precision noise level. V = 0 is the degenerate white-noise filter
  // and has no tail to check.
  if (truncation >= 1 && coefficient(truncation) > 1e-12) {
    throw InvalidInput("truncation V = " + std::to_string(truncation) + " leaves g_V = " +
                       std::to_string(coefficient(truncation)) +
                       " > 1e-12; increase V or kappa");
  }
}

double LinearProcessSpec::coefficient(int v) const {
  if (v == 0) return g0_;
  if (v < 0 || v > truncation_) return 0.0;
  return std::pow(static_cast<double>(v), -kappa_);
}

double LinearProcessSpec::mixing_rate_eta() const {
  const double delta = kDelta;
  return (kappa_ * delta - std::max(delta, 1.0)) / (1.0 + delta) - 1.0;
}

double LinearProcessSpec::tail_bound() const {
  // sum_{v>V} v^-kappa <= (V+1)^-kappa + integral_{V+1}^inf x^-kappa dx;
  // at V = 0 this bounds the whole series, which the degenerate filter drops.
  const double v1 = static_cast<double>(truncation_) + 1.0;
  return std::pow(v1, -kappa_) + std::pow(v1, 1.0 - kappa_) / (kappa_ - 1.0);
}

Eigen::VectorXd generate_errors(const LinearProcessSpec& spec, const InnovationDist& dist,
                                std::size_t n, Rng& rng) {
  if (n < 1) throw InvalidInput("generate_errors: n must be >= 1");
  const int V = spec.truncation();
  // xi[0..V-1] are the pre-sample innovations xi_{1-V}..xi_0.
  const Eigen::VectorXd xi = sample_innovations(dist, n + static_cast<std::size_t>(V), rng);
  Eigen::VectorXd e(static_cast<Eigen::Index>(n));
  for (Eigen::Index t = 0; t < e.size(); ++t) {
    double acc = 0.0;
    for (int v = V; v >= 1; --v) acc += spec.coefficient(v) * xi[t + V - v];
    acc += spec.g0() * xi[t + V];
    e[t] = acc;
  }
  return e;
}

Eigen::VectorXd analytic_autocovariance(const LinearProcessSpec& spec,
                                        const InnovationDist& dist, std::size_t max_lag) {
  const int V = spec.truncation();
  const double var_xi = dist.variance();
  Eigen::VectorXd gamma(static_cast<Eigen::Index>(max_lag) + 1);
  for (Eigen::Index h = 0; h < gamma.size(); ++h) {
    double acc = 0.0;
    if (h <= V) {
      for (int v = 0; v + static_cast<int>(h) <= V; ++v) {
        acc += spec.coefficient(v) * spec.coefficient(v + static_cast<int>(h));
      }
    }
    gamma[h] = var_xi * acc;
  }
  return gamma;
}

}  // namespace gmd
