#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "gmd/innovations.hpp"
#include "gmd/rng.hpp"

namespace gmd {

// Truncated one-sided moving average
//   e_t = g_0 xi_t + sum_{v=1..V} v^{-kappa} xi_{t-v}
// with iid mean-zero innovations. Polynomially decaying coefficients make the
// process strongly mixing with rate alpha(k) = O(k^{-eta}); the CLT driving
// the estimators needs eta > 3 at delta = 2, i.e. kappa > 7, which the
// constructor enforces (rejection, not clamping).
class LinearProcessSpec {
 public:
  LinearProcessSpec(double kappa, double g0, int truncation);

  double kappa() const { return kappa_; }
  double g0() const { return g0_; }
  int truncation() const { return truncation_; }

  // g_v: g0 at v = 0, v^{-kappa} for 1 <= v <= V, zero beyond.
  double coefficient(int v) const;

  // Mixing-rate exponent eta = (kappa*delta - max(delta,1))/(1+delta) - 1
  // at the moment index delta = 2 used throughout.
  double mixing_rate_eta() const;

  // Upper bound on the discarded tail sum_{v > V} v^{-kappa}.
  double tail_bound() const;

  static constexpr double kDelta = 2.0;

 private:
  double kappa_;
  double g0_;
  int truncation_;
};

// n consecutive observations of the process; consumes exactly n + V draws.
Eigen::VectorXd generate_errors(const LinearProcessSpec& spec, const InnovationDist& dist,
                                std::size_t n, Rng& rng);

// gamma(h) = Var(xi) * sum_{v=0..V-h} g_v g_{v+h} for h = 0..max_lag
// (zero once h exceeds V). Exact, no simulation.
Eigen::VectorXd analytic_autocovariance(const LinearProcessSpec& spec,
                                        const InnovationDist& dist, std::size_t max_lag);

}  // namespace gmd
