#pragma once

#include <Eigen/Core>

#include "gmd/measure.hpp"
#include "gmd/regression.hpp"
#include "gmd/transforms.hpp"

namespace gmd {

// Everything fixed across objective evaluations for one (data, Q, H) triple:
// the transformed design QX and response Qy, and the n x n cross-weight
// matrix dstar = D D'. Holding these makes one dispersion evaluation O(n^2).
class DispersionContext {
 public:
  DispersionContext(RegressionData data, WeightMatrices weights, IntegratingMeasure measure);

  const RegressionData& data() const { return data_; }
  const WeightMatrices& weights() const { return weights_; }
  const IntegratingMeasure& measure() const { return measure_; }
  const Eigen::MatrixXd& dstar() const { return dstar_; }
  const Eigen::MatrixXd& qx() const { return qx_; }
  const Eigen::VectorXd& qy() const { return qy_; }

 private:
  RegressionData data_;
  WeightMatrices weights_;
  IntegratingMeasure measure_;
  Eigen::MatrixXd dstar_;
  Eigen::MatrixXd qx_;
  Eigen::VectorXd qy_;
};

// e_i(b) = q_i'(y - X b).
Eigen::VectorXd transformed_residuals(const DispersionContext& ctx, const Eigen::VectorXd& b);

// U_k(yval) = sum_i d_ik [ I(e_i(b) <= yval) - I(-e_i(b) < yval) ].
// The strict/non-strict indicator pair is the observable boundary convention
// under discrete measures; Lebesgue never sees it.
Eigen::VectorXd u_process(const DispersionContext& ctx, const Eigen::VectorXd& b, double yval);

// Closed form of int ||U(y,b)||^2 dy:
//   sum_{i,j} dstar_ij (|e_i + e_j| - |e_i - e_j|),
// from the kernel identity int g_a g_c dy = |a+c| - |a-c| with
// g_a(y) = I(a <= y) - I(-a < y). Requires ctx.measure = Lebesgue.
double dispersion_lebesgue(const DispersionContext& ctx, const Eigen::VectorXd& b);

// Atom sum for SymmetricDiscrete (each stored atom mirrored to -y, optional
// mass at 0) and the sign-sum special case for DegenerateAtZero.
double dispersion_quadrature(const DispersionContext& ctx, const Eigen::VectorXd& b);

// Dispatch on ctx.measure.
double dispersion(const DispersionContext& ctx, const Eigen::VectorXd& b);

}  // namespace gmd
