#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

#include "gmd/innovations.hpp"
#include "gmd/measure.hpp"
#include "gmd/transforms.hpp"

namespace gmd {

// A symmetric error density with its distribution function. `scale` sets the
// equivalent support used by the Lebesgue quadrature: integrals run over
// [-50 scale, 50 scale].
struct DensitySpec {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  double scale = 1.0;
  std::string label;
};

DensitySpec density_from_innovation(const InnovationDist& dist);

// psi(x) = int_{-inf}^{-x} f dH - int_{-inf}^{x} f dH; under Lebesgue H this
// is F(-x) - F(x) = 1 - 2F(x). Degenerate measure is not integrable here.
double psi(const DensitySpec& dens, const IntegratingMeasure& measure, double x);

// |f|^2_H = int f^2 dH. Lebesgue uses adaptive quadrature to absolute
// tolerance 1e-10; non-convergence is a NumericalFailure, not a warning.
double density_l2_norm(const DensitySpec& dens, const IntegratingMeasure& measure);

// Equal-density Sigma. The double sum
//   |f|^2_H sum_ij dstar_ij (A X' q_i)(A X' q_j)'
// contracts to |f|^2_H D'(DD')D since A X' q_i is the i-th row of D.
Eigen::MatrixXd sigma_matrix_equal_density(const WeightMatrices& weights,
                                           const DensitySpec& dens,
                                           const IntegratingMeasure& measure);

// tau (2 |f|^2_H)^{-2} (X'Q'QX)^{-1}.
Eigen::MatrixXd simplified_asym_cov(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q,
                                    const DensitySpec& dens, const IntegratingMeasure& measure,
                                    double tau);

// Sample variance (divisor m-1) of psi(sample_i); needs m >= 2.
double estimate_tau(const DensitySpec& dens, const IntegratingMeasure& measure,
                    const Eigen::VectorXd& samples);

struct AsymptoticReport {
  Eigen::MatrixXd sigma;     // equal-density Sigma (empty if no weights given)
  Eigen::MatrixXd asym_cov;  // simplified covariance (empty if no design given)
  double tau = 0.0;
  double f_norm_sq = 0.0;
  std::string density_label;
  std::string measure_label;
};

}  // namespace gmd
