#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>

namespace gmd {

// Symmetric-about-zero integrating measures H for the dispersion.
// Lebesgue (H(y) = y) admits a closed form; the discrete variants go through
// quadrature. Symmetry dH(-y) = dH(y) is structural: SymmetricDiscrete only
// stores strictly positive atoms, each evaluated at +y and -y with the same
// weight, plus an optional explicit atom at 0.

struct Lebesgue {};

struct DegenerateAtZero {};

class SymmetricDiscrete {
 public:
  SymmetricDiscrete(Eigen::VectorXd points, Eigen::VectorXd weights,
                    double weight_at_zero = 0.0);

  const Eigen::VectorXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight_at_zero() const { return weight_at_zero_; }

 private:
  Eigen::VectorXd points_;
  Eigen::VectorXd weights_;
  double weight_at_zero_;
};

using IntegratingMeasure = std::variant<Lebesgue, SymmetricDiscrete, DegenerateAtZero>;

std::string measure_label(const IntegratingMeasure& m);

// Midpoint grid over (0, max_abs]: atoms at (j - 1/2) step with weight
// `step`, mirrored by evaluation. Riemann approximation of Lebesgue used by
// the quadrature cross-checks.
SymmetricDiscrete uniform_grid_measure(double max_abs, double step);

}  // namespace gmd
