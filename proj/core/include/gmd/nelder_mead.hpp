#pragma once

#include <Eigen/Core>
#include <functional>

namespace gmd {

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Downhill simplex with the standard coefficients (reflect 1, expand 2,
// contract 1/2, shrink 1/2). Suited to the piecewise-linear dispersion:
// no gradients, monotone best vertex. Convergence is declared when the
// simplex diameter falls below tol * (1 + ||best x||); iterations counts
// main-loop steps, each costing at most p + 2 objective evaluations.
// step_directions supplies the p initial edge vectors (column j displaces
// vertex j+1 from the start).
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, const Eigen::MatrixXd& step_directions,
                          double tol, int max_iter);

}  // namespace gmd
