#include "gmd/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gmd/errors.hpp"

namespace gmd {

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, const Eigen::MatrixXd& step_directions,
                          double tol, int max_iter) {
  const Eigen::Index p = start.size();
  if (p < 1) throw InvalidInput("nelder_mead: empty start point");
  if (step_directions.rows() != p || step_directions.cols() != p) {
    throw InvalidInput("nelder_mead: step_directions must be p x p");
  }
  if (!(tol > 0.0)) throw InvalidInput("nelder_mead: tol must be positive");
  if (max_iter < p + 1) throw InvalidInput("nelder_mead: max_iter must be >= p + 1");

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<Eigen::VectorXd> vert(p + 1, start);
  std::vector<double> fval(p + 1);
  for (Eigen::Index j = 0; j < p; ++j) vert[j + 1] += step_directions.col(j);
  for (Eigen::Index v = 0; v <= p; ++v) fval[v] = objective(vert[v]);

  std::vector<int> order(p + 1);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fval[a] < fval[b]; });
  };

  SimplexResult res;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    sort_vertices();
    const int best = order[0], worst = order[p], second_worst = order[p - 1];

    double diameter = 0.0;
    for (Eigen::Index v = 0; v <= p; ++v) {
      diameter = std::max(diameter, (vert[v] - vert[best]).norm());
    }
    if (diameter <= tol * (1.0 + vert[best].norm())) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(p);
    for (Eigen::Index v = 0; v <= p; ++v) {
      if (static_cast<int>(v) != worst) centroid += vert[v];
    }
    centroid /= static_cast<double>(p);

    const Eigen::VectorXd reflected = centroid + alpha * (centroid - vert[worst]);
    const double f_ref = objective(reflected);

    if (f_ref < fval[best]) {
      const Eigen::VectorXd expanded = centroid + gamma * (reflected - centroid);
      const double f_exp = objective(expanded);
      if (f_exp < f_ref) {
        vert[worst] = expanded;
        fval[worst] = f_exp;
      } else {
        vert[worst] = reflected;
        fval[worst] = f_ref;
      }
      continue;
    }
    if (f_ref < fval[second_worst]) {
      vert[worst] = reflected;
      fval[worst] = f_ref;
      continue;
    }
    // Contract toward the better of (worst, reflected).
    if (f_ref < fval[worst]) {
      const Eigen::VectorXd outside = centroid + rho * (reflected - centroid);
      const double f_out = objective(outside);
      if (f_out <= f_ref) {
        vert[worst] = outside;
        fval[worst] = f_out;
        continue;
      }
    } else {
      const Eigen::VectorXd inside = centroid + rho * (vert[worst] - centroid);
      const double f_in = objective(inside);
      if (f_in < fval[worst]) {
        vert[worst] = inside;
        fval[worst] = f_in;
        continue;
      }
    }
    // Shrink everything toward the best vertex.
    for (Eigen::Index v = 0; v <= p; ++v) {
      if (static_cast<int>(v) == best) continue;
      vert[v] = vert[best] + sigma * (vert[v] - vert[best]);
      fval[v] = objective(vert[v]);
    }
  }

  sort_vertices();
  res.x = vert[order[0]];
  res.value = fval[order[0]];
  res.iterations = iter;
  return res;
}

}  // namespace gmd
