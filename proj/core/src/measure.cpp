#include "gmd/measure.hpp"

#include <cmath>

#include "gmd/errors.hpp"

namespace gmd {

SymmetricDiscrete::SymmetricDiscrete(Eigen::VectorXd points, Eigen::VectorXd weights,
                                     double weight_at_zero)
    : points_(std::move(points)), weights_(std::move(weights)), weight_at_zero_(weight_at_zero) {
  if (points_.size() != weights_.size()) {
    throw InvalidInput("SymmetricDiscrete: points and weights must have equal length");
  }
  if (points_.size() == 0 && weight_at_zero_ <= 0.0) {
    throw InvalidInput("SymmetricDiscrete: empty atom list");
  }
  for (Eigen::Index i = 0; i < points_.size(); ++i) {
    if (!(points_[i] > 0.0) || !std::isfinite(points_[i])) {
      throw InvalidInput("SymmetricDiscrete: atoms must be strictly positive and finite");
    }
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InvalidInput("SymmetricDiscrete: weights must be strictly positive and finite");
    }
  }
  if (weight_at_zero_ < 0.0 || !std::isfinite(weight_at_zero_)) {
    throw InvalidInput("SymmetricDiscrete: weight_at_zero must be >= 0 and finite");
  }
}

std::string measure_label(const IntegratingMeasure& m) {
  if (std::holds_alternative<Lebesgue>(m)) return "lebesgue";
  if (std::holds_alternative<DegenerateAtZero>(m)) return "degenerate_at_zero";
  return "symmetric_discrete";
}

SymmetricDiscrete uniform_grid_measure(double max_abs, double step) {
  if (!(max_abs > 0.0) || !(step > 0.0)) {
    throw InvalidInput("uniform_grid_measure: max_abs and step must be positive");
  }
  const auto count = static_cast<Eigen::Index>(std::ceil(max_abs / step));
  if (count < 1) throw InvalidInput("uniform_grid_measure: degenerate grid");
  Eigen::VectorXd pts(count), wts(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    pts[j] = (static_cast<double>(j) + 0.5) * step;
    wts[j] = step;
  }
  return {std::move(pts), std::move(wts), 0.0};
}

}  // namespace gmd
