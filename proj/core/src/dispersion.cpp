#include "gmd/dispersion.hpp"

#include <cmath>
#include <string>

#include "gmd/errors.hpp"

namespace gmd {

DispersionContext::DispersionContext(RegressionData data, WeightMatrices weights,
                                     IntegratingMeasure measure)
    : data_(std::move(data)), weights_(std::move(weights)), measure_(std::move(measure)) {
  const Eigen::Index n = data_.n();
  const Eigen::Index p = data_.p();
  if (weights_.Q.rows() != n || weights_.Q.cols() != n || weights_.D.rows() != n ||
      weights_.D.cols() != p) {
    throw InvalidInput("weights do not match the data dimensions");
  }
  dstar_ = weights_.D * weights_.D.transpose();
  dstar_ = ((dstar_ + dstar_.transpose()) / 2.0).eval();
  const double trace_gap = std::abs(dstar_.trace() - static_cast<double>(p));
  if (trace_gap > 1e-10) {
    throw NumericalFailure("trace(DD') = " + std::to_string(dstar_.trace()) +
                           " deviates from p = " + std::to_string(p) +
                           "; weight matrices are inconsistent");
  }
  qx_ = weights_.Q * data_.X;
  qy_ = weights_.Q * data_.y;
}

namespace {

void check_b(const DispersionContext& ctx, const Eigen::VectorXd& b) {
  if (b.size() != ctx.data().p()) {
    throw InvalidInput("parameter vector has length " + std::to_string(b.size()) +
                       ", expected p = " + std::to_string(ctx.data().p()));
  }
}

// s_i = I(e_i <= yval) - I(-e_i < yval) in {-1, 0, 1}.
inline double indicator_pair(double e, double yval) {
  return (e <= yval ? 1.0 : 0.0) - (-e < yval ? 1.0 : 0.0);
}

}  // namespace

Eigen::VectorXd transformed_residuals(const DispersionContext& ctx, const Eigen::VectorXd& b) {
  check_b(ctx, b);
  return ctx.qy() - ctx.qx() * b;
}

Eigen::VectorXd u_process(const DispersionContext& ctx, const Eigen::VectorXd& b, double yval) {
  const Eigen::VectorXd e = transformed_residuals(ctx, b);
  Eigen::VectorXd s(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) s[i] = indicator_pair(e[i], yval);
  return ctx.weights().D.transpose() * s;
}

double dispersion_lebesgue(const DispersionContext& ctx, const Eigen::VectorXd& b) {
  if (!std::holds_alternative<Lebesgue>(ctx.measure())) {
    throw InvalidInput("dispersion_lebesgue requires the Lebesgue measure");
  }
  check_b(ctx, b);
  const Eigen::VectorXd e = ctx.qy() - ctx.qx() * b;
  const Eigen::MatrixXd& dstar = ctx.dstar();
  double total = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    total += dstar.row(i).dot(
        (((e.array() + e[i]).abs() - (e.array() - e[i]).abs()).matrix()));
  }
  return total;
}

double dispersion_quadrature(const DispersionContext& ctx, const Eigen::VectorXd& b) {
  check_b(ctx, b);
  if (std::holds_alternative<Lebesgue>(ctx.measure())) {
    throw InvalidInput("dispersion_quadrature requires a discrete measure");
  }
  const Eigen::VectorXd e = transformed_residuals(ctx, b);
  const Eigen::MatrixXd& D = ctx.weights().D;

  if (std::holds_alternative<DegenerateAtZero>(ctx.measure())) {
    Eigen::VectorXd s(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) s[i] = e[i] > 0.0 ? -1.0 : 1.0;
    return (D.transpose() * s).squaredNorm();
  }

  const auto& disc = std::get<SymmetricDiscrete>(ctx.measure());
  auto usq = [&](double yval) {
    Eigen::VectorXd s(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) s[i] = indicator_pair(e[i], yval);
    return (D.transpose() * s).squaredNorm();
  };
  double total = 0.0;
  for (Eigen::Index j = 0; j < disc.points().size(); ++j) {
    total += disc.weights()[j] * (usq(disc.points()[j]) + usq(-disc.points()[j]));
  }
  if (disc.weight_at_zero() > 0.0) total += disc.weight_at_zero() * usq(0.0);
  return total;
}

double dispersion(const DispersionContext& ctx, const Eigen::VectorXd& b) {
  return std::holds_alternative<Lebesgue>(ctx.measure()) ? dispersion_lebesgue(ctx, b)
                                                         : dispersion_quadrature(ctx, b);
}

}  // namespace gmd
