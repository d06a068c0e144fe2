#include "gmd/asymptotics.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "gmd/errors.hpp"

namespace gmd {

namespace {

// Adaptive Simpson on [a,b]: classic bisection with the 1/15 error estimate.
// Depth exhaustion with the tolerance still unmet means the integrand is too
// wild for the requested accuracy: rejected as divergent.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double h = b - a;
  const double whole = h / 6.0 * (fa + 4.0 * fm + fb);
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  if (depth <= 0) {
    throw NumericalFailure("adaptive quadrature failed to converge (divergent integral?)");
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) throw InvalidInput("integration bounds must satisfy a < b");
  const double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 48);
}

constexpr double kQuadTol = 1e-10;
constexpr double kSupportMultiple = 50.0;

void check_density(const DensitySpec& dens) {
  if (!dens.pdf || !dens.cdf) throw InvalidInput("DensitySpec requires pdf and cdf");
  if (!(dens.scale > 0.0)) throw InvalidInput("DensitySpec scale must be positive");
}

// int_{-inf}^{bound} f dH for a symmetric discrete measure: sum of weighted
// pdf values over atoms <= bound (each positive atom is mirrored to -y).
double discrete_lower_integral(const DensitySpec& dens, const SymmetricDiscrete& disc,
                               double bound) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < disc.points().size(); ++j) {
    const double y = disc.points()[j];
    const double w = disc.weights()[j];
    if (-y <= bound) acc += w * dens.pdf(-y);
    if (y <= bound) acc += w * dens.pdf(y);
  }
  if (disc.weight_at_zero() > 0.0 && 0.0 <= bound) {
    acc += disc.weight_at_zero() * dens.pdf(0.0);
  }
  return acc;
}

}  // namespace

DensitySpec density_from_innovation(const InnovationDist& dist) {
  DensitySpec d;
  d.pdf = [dist](double x) { return dist.pdf(x); };
  d.cdf = [dist](double x) { return dist.cdf(x); };
  d.scale = std::sqrt(dist.variance());
  d.label = dist.label();
  return d;
}

double psi(const DensitySpec& dens, const IntegratingMeasure& measure, double x) {
  check_density(dens);
  if (std::holds_alternative<DegenerateAtZero>(measure)) {
    throw InvalidInput("psi is not defined under the degenerate measure");
  }
  if (std::holds_alternative<Lebesgue>(measure)) {
    return dens.cdf(-x) - dens.cdf(x);
  }
  const auto& disc = std::get<SymmetricDiscrete>(measure);
  return discrete_lower_integral(dens, disc, -x) - discrete_lower_integral(dens, disc, x);
}

double density_l2_norm(const DensitySpec& dens, const IntegratingMeasure& measure) {
  check_density(dens);
  if (std::holds_alternative<DegenerateAtZero>(measure)) {
    const double f0 = dens.pdf(0.0);
    return f0 * f0;
  }
  if (std::holds_alternative<Lebesgue>(measure)) {
    const double half_width = kSupportMultiple * dens.scale;
    const auto f2 = [&dens](double y) {
      const double f = dens.pdf(y);
      return f * f;
    };
    return integrate(f2, -half_width, half_width, kQuadTol);
  }
  const auto& disc = std::get<SymmetricDiscrete>(measure);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < disc.points().size(); ++j) {
    const double y = disc.points()[j];
    const double fp = dens.pdf(y), fm = dens.pdf(-y);
    acc += disc.weights()[j] * (fp * fp + fm * fm);
  }
  if (disc.weight_at_zero() > 0.0) {
    const double f0 = dens.pdf(0.0);
    acc += disc.weight_at_zero() * f0 * f0;
  }
  return acc;
}

Eigen::MatrixXd sigma_matrix_equal_density(const WeightMatrices& weights,
                                           const DensitySpec& dens,
                                           const IntegratingMeasure& measure) {
  const double f2 = density_l2_norm(dens, measure);
  const Eigen::MatrixXd& D = weights.D;
  Eigen::MatrixXd sigma = f2 * (D.transpose() * (D * D.transpose()) * D);
  return ((sigma + sigma.transpose()) / 2.0).eval();
}

Eigen::MatrixXd simplified_asym_cov(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q,
                                    const DensitySpec& dens, const IntegratingMeasure& measure,
                                    double tau) {
  if (tau < 0.0) throw InvalidInput("tau must be nonnegative");
  if (Q.rows() != X.rows() || Q.cols() != X.rows()) {
    throw InvalidInput("transform Q must be n x n matching the design");
  }
  const double f2 = density_l2_norm(dens, measure);
  if (!(f2 > 0.0)) throw NumericalFailure("|f|^2_H is zero; asymptotic covariance undefined");
  const Eigen::MatrixXd QX = Q * X;
  const Eigen::MatrixXd M = QX.transpose() * QX;
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("X'Q'QX is not positive definite");
  }
  const Eigen::MatrixXd minv =
      llt.solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
  const double c = tau / (4.0 * f2 * f2);
  return ((c * (minv + minv.transpose())) / 2.0).eval();
}

double estimate_tau(const DensitySpec& dens, const IntegratingMeasure& measure,
                    const Eigen::VectorXd& samples) {
  if (samples.size() < 2) throw InvalidInput("estimate_tau needs at least 2 samples");
  Eigen::VectorXd vals(samples.size());
  for (Eigen::Index i = 0; i < samples.size(); ++i) vals[i] = psi(dens, measure, samples[i]);
  const double mean = vals.mean();
  return (vals.array() - mean).square().sum() / static_cast<double>(samples.size() - 1);
}

}  // namespace gmd
