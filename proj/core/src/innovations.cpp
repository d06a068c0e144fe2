#include "gmd/innovations.hpp"

#include <cmath>
#include <numbers>

#include "gmd/errors.hpp"

namespace gmd {

namespace {

double normal_pdf(double x, double sigma) {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double x, double sigma) {
  return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2));
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

InnovationDist::InnovationDist(InnovationLaw law, std::string label, double a, double b,
                               double mix)
    : law_(law), label_(std::move(label)), a_(a), b_(b), mix_(mix) {}

InnovationDist InnovationDist::normal(double sigma) {
  require_positive(sigma, "sigma");
  return {InnovationLaw::Normal, "N", sigma, 0.0, 0.0};
}

InnovationDist InnovationDist::laplace(double scale) {
  require_positive(scale, "scale");
  return {InnovationLaw::Laplace, "La", scale, 0.0, 0.0};
}

InnovationDist InnovationDist::logistic(double scale) {
  require_positive(scale, "scale");
  return {InnovationLaw::Logistic, "Lo", scale, 0.0, 0.0};
}

InnovationDist InnovationDist::two_normal_mixture(double mix_prob, double sigma_narrow,
                                                  double sigma_wide) {
  require_positive(sigma_narrow, "sigma_narrow");
  require_positive(sigma_wide, "sigma_wide");
  if (!(mix_prob >= 0.0 && mix_prob <= 1.0)) {
    throw InvalidInput("mix_prob must lie in [0,1]");
  }
  return {InnovationLaw::TwoNormalMixture, "M", sigma_narrow, sigma_wide, mix_prob};
}

double InnovationDist::variance() const {
  switch (law_) {
    case InnovationLaw::Normal:
      return a_ * a_;
    case InnovationLaw::Laplace:
      return 2.0 * a_ * a_;
    case InnovationLaw::Logistic:
      return a_ * a_ * std::numbers::pi * std::numbers::pi / 3.0;
    case InnovationLaw::TwoNormalMixture:
      return (1.0 - mix_) * a_ * a_ + mix_ * b_ * b_;
  }
  throw NumericalFailure("unreachable innovation law");
}

double InnovationDist::pdf(double x) const {
  switch (law_) {
    case InnovationLaw::Normal:
      return normal_pdf(x, a_);
    case InnovationLaw::Laplace:
      return std::exp(-std::abs(x) / a_) / (2.0 * a_);
    case InnovationLaw::Logistic: {
      const double t = std::exp(-std::abs(x) / a_);
      const double denom = 1.0 + t;
      return t / (a_ * denom * denom);
    }
    case InnovationLaw::TwoNormalMixture:
      return (1.0 - mix_) * normal_pdf(x, a_) + mix_ * normal_pdf(x, b_);
  }
  throw NumericalFailure("unreachable innovation law");
}

double InnovationDist::cdf(double x) const {
  switch (law_) {
    case InnovationLaw::Normal:
      return normal_cdf(x, a_);
    case InnovationLaw::Laplace:
      return x < 0.0 ? 0.5 * std::exp(x / a_) : 1.0 - 0.5 * std::exp(-x / a_);
    case InnovationLaw::Logistic:
      return 1.0 / (1.0 + std::exp(-x / a_));
    case InnovationLaw::TwoNormalMixture:
      return (1.0 - mix_) * normal_cdf(x, a_) + mix_ * normal_cdf(x, b_);
  }
  throw NumericalFailure("unreachable innovation law");
}

double InnovationDist::sample(Rng& rng) const {
  switch (law_) {
    case InnovationLaw::Normal:
      return a_ * rng.normal01();
    case InnovationLaw::Laplace: {
      const double u = rng.uniform01() - 0.5;
      const double mag = -a_ * std::log1p(-2.0 * std::abs(u));
      return u < 0.0 ? -mag : mag;
    }
    case InnovationLaw::Logistic: {
      const double u = rng.uniform01();
      return a_ * std::log(u / (1.0 - u));
    }
    case InnovationLaw::TwoNormalMixture: {
      // Component pick first, then one Box-Muller pair: three uniforms per
      // draw, independent of which component lands.
      const double pick = rng.uniform01();
      const double z = rng.normal01();
      return (pick < mix_ ? b_ : a_) * z;
    }
  }
  throw NumericalFailure("unreachable innovation law");
}

Eigen::VectorXd sample_innovations(const InnovationDist& dist, std::size_t count, Rng& rng) {
  if (count < 1) throw InvalidInput("sample_innovations: count must be >= 1");
  Eigen::VectorXd out(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = dist.sample(rng);
  return out;
}

}  // namespace gmd
