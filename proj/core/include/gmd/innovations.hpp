#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>

#include "gmd/rng.hpp"

namespace gmd {

enum class InnovationLaw { Normal, Laplace, Logistic, TwoNormalMixture };

// A mean-zero innovation distribution with finite variance. All four laws
// satisfy the moment condition E|xi|^{2+delta} < inf with delta = 2 required
// by the mixing CLT, so LinearProcessSpec accepts any of them.
class InnovationDist {
 public:
  static InnovationDist normal(double sigma);
  static InnovationDist laplace(double scale);
  static InnovationDist logistic(double scale);
  // mix_prob is the weight of the wide component:
  // (1 - mix_prob) N(0, sigma_narrow^2) + mix_prob N(0, sigma_wide^2).
  static InnovationDist two_normal_mixture(double mix_prob, double sigma_narrow,
                                           double sigma_wide);

  InnovationLaw law() const { return law_; }
  const std::string& label() const { return label_; }

  double variance() const;
  double pdf(double x) const;
  double cdf(double x) const;
  double sample(Rng& rng) const;

  // Raw parameters, exposed for config echo / serialization.
  double param_a() const { return a_; }  // sigma or scale or sigma_narrow
  double param_b() const { return b_; }  // sigma_wide (mixture only)
  double mix_prob() const { return mix_; }

 private:
  InnovationDist(InnovationLaw law, std::string label, double a, double b, double mix);

  InnovationLaw law_;
  std::string label_;
  double a_;
  double b_;
  double mix_;
};

// count iid draws from dist. count must be >= 1.
Eigen::VectorXd sample_innovations(const InnovationDist& dist, std::size_t count, Rng& rng);

}  // namespace gmd
