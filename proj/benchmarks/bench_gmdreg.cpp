#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "gmd/covariance.hpp"
#include "gmd/dispersion.hpp"
#include "gmd/estimators.hpp"
#include "gmd/linear_process.hpp"
#include "gmd/regression.hpp"
#include "gmd/rng.hpp"
#include "gmd/transforms.hpp"

namespace {

gmd::RegressionData make_data(int n, int p, gmd::Rng& rng) {
  Eigen::MatrixXd x = gmd::make_uniform_design(n, p, 0.0, 50.0, rng);
  Eigen::VectorXd beta = Eigen::VectorXd::LinSpaced(p, -2.0, 1.5);
  Eigen::VectorXd y = x * beta;
  for (int i = 0; i < n; ++i) y[i] += 2.0 * rng.normal01();
  return gmd::make_regression_data(std::move(x), std::move(y));
}

gmd::CovarianceMatrix oracle_omega(int n) {
  const gmd::LinearProcessSpec spec(7.5, 1.0, 50);
  const auto dist = gmd::InnovationDist::normal(2.0);
  const Eigen::VectorXd gamma =
      gmd::analytic_autocovariance(spec, dist, std::min<int>(n - 1, 50));
  return gmd::toeplitz_covariance(gamma, n);
}

void BM_DispersionLebesgue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  gmd::Rng rng(1);
  const gmd::RegressionData data = make_data(n, 4, rng);
  const auto omega = oracle_omega(n);
  const gmd::WeightMatrices w = gmd::build_weights(data.X, gmd::sym_inverse_sqrt(omega));
  const gmd::DispersionContext ctx(data, w, gmd::Lebesgue{});
  const Eigen::VectorXd b = Eigen::VectorXd::Zero(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmd::dispersion_lebesgue(ctx, b));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DispersionLebesgue)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Complexity();

void BM_BuildWeights(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  gmd::Rng rng(2);
  const gmd::RegressionData data = make_data(n, 4, rng);
  const Eigen::MatrixXd q = gmd::sym_inverse_sqrt(oracle_omega(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmd::build_weights(data.X, q));
  }
}
BENCHMARK(BM_BuildWeights)->Arg(50)->Arg(100)->Arg(200);

void BM_SymInverseSqrt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto omega = oracle_omega(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmd::sym_inverse_sqrt(omega));
  }
}
BENCHMARK(BM_SymInverseSqrt)->Arg(50)->Arg(100)->Arg(200);

void BM_GenerateErrors(benchmark::State& state) {
  const gmd::LinearProcessSpec spec(7.5, 1.0, 50);
  const auto dist = gmd::InnovationDist::normal(2.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    gmd::Rng rng(++seed);
    benchmark::DoNotOptimize(gmd::generate_errors(spec, dist, n, rng));
  }
}
BENCHMARK(BM_GenerateErrors)->Arg(100)->Arg(1000);

void BM_FitGmd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  gmd::Rng rng(3);
  const gmd::RegressionData data = make_data(n, 4, rng);
  const auto omega = oracle_omega(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gmd::fit_gmd(data, gmd::TransformKind::SymmetricRoot, omega, gmd::Lebesgue{}));
  }
}
BENCHMARK(BM_FitGmd)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FitGls(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  gmd::Rng rng(4);
  const gmd::RegressionData data = make_data(n, 4, rng);
  const auto omega = oracle_omega(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmd::fit_gls(data, omega));
  }
}
BENCHMARK(BM_FitGls)->Arg(50)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
