#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gmd/estimators.hpp"
#include "gmd/innovations.hpp"
#include "gmd/linear_process.hpp"
#include "gmd/measure.hpp"

namespace gmd {

enum class DesignMode { FixedAcrossReplicates, RedrawnPerReplicate };

struct UniformDesign {
  double lo = 0.0;
  double hi = 50.0;
};
struct FixedDesign {
  Eigen::MatrixXd X;
};
using DesignSpec = std::variant<UniformDesign, FixedDesign>;

// Covariance construction for Omega-hat, resolved against the config's own
// process/innovation at run time (so the config stays internally consistent).
struct OracleCovMode {};
struct ToeplitzCovMode {
  int max_lag = 10;
};
struct IdentityCovMode {};
using CovarianceMode = std::variant<OracleCovMode, ToeplitzCovMode, IdentityCovMode>;

// One simulation cell: a single (innovation, n) pair.
struct SimulationConfig {
  Eigen::VectorXd beta_true = (Eigen::VectorXd(4) << -2.0, 3.0, 1.5, -4.3).finished();
  std::size_t n = 50;
  std::size_t replicates = 1000;
  InnovationDist innovation = InnovationDist::normal(2.0);
  LinearProcessSpec process{7.5, 1.0, 50};
  DesignSpec design = UniformDesign{};
  DesignMode design_mode = DesignMode::FixedAcrossReplicates;
  CovarianceMode covariance_mode = OracleCovMode{};
  std::uint64_t base_seed = 1;
  std::vector<Method> estimators = {Method::GLS, Method::GMD1, Method::GMD2};
  IntegratingMeasure measure = Lebesgue{};
  FitOptions fit{};
};

void validate_config(const SimulationConfig& config);

struct ReplicateResult {
  bool ok = false;
  std::string error;
  // One row per requested estimator (config order), p columns.
  Eigen::MatrixXd estimates;
};

// Deterministic in (config.base_seed, rep_index) only; safe to call from any
// thread or in any order.
ReplicateResult run_replicate(const SimulationConfig& config, std::size_t rep_index);

struct CoefficientSummary {
  double bias = 0.0;
  double se = 0.0;
  double mse = 0.0;
};

struct SummaryTable {
  std::vector<Method> estimators;
  // stats[estimator][coefficient]
  std::vector<std::vector<CoefficientSummary>> stats;
  Eigen::VectorXd beta_true;
  std::string innovation_label;
  std::size_t n = 0;
  std::size_t replicates_requested = 0;
  std::size_t replicates_used = 0;
  std::uint64_t base_seed = 0;
  double wall_seconds = 0.0;  // never serialized into byte-stable outputs
};

// bias_k = mean - beta_k, SE_k = sample sd (divisor m-1), MSE_k = mean of
// squared deviations from beta_k. The identity MSE = bias^2 + SE^2 (m-1)/m
// is asserted internally to 1e-9 relative.
SummaryTable summarize(const std::vector<Method>& estimators,
                       const std::vector<Eigen::MatrixXd>& estimates_per_estimator,
                       const Eigen::VectorXd& beta_true);

// Runs all replicates (worker threads; 0 means hardware concurrency), drops
// failed replicates whole, aborts if failures reach 1%, and aggregates in
// replicate-index order so the output is independent of thread scheduling.
SummaryTable run_simulation(const SimulationConfig& config, unsigned threads = 0);

// Multi-cell study sweeping innovations x n_values into one table per cell.
// Cells are seeded independently from `seed`.
struct StudyConfig {
  Eigen::VectorXd beta_true = (Eigen::VectorXd(4) << -2.0, 3.0, 1.5, -4.3).finished();
  std::vector<std::size_t> n_values = {50, 100};
  std::size_t replicates = 1000;
  std::vector<InnovationDist> innovations = {
      InnovationDist::normal(2.0), InnovationDist::laplace(5.0),
      InnovationDist::logistic(5.0), InnovationDist::two_normal_mixture(0.1, 2.0, 10.0)};
  double kappa = 7.5;
  double g0 = 1.0;
  int truncation = 50;
  std::uint64_t seed = 20177;
  std::vector<Method> estimators = {Method::GLS, Method::GMD1, Method::GMD2};
  CovarianceMode covariance_mode = OracleCovMode{};
  DesignMode design_mode = DesignMode::FixedAcrossReplicates;
  double design_lo = 0.0;
  double design_hi = 50.0;
  FitOptions fit{};
};

void validate_config(const StudyConfig& config);

struct StudyResult {
  StudyConfig config;
  // Cell order: outer loop over n_values, inner loop over innovations.
  std::vector<SummaryTable> cells;
  double wall_seconds = 0.0;
};

StudyResult run_study(const StudyConfig& config, unsigned threads = 0);

// SimulationConfig for one (innovation index, n index) cell of a study,
// including its derived per-cell seed. Exposed so single cells can be
// reproduced without rerunning the sweep.
SimulationConfig study_cell_config(const StudyConfig& config, std::size_t innovation_index,
                                   std::size_t n_index);

// Human-readable aligned text table, 4 decimal places.
std::string render_study_text(const StudyResult& study);

// CSV with header innovation,n,estimator,coefficient,bias,se,mse and full
// double precision. The leading comment lines carry only byte-stable
// manifest fields (version, seed); identical config + seed gives identical
// bytes regardless of wall time or output location.
std::string render_study_csv(const StudyResult& study);

}  // namespace gmd
