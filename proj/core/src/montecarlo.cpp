#include "gmd/montecarlo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "gmd/dispersion.hpp"
#include "gmd/errors.hpp"
#include "gmd/rng.hpp"
#include "gmd/version.hpp"

namespace gmd {

namespace {

// Stream tags keeping design, error, and optimizer randomness disjoint.
constexpr std::uint64_t kDesignStream = 0x8000000000de5160ull;
constexpr std::uint64_t kFitStreamBase = 0x4000000000000000ull;
constexpr std::uint64_t kCellStreamBase = 0xc377000000000000ull;

std::uint64_t design_seed(const SimulationConfig& config, std::size_t rep_index) {
  if (config.design_mode == DesignMode::RedrawnPerReplicate) {
    return derive_seed(config.base_seed, kDesignStream + 1 + rep_index);
  }
  return derive_seed(config.base_seed, kDesignStream);
}

Eigen::MatrixXd draw_design(const SimulationConfig& config, std::size_t rep_index) {
  if (const auto* fixed = std::get_if<FixedDesign>(&config.design)) {
    return fixed->X;
  }
  const auto& u = std::get<UniformDesign>(config.design);
  Rng rng(design_seed(config, rep_index));
  return make_uniform_design(config.n, static_cast<std::size_t>(config.beta_true.size()),
                             u.lo, u.hi, rng);
}

CovarianceEstimator resolve_covariance(const SimulationConfig& config) {
  if (std::holds_alternative<OracleCovMode>(config.covariance_mode)) {
    return OracleProcessCov{config.process, config.innovation};
  }
  if (const auto* t = std::get_if<ToeplitzCovMode>(&config.covariance_mode)) {
    return ToeplitzResidualCov{t->max_lag};
  }
  return IdentityCov{};
}

bool covariance_is_replicate_free(const SimulationConfig& config) {
  return !std::holds_alternative<ToeplitzCovMode>(config.covariance_mode);
}

bool wants(const SimulationConfig& config, Method m) {
  for (Method e : config.estimators) {
    if (e == m) return true;
  }
  return false;
}

// Work shared by every replicate of one cell. Only populated for the parts
// that are actually replicate-independent under the given config.
struct CellEnv {
  std::optional<Eigen::MatrixXd> X;
  std::optional<CovarianceMatrix> omega;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> omega_llt;
  std::optional<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> gls_qr;  // QR of whitened X
  std::optional<WeightMatrices> weights_gmd1;
  std::optional<WeightMatrices> weights_gmd2;
};

CellEnv build_env(const SimulationConfig& config) {
  CellEnv env;
  if (config.design_mode == DesignMode::FixedAcrossReplicates) {
    env.X = draw_design(config, 0);
    if (covariance_is_replicate_free(config)) {
      // Omega needs data only in the Toeplitz mode; a placeholder response
      // keeps estimate_covariance's signature uniform.
      const RegressionData shape{*env.X, Eigen::VectorXd::Zero(env.X->rows())};
      env.omega.emplace(estimate_covariance(shape, resolve_covariance(config)));
      env.omega_llt.emplace(env.omega->entries());
      if (env.omega_llt->info() != Eigen::Success) {
        throw NumericalFailure("simulation: Cholesky factorization of Omega failed");
      }
      const Eigen::MatrixXd Xw = env.omega_llt->matrixL().solve(*env.X);
      env.gls_qr.emplace(Xw);
      if (env.gls_qr->rank() < env.X->cols()) {
        throw NumericalFailure("simulation: whitened design is rank deficient");
      }
      if (wants(config, Method::GMD1)) {
        env.weights_gmd1 =
            build_weights(*env.X, make_transform(TransformKind::SymmetricRoot, *env.omega));
      }
      if (wants(config, Method::GMD2)) {
        env.weights_gmd2 =
            build_weights(*env.X, make_transform(TransformKind::CholeskyFactor, *env.omega));
      }
    }
  }
  return env;
}

ReplicateResult run_replicate_env(const SimulationConfig& config, const CellEnv& env,
                                  std::size_t rep_index) {
  ReplicateResult out;
  try {
    const Eigen::MatrixXd X = env.X ? *env.X : draw_design(config, rep_index);
    Rng err_rng(derive_seed(config.base_seed, rep_index));
    const Eigen::VectorXd eps =
        generate_errors(config.process, config.innovation, config.n, err_rng);
    RegressionData data = make_regression_data(X, X * config.beta_true + eps);

    std::optional<CovarianceMatrix> local_omega;
    const CovarianceMatrix& omega = env.omega
                                        ? *env.omega
                                        : local_omega.emplace(estimate_covariance(
                                              data, resolve_covariance(config)));

    const bool need_gls_start = (wants(config, Method::GMD1) || wants(config, Method::GMD2)) &&
                                config.fit.start == FitOptions::Start::FromGLS;
    std::optional<Eigen::VectorXd> gls_beta;
    auto gls_estimate = [&]() -> const Eigen::VectorXd& {
      if (!gls_beta) {
        if (env.gls_qr) {
          const Eigen::VectorXd yw = env.omega_llt->matrixL().solve(data.y);
          gls_beta = env.gls_qr->solve(yw);
        } else {
          gls_beta = fit_gls(data, omega).beta_hat;
        }
      }
      return *gls_beta;
    };

    FitOptions rep_fit = config.fit;
    rep_fit.seed = derive_seed(config.base_seed, kFitStreamBase + rep_index);
    if (need_gls_start) {
      rep_fit.start = FitOptions::Start::Given;
      rep_fit.start_value = gls_estimate();
    }

    auto fit_one_gmd = [&](Method tag) {
      const std::optional<WeightMatrices>& cached =
          tag == Method::GMD1 ? env.weights_gmd1 : env.weights_gmd2;
      if (cached) return fit_gmd(data, *cached, tag, config.measure, rep_fit);
      const TransformKind kind = tag == Method::GMD1 ? TransformKind::SymmetricRoot
                                                     : TransformKind::CholeskyFactor;
      return fit_gmd(data, build_weights(data.X, make_transform(kind, omega)), tag,
                     config.measure, rep_fit);
    };

    out.estimates.resize(static_cast<Eigen::Index>(config.estimators.size()),
                         config.beta_true.size());
    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
      Eigen::VectorXd beta;
      switch (config.estimators[e]) {
        case Method::OLS:
          beta = fit_ols(data).beta_hat;
          break;
        case Method::GLS:
          beta = gls_estimate();
          break;
        case Method::GMD1:
        case Method::GMD2:
          beta = fit_one_gmd(config.estimators[e]).beta_hat;
          break;
      }
      out.estimates.row(static_cast<Eigen::Index>(e)) = beta.transpose();
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
    out.estimates.resize(0, 0);
  }
  return out;
}

}  // namespace

void validate_config(const SimulationConfig& config) {
  const auto p = static_cast<std::size_t>(config.beta_true.size());
  if (p < 1) throw InvalidInput("beta_true must be non-empty");
  if (config.replicates < 1) throw InvalidInput("replicates must be >= 1");
  if (config.n <= p) throw InvalidInput("need n > p");
  if (config.estimators.empty()) throw InvalidInput("estimators must be non-empty");
  std::set<Method> seen;
  for (Method m : config.estimators) {
    if (!seen.insert(m).second) {
      throw InvalidInput("estimator '" + method_name(m) + "' listed twice");
    }
  }
  if (const auto* fixed = std::get_if<FixedDesign>(&config.design)) {
    if (static_cast<std::size_t>(fixed->X.rows()) != config.n ||
        static_cast<std::size_t>(fixed->X.cols()) != p) {
      throw InvalidInput("fixed design must be n x p matching beta_true");
    }
  } else {
    const auto& u = std::get<UniformDesign>(config.design);
    if (!(u.hi > u.lo)) throw InvalidInput("design bounds must satisfy hi > lo");
  }
  if (const auto* t = std::get_if<ToeplitzCovMode>(&config.covariance_mode)) {
    if (t->max_lag < 0 || 2 * static_cast<std::size_t>(t->max_lag) >= config.n) {
      throw InvalidInput("covariance max_lag must satisfy 0 <= max_lag < n/2");
    }
  }
}

ReplicateResult run_replicate(const SimulationConfig& config, std::size_t rep_index) {
  validate_config(config);
  if (rep_index >= config.replicates) {
    throw InvalidInput("rep_index out of range");
  }
  return run_replicate_env(config, build_env(config), rep_index);
}

SummaryTable summarize(const std::vector<Method>& estimators,
                       const std::vector<Eigen::MatrixXd>& estimates_per_estimator,
                       const Eigen::VectorXd& beta_true) {
  if (estimators.empty() || estimators.size() != estimates_per_estimator.size()) {
    throw InvalidInput("summarize: one estimate matrix per estimator required");
  }
  SummaryTable table;
  table.estimators = estimators;
  table.beta_true = beta_true;
  table.stats.resize(estimators.size());
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    const Eigen::MatrixXd& est = estimates_per_estimator[e];
    const Eigen::Index m = est.rows();
    if (m < 2) throw InvalidInput("summarize: need at least 2 successful replicates");
    if (est.cols() != beta_true.size()) {
      throw InvalidInput("summarize: estimate width does not match beta_true");
    }
    table.stats[e].resize(static_cast<std::size_t>(beta_true.size()));
    for (Eigen::Index k = 0; k < beta_true.size(); ++k) {
      const Eigen::VectorXd col = est.col(k);
      const double mean = col.mean();
      const double bias = mean - beta_true[k];
      const double ss_mean = (col.array() - mean).square().sum();
      const double se = std::sqrt(ss_mean / static_cast<double>(m - 1));
      const double mse = (col.array() - beta_true[k]).square().sum() / static_cast<double>(m);
      // Exact decomposition: mean of squared deviations from beta splits into
      // bias^2 plus the mean squared deviation from the sample mean.
      const double identity = bias * bias + se * se * static_cast<double>(m - 1) / m;
      if (std::abs(mse - identity) > 1e-9 * std::max(1.0, std::abs(mse))) {
        throw NumericalFailure("summarize: MSE decomposition identity violated");
      }
      table.stats[e][static_cast<std::size_t>(k)] = {bias, se, mse};
    }
    table.replicates_used = static_cast<std::size_t>(est.rows());
  }
  return table;
}

SummaryTable run_simulation(const SimulationConfig& config, unsigned threads) {
  validate_config(config);
  const auto t0 = std::chrono::steady_clock::now();
  const CellEnv env = build_env(config);
  const std::size_t R = config.replicates;

  std::vector<ReplicateResult> results(R);
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, R));
  if (workers <= 1) {
    for (std::size_t r = 0; r < R; ++r) results[r] = run_replicate_env(config, env, r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      try {
        for (std::size_t r = next.fetch_add(1); r < R; r = next.fetch_add(1)) {
          results[r] = run_replicate_env(config, env, r);
        }
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::size_t failures = 0;
  std::string first_messages;
  for (const auto& r : results) {
    if (!r.ok) {
      ++failures;
      if (failures <= 3) first_messages += "\n  " + r.error;
    }
  }
  if (failures > 0 && failures * 100 >= R) {
    throw NumericalFailure("simulation aborted: " + std::to_string(failures) + " of " +
                           std::to_string(R) + " replicates failed (>= 1%); first errors:" +
                           first_messages);
  }

  std::vector<Eigen::MatrixXd> per_estimator(
      config.estimators.size(),
      Eigen::MatrixXd(static_cast<Eigen::Index>(R - failures), config.beta_true.size()));
  Eigen::Index row = 0;
  for (const auto& r : results) {
    if (!r.ok) continue;
    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
      per_estimator[e].row(row) = r.estimates.row(static_cast<Eigen::Index>(e));
    }
    ++row;
  }

  SummaryTable table = summarize(config.estimators, per_estimator, config.beta_true);
  table.innovation_label = config.innovation.label();
  table.n = config.n;
  table.replicates_requested = R;
  table.base_seed = config.base_seed;
  table.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return table;
}

void validate_config(const StudyConfig& config) {
  if (config.beta_true.size() < 1) throw InvalidInput("beta_true must be non-empty");
  if (config.replicates < 1) throw InvalidInput("replicates must be >= 1");
  if (config.n_values.empty()) throw InvalidInput("n_values must be non-empty");
  if (config.innovations.empty()) throw InvalidInput("innovations must be non-empty");
  if (config.estimators.empty()) throw InvalidInput("estimators must be non-empty");
  if (!(config.design_hi > config.design_lo)) {
    throw InvalidInput("design bounds must satisfy hi > lo");
  }
  std::set<std::string> labels;
  for (const auto& innovation : config.innovations) {
    if (!labels.insert(innovation.label()).second) {
      throw InvalidInput("duplicate innovation law '" + innovation.label() + "' in study");
    }
  }
  for (std::size_t n : config.n_values) {
    if (n <= static_cast<std::size_t>(config.beta_true.size())) {
      throw InvalidInput("every n must exceed p = " + std::to_string(config.beta_true.size()));
    }
  }
  // Constructor validates kappa / truncation / mixing rate.
  LinearProcessSpec probe(config.kappa, config.g0, config.truncation);
  (void)probe;
}

SimulationConfig study_cell_config(const StudyConfig& config, std::size_t innovation_index,
                                   std::size_t n_index) {
  if (innovation_index >= config.innovations.size() || n_index >= config.n_values.size()) {
    throw InvalidInput("study cell index out of range");
  }
  SimulationConfig cell;
  cell.beta_true = config.beta_true;
  cell.n = config.n_values[n_index];
  cell.replicates = config.replicates;
  cell.innovation = config.innovations[innovation_index];
  cell.process = LinearProcessSpec(config.kappa, config.g0, config.truncation);
  cell.design = UniformDesign{config.design_lo, config.design_hi};
  cell.design_mode = config.design_mode;
  cell.covariance_mode = config.covariance_mode;
  cell.estimators = config.estimators;
  cell.measure = Lebesgue{};
  cell.fit = config.fit;
  const std::size_t cell_index = n_index * config.innovations.size() + innovation_index;
  cell.base_seed = derive_seed(config.seed, kCellStreamBase + cell_index);
  return cell;
}

StudyResult run_study(const StudyConfig& config, unsigned threads) {
  validate_config(config);
  const auto t0 = std::chrono::steady_clock::now();
  StudyResult out;
  out.config = config;
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    for (std::size_t ii = 0; ii < config.innovations.size(); ++ii) {
      out.cells.push_back(run_simulation(study_cell_config(config, ii, ni), threads));
    }
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%9.4f", v);
  return buf;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string render_study_text(const StudyResult& study) {
  std::ostringstream os;
  os << "Bias, SE, and MSE by innovation law and sample size ("
     << study.config.replicates << " replicates per cell, seed " << study.config.seed
     << ")\n";
  for (const auto& cell : study.cells) {
    os << "\ninnovation " << cell.innovation_label << ", n = " << cell.n;
    if (cell.replicates_used != cell.replicates_requested) {
      os << " (" << cell.replicates_used << " of " << cell.replicates_requested
         << " replicates used)";
    }
    os << "\n";
    os << "  estimator   stat ";
    for (Eigen::Index k = 0; k < cell.beta_true.size(); ++k) {
      os << "    beta" << (k + 1);
    }
    os << "\n";
    for (std::size_t e = 0; e < cell.estimators.size(); ++e) {
      const char* stat_names[3] = {"bias", "se  ", "mse "};
      for (int s = 0; s < 3; ++s) {
        os << "  " << (s == 0 ? method_name(cell.estimators[e]) : "    ");
        os.width(0);
        // Align the estimator column to 10 characters.
        if (s == 0) {
          for (std::size_t pad = method_name(cell.estimators[e]).size(); pad < 10; ++pad)
            os << ' ';
        } else {
          os << "      ";
        }
        os << stat_names[s];
        for (const auto& stat : cell.stats[e]) {
          const double v = s == 0 ? stat.bias : (s == 1 ? stat.se : stat.mse);
          os << fixed4(v);
        }
        os << "\n";
      }
    }
  }
  return os.str();
}

std::string render_study_csv(const StudyResult& study) {
  std::ostringstream os;
  os << "# gmdreg " << kVersion << " simulate\n";
  os << "# seed=" << study.config.seed << " replicates=" << study.config.replicates << "\n";
  os << "innovation,n,estimator,coefficient,bias,se,mse\n";
  for (const auto& cell : study.cells) {
    for (std::size_t e = 0; e < cell.estimators.size(); ++e) {
      for (std::size_t k = 0; k < cell.stats[e].size(); ++k) {
        const auto& stat = cell.stats[e][k];
        os << cell.innovation_label << ',' << cell.n << ',' << method_name(cell.estimators[e])
           << ',' << (k + 1) << ',' << full_precision(stat.bias) << ','
           << full_precision(stat.se) << ',' << full_precision(stat.mse) << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace gmd
