#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gmd/asymptotics.hpp"
#include "gmd/errors.hpp"
#include "gmd/estimators.hpp"
#include "gmd/io.hpp"
#include "gmd/montecarlo.hpp"
#include "gmd/serialize.hpp"
#include "gmd/version.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct EstimateArgs {
  std::string data_path;
  std::string method = "gmd1";
  std::string omega = "identity";
  int max_lag = 10;
  std::string measure = "lebesgue";
  bool no_intercept = false;
  std::uint64_t seed = 1;
  std::string output = "estimate.json";
};

struct SimulateArgs {
  std::string config_path;
  std::string output_dir = ".";
  unsigned threads = 0;
  std::optional<std::uint64_t> seed_override;
};

struct DiagnoseArgs {
  std::string law = "normal";
  double sigma = 1.0;
  double scale = 1.0;
  double epsilon = 0.1;
  double sigma_narrow = 2.0;
  double sigma_wide = 10.0;
  std::string measure = "lebesgue";
  std::string data_path;
  std::string omega = "identity";
  int max_lag = 10;
  std::size_t tau_samples = 100000;
  std::uint64_t seed = 1;
  std::string output = "diagnose.json";
};

gmd::IntegratingMeasure parse_measure(const std::string& name) {
  if (name == "lebesgue") return gmd::Lebesgue{};
  if (name == "degenerate") return gmd::DegenerateAtZero{};
  throw gmd::InvalidInput("unknown measure '" + name + "' (expected lebesgue or degenerate)");
}

gmd::CovarianceEstimator parse_omega(const std::string& name, int max_lag) {
  if (name == "identity") return gmd::IdentityCov{};
  if (name == "toeplitz") return gmd::ToeplitzResidualCov{max_lag};
  throw gmd::InvalidInput("unknown omega mode '" + name + "' (expected identity or toeplitz)");
}

int run_estimate(const EstimateArgs& args) {
  const auto t0 = Clock::now();
  const gmd::LoadedCsv loaded = gmd::load_regression_csv(args.data_path, !args.no_intercept);
  const gmd::CovarianceMatrix omega =
      gmd::estimate_covariance(loaded.data, parse_omega(args.omega, args.max_lag));
  const gmd::IntegratingMeasure measure = parse_measure(args.measure);

  const gmd::Method method = gmd::method_from_name(args.method);
  gmd::EstimatorResult result;
  switch (method) {
    case gmd::Method::OLS:
      result = gmd::fit_ols(loaded.data);
      break;
    case gmd::Method::GLS:
      result = gmd::fit_gls(loaded.data, omega);
      break;
    case gmd::Method::GMD1:
    case gmd::Method::GMD2: {
      gmd::FitOptions opts;
      opts.seed = args.seed;
      result = gmd::fit_gmd(loaded.data,
                            method == gmd::Method::GMD1 ? gmd::TransformKind::SymmetricRoot
                                                        : gmd::TransformKind::CholeskyFactor,
                            omega, measure, opts);
      break;
    }
  }

  for (Eigen::Index k = 0; k < result.beta_hat.size(); ++k) {
    const std::string name = k < static_cast<Eigen::Index>(loaded.column_names.size())
                                 ? loaded.column_names[static_cast<std::size_t>(k)]
                                 : "b" + std::to_string(k + 1);
    std::printf("%-12s % .10g\n", name.c_str(), result.beta_hat[k]);
  }
  if (result.objective_value) {
    std::printf("objective    % .10g (%s, %d iterations)\n", *result.objective_value,
                result.converged ? "converged" : "not converged", result.iterations);
  }

  gmd::EstimateDocument doc;
  doc.result = result;
  doc.manifest.command = "estimate --data " + args.data_path + " --method " + args.method +
                         " --omega " + args.omega + " --max-lag " + std::to_string(args.max_lag) +
                         " --measure " + args.measure +
                         (args.no_intercept ? " --no-intercept" : "") + " --seed " +
                         std::to_string(args.seed);
  doc.manifest.config_source = "inline";
  doc.manifest.base_seed = args.seed;
  doc.manifest.outputs = {args.output};
  doc.manifest.version = gmd::kVersion;
  doc.manifest.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  gmd::write_text_file(args.output, gmd::to_json(doc));
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  const auto t0 = Clock::now();
  gmd::StudyConfig config = gmd::parse_study_config_json(gmd::read_text_file(args.config_path));
  if (args.seed_override) config.seed = *args.seed_override;
  gmd::validate_config(config);

  gmd::StudyResult study = gmd::run_study(config, args.threads);

  std::filesystem::create_directories(args.output_dir);
  const std::string base = args.output_dir + "/simulation";
  gmd::RunManifest manifest;
  manifest.command = "simulate --config " + args.config_path + " --output-dir " +
                     args.output_dir +
                     (args.seed_override ? " --seed " + std::to_string(*args.seed_override) : "");
  manifest.config_source = args.config_path;
  manifest.base_seed = config.seed;
  manifest.outputs = {base + ".txt", base + ".csv", base + ".json"};
  manifest.version = gmd::kVersion;
  manifest.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  const std::string text = gmd::render_study_text(study);
  std::ostringstream text_file;
  text_file << text << "\nmanifest: gmdreg " << manifest.version << ", " << manifest.command
            << ", seed " << manifest.base_seed << ", wall " << manifest.wall_seconds << " s\n";
  gmd::write_text_file(base + ".txt", text_file.str());
  gmd::write_text_file(base + ".csv", gmd::render_study_csv(study));
  gmd::write_text_file(base + ".json", gmd::to_json(gmd::StudyDocument{study, manifest}));

  std::cout << text;
  std::cout << "\nwrote " << base << ".txt, .csv, .json\n";
  return 0;
}

int run_diagnose(const DiagnoseArgs& args) {
  const auto t0 = Clock::now();
  if (args.measure == "degenerate") {
    throw gmd::InvalidInput(
        "diagnose: psi and |f|^2_H quadrature are unsupported under the degenerate measure; "
        "use --measure lebesgue");
  }
  const gmd::IntegratingMeasure measure = parse_measure(args.measure);

  gmd::InnovationDist dist = [&] {
    if (args.law == "normal") return gmd::InnovationDist::normal(args.sigma);
    if (args.law == "laplace") return gmd::InnovationDist::laplace(args.scale);
    if (args.law == "logistic") return gmd::InnovationDist::logistic(args.scale);
    if (args.law == "mixture") {
      return gmd::InnovationDist::two_normal_mixture(args.epsilon, args.sigma_narrow,
                                                     args.sigma_wide);
    }
    throw gmd::InvalidInput("unknown law '" + args.law +
                            "' (expected normal, laplace, logistic, or mixture)");
  }();
  const gmd::DensitySpec dens = gmd::density_from_innovation(dist);

  gmd::AsymptoticReport report;
  report.density_label = dens.label;
  report.measure_label = gmd::measure_label(measure);
  report.f_norm_sq = gmd::density_l2_norm(dens, measure);

  if (args.tau_samples < 2) throw gmd::InvalidInput("--tau-samples must be >= 2");
  gmd::Rng rng(args.seed);
  report.tau = gmd::estimate_tau(dens, measure,
                                 gmd::sample_innovations(dist, args.tau_samples, rng));

  if (!args.data_path.empty()) {
    const gmd::LoadedCsv loaded = gmd::load_regression_csv(args.data_path, true);
    const gmd::CovarianceMatrix omega =
        gmd::estimate_covariance(loaded.data, parse_omega(args.omega, args.max_lag));
    const Eigen::MatrixXd Q = gmd::sym_inverse_sqrt(omega);
    const gmd::WeightMatrices weights = gmd::build_weights(loaded.data.X, Q);
    report.sigma = gmd::sigma_matrix_equal_density(weights, dens, measure);
    report.asym_cov = gmd::simplified_asym_cov(loaded.data.X, Q, dens, measure, report.tau);
  }

  std::printf("density      %s\n", report.density_label.c_str());
  std::printf("measure      %s\n", report.measure_label.c_str());
  std::printf("f_norm_sq    %.10g\n", report.f_norm_sq);
  std::printf("tau          %.10g (%zu samples)\n", report.tau, args.tau_samples);

  gmd::DiagnoseDocument doc;
  doc.report = report;
  doc.manifest.command =
      "diagnose --law " + args.law + " --measure " + args.measure +
      (args.data_path.empty() ? "" : " --data " + args.data_path + " --omega " + args.omega) +
      " --tau-samples " + std::to_string(args.tau_samples) + " --seed " +
      std::to_string(args.seed);
  doc.manifest.config_source = "inline";
  doc.manifest.base_seed = args.seed;
  doc.manifest.outputs = {args.output};
  doc.manifest.version = gmd::kVersion;
  doc.manifest.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  gmd::write_text_file(args.output, gmd::to_json(doc));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GMD regression estimators for dependent errors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("gmdreg ") + gmd::kVersion);

  EstimateArgs est;
  CLI::App* cmd_est = app.add_subcommand("estimate", "Fit estimators to CSV data");
  cmd_est->add_option("--data", est.data_path, "CSV file with a y column and regressors")
      ->required();
  cmd_est->add_option("--method", est.method, "ols, gls, gmd1, or gmd2");
  cmd_est->add_option("--omega", est.omega, "covariance: identity or toeplitz");
  cmd_est->add_option("--max-lag", est.max_lag, "toeplitz autocovariance lags");
  cmd_est->add_option("--measure", est.measure, "integrating measure: lebesgue or degenerate");
  cmd_est->add_flag("--no-intercept", est.no_intercept, "do not prepend an intercept column");
  cmd_est->add_option("--seed", est.seed, "seed for optimizer restarts");
  cmd_est->add_option("--output", est.output, "JSON result path");

  SimulateArgs sim;
  CLI::App* cmd_sim = app.add_subcommand("simulate", "Run a Monte Carlo study from a config");
  cmd_sim->add_option("--config", sim.config_path, "JSON study configuration")->required();
  cmd_sim->add_option("--output-dir", sim.output_dir, "directory for the output files");
  cmd_sim->add_option("--threads", sim.threads, "worker threads (0 = auto)");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      cmd_sim->add_option("--seed", seed_value, "override the config base seed");

  DiagnoseArgs diag;
  CLI::App* cmd_diag = app.add_subcommand("diagnose", "Asymptotic-variance diagnostics");
  cmd_diag->add_option("--law", diag.law, "normal, laplace, logistic, or mixture");
  cmd_diag->add_option("--sigma", diag.sigma, "normal sigma");
  cmd_diag->add_option("--scale", diag.scale, "laplace/logistic scale");
  cmd_diag->add_option("--epsilon", diag.epsilon, "mixture wide-component weight");
  cmd_diag->add_option("--sigma-narrow", diag.sigma_narrow, "mixture narrow sigma");
  cmd_diag->add_option("--sigma-wide", diag.sigma_wide, "mixture wide sigma");
  cmd_diag->add_option("--measure", diag.measure, "integrating measure: lebesgue");
  cmd_diag->add_option("--data", diag.data_path, "optional CSV; adds Sigma and asym_cov");
  cmd_diag->add_option("--omega", diag.omega, "covariance for --data: identity or toeplitz");
  cmd_diag->add_option("--max-lag", diag.max_lag, "toeplitz autocovariance lags");
  cmd_diag->add_option("--tau-samples", diag.tau_samples, "Monte Carlo samples for tau");
  cmd_diag->add_option("--seed", diag.seed, "seed for tau sampling");
  cmd_diag->add_option("--output", diag.output, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_est->parsed()) return run_estimate(est);
    if (cmd_sim->parsed()) {
      if (seed_opt->count() > 0) sim.seed_override = seed_value;
      return run_simulate(sim);
    }
    if (cmd_diag->parsed()) return run_diagnose(diag);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const gmd::InvalidInput& e) {
    std::cerr << "error (invalid input): " << e.what() << "\n";
    return 2;
  } catch (const gmd::NumericalFailure& e) {
    std::cerr << "error (numerical failure): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
