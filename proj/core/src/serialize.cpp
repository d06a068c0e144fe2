#include "gmd/serialize.hpp"

#include <set>

#include "gmd/errors.hpp"
#include "json.hpp"

namespace gmd {

namespace {

using Json = nlohmann::ordered_json;

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j, const char* key) {
  if (!j.is_array()) throw InvalidInput(std::string(key) + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& item : j) {
    if (!item.is_number()) throw InvalidInput(std::string(key) + " must contain only numbers");
    v[i++] = item.get<double>();
  }
  return v;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return nullptr;
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const char* key) {
  if (j.is_null()) return {};
  if (!j.is_array()) throw InvalidInput(std::string(key) + " must be a matrix (array of arrays)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return {};
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index i = 0;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidInput(std::string(key) + " has ragged rows");
    }
    Eigen::Index c = 0;
    for (const auto& item : row) m(i, c++) = item.get<double>();
    ++i;
  }
  return m;
}

Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["config"] = m.config_source;
  j["seed"] = m.base_seed;
  j["outputs"] = m.outputs;
  j["version"] = m.version;
  j["wall_seconds"] = m.wall_seconds;
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config_source = j.at("config").get<std::string>();
  m.base_seed = j.at("seed").get<std::uint64_t>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.version = j.at("version").get<std::string>();
  m.wall_seconds = j.at("wall_seconds").get<double>();
  return m;
}

Json innovation_to_json(const InnovationDist& d) {
  Json j;
  switch (d.law()) {
    case InnovationLaw::Normal:
      j["law"] = "normal";
      j["sigma"] = d.param_a();
      break;
    case InnovationLaw::Laplace:
      j["law"] = "laplace";
      j["scale"] = d.param_a();
      break;
    case InnovationLaw::Logistic:
      j["law"] = "logistic";
      j["scale"] = d.param_a();
      break;
    case InnovationLaw::TwoNormalMixture:
      j["law"] = "mixture";
      j["epsilon"] = d.mix_prob();
      j["sigma_narrow"] = d.param_a();
      j["sigma_wide"] = d.param_b();
      break;
  }
  return j;
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const char* where) {
  std::string unknown;
  for (const auto& item : j.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      if (!unknown.empty()) unknown += ", ";
      unknown += item.key();
    }
  }
  if (!unknown.empty()) {
    throw InvalidInput(std::string(where) + ": unknown key(s): " + unknown);
  }
}

double require_number(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string(key) + " is required");
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidInput(std::string(key) + " must be a number");
  return v.get<double>();
}

std::int64_t require_integer(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string(key) + " is required");
  const auto& v = j.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw InvalidInput(std::string(key) + " must be an integer");
  }
  return v.get<std::int64_t>();
}

InnovationDist innovation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("law") || !j.at("law").is_string()) {
    throw InvalidInput("innovations entries must be objects with a 'law' string");
  }
  const std::string law = j.at("law").get<std::string>();
  if (law == "normal") {
    check_keys(j, {"law", "sigma"}, "innovation normal");
    return InnovationDist::normal(require_number(j, "sigma"));
  }
  if (law == "laplace") {
    check_keys(j, {"law", "scale"}, "innovation laplace");
    return InnovationDist::laplace(require_number(j, "scale"));
  }
  if (law == "logistic") {
    check_keys(j, {"law", "scale"}, "innovation logistic");
    return InnovationDist::logistic(require_number(j, "scale"));
  }
  if (law == "mixture") {
    check_keys(j, {"law", "epsilon", "sigma_narrow", "sigma_wide"}, "innovation mixture");
    return InnovationDist::two_normal_mixture(require_number(j, "epsilon"),
                                              require_number(j, "sigma_narrow"),
                                              require_number(j, "sigma_wide"));
  }
  throw InvalidInput("unknown innovation law '" + law +
                     "' (expected normal, laplace, logistic, or mixture)");
}

std::string covariance_mode_name(const CovarianceMode& mode) {
  if (std::holds_alternative<OracleCovMode>(mode)) return "oracle";
  if (std::holds_alternative<ToeplitzCovMode>(mode)) return "toeplitz";
  return "identity";
}

Json result_to_json(const EstimatorResult& r) {
  Json j;
  j["method"] = method_name(r.method);
  j["beta_hat"] = vector_to_json(r.beta_hat);
  j["objective_value"] = r.objective_value ? Json(*r.objective_value) : Json(nullptr);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  return j;
}

EstimatorResult result_from_json(const Json& j) {
  EstimatorResult r;
  r.method = method_from_name(j.at("method").get<std::string>());
  r.beta_hat = vector_from_json(j.at("beta_hat"), "beta_hat");
  if (!j.at("objective_value").is_null()) {
    r.objective_value = j.at("objective_value").get<double>();
  }
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  return r;
}

}  // namespace

std::string to_json(const EstimateDocument& doc) {
  Json j;
  j["manifest"] = manifest_to_json(doc.manifest);
  j["result"] = result_to_json(doc.result);
  return j.dump(2) + "\n";
}

EstimateDocument parse_estimate_json(const std::string& text) {
  const Json j = Json::parse(text);
  EstimateDocument doc;
  doc.manifest = manifest_from_json(j.at("manifest"));
  doc.result = result_from_json(j.at("result"));
  return doc;
}

std::string to_json(const DiagnoseDocument& doc) {
  Json j;
  j["manifest"] = manifest_to_json(doc.manifest);
  Json rep;
  rep["density"] = doc.report.density_label;
  rep["measure"] = doc.report.measure_label;
  rep["tau"] = doc.report.tau;
  rep["f_norm_sq"] = doc.report.f_norm_sq;
  rep["sigma"] = matrix_to_json(doc.report.sigma);
  rep["asym_cov"] = matrix_to_json(doc.report.asym_cov);
  j["report"] = std::move(rep);
  return j.dump(2) + "\n";
}

DiagnoseDocument parse_diagnose_json(const std::string& text) {
  const Json j = Json::parse(text);
  DiagnoseDocument doc;
  doc.manifest = manifest_from_json(j.at("manifest"));
  const Json& rep = j.at("report");
  doc.report.density_label = rep.at("density").get<std::string>();
  doc.report.measure_label = rep.at("measure").get<std::string>();
  doc.report.tau = rep.at("tau").get<double>();
  doc.report.f_norm_sq = rep.at("f_norm_sq").get<double>();
  doc.report.sigma = matrix_from_json(rep.at("sigma"), "sigma");
  doc.report.asym_cov = matrix_from_json(rep.at("asym_cov"), "asym_cov");
  return doc;
}

std::string study_config_to_json(const StudyConfig& config) {
  Json j;
  j["beta_true"] = vector_to_json(config.beta_true);
  j["n_values"] = config.n_values;
  j["replicates"] = config.replicates;
  Json innovations = Json::array();
  for (const auto& d : config.innovations) innovations.push_back(innovation_to_json(d));
  j["innovations"] = std::move(innovations);
  j["kappa"] = config.kappa;
  j["g0"] = config.g0;
  j["truncation"] = config.truncation;
  j["seed"] = config.seed;
  Json estimators = Json::array();
  for (Method m : config.estimators) estimators.push_back(method_name(m));
  j["estimators"] = std::move(estimators);
  j["covariance_mode"] = covariance_mode_name(config.covariance_mode);
  if (const auto* t = std::get_if<ToeplitzCovMode>(&config.covariance_mode)) {
    j["max_lag"] = t->max_lag;
  }
  j["design_mode"] =
      config.design_mode == DesignMode::FixedAcrossReplicates ? "fixed" : "redrawn";
  j["design_lo"] = config.design_lo;
  j["design_hi"] = config.design_hi;
  return j.dump(2) + "\n";
}

StudyConfig parse_study_config_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  check_keys(j,
             {"beta_true", "n_values", "replicates", "innovations", "kappa", "g0",
              "truncation", "seed", "estimators", "covariance_mode", "max_lag",
              "design_mode", "design_lo", "design_hi"},
             "config schema violation");

  StudyConfig config;
  if (j.contains("beta_true")) config.beta_true = vector_from_json(j.at("beta_true"), "beta_true");
  if (j.contains("n_values")) {
    if (!j.at("n_values").is_array()) throw InvalidInput("n_values must be an array");
    config.n_values.clear();
    for (const auto& item : j.at("n_values")) {
      if (!item.is_number_integer() && !item.is_number_unsigned()) {
        throw InvalidInput("n_values must contain integers");
      }
      const auto n = item.get<std::int64_t>();
      if (n < 1) throw InvalidInput("n_values must be positive");
      config.n_values.push_back(static_cast<std::size_t>(n));
    }
  }
  if (j.contains("replicates")) {
    const auto r = require_integer(j, "replicates");
    if (r < 1) throw InvalidInput("replicates must be >= 1");
    config.replicates = static_cast<std::size_t>(r);
  }
  if (j.contains("innovations")) {
    if (!j.at("innovations").is_array() || j.at("innovations").empty()) {
      throw InvalidInput("innovations must be a non-empty array");
    }
    config.innovations.clear();
    for (const auto& item : j.at("innovations")) {
      config.innovations.push_back(innovation_from_json(item));
    }
  }
  if (j.contains("kappa")) config.kappa = require_number(j, "kappa");
  if (j.contains("g0")) config.g0 = require_number(j, "g0");
  if (j.contains("truncation")) {
    config.truncation = static_cast<int>(require_integer(j, "truncation"));
  }
  if (j.contains("seed")) {
    const auto& v = j.at("seed");
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      throw InvalidInput("seed must be an integer");
    }
    config.seed = v.get<std::uint64_t>();
  }
  if (j.contains("estimators")) {
    if (!j.at("estimators").is_array() || j.at("estimators").empty()) {
      throw InvalidInput("estimators must be a non-empty array");
    }
    config.estimators.clear();
    for (const auto& item : j.at("estimators")) {
      if (!item.is_string()) throw InvalidInput("estimators must contain strings");
      config.estimators.push_back(method_from_name(item.get<std::string>()));
    }
  }
  int max_lag = 10;
  if (j.contains("max_lag")) {
    max_lag = static_cast<int>(require_integer(j, "max_lag"));
  }
  if (j.contains("covariance_mode")) {
    const auto& v = j.at("covariance_mode");
    if (!v.is_string()) throw InvalidInput("covariance_mode must be a string");
    const std::string mode = v.get<std::string>();
    if (mode == "oracle") {
      config.covariance_mode = OracleCovMode{};
    } else if (mode == "toeplitz") {
      config.covariance_mode = ToeplitzCovMode{max_lag};
    } else if (mode == "identity") {
      config.covariance_mode = IdentityCovMode{};
    } else {
      throw InvalidInput("covariance_mode must be oracle, toeplitz, or identity");
    }
  }
  if (j.contains("max_lag") && !std::holds_alternative<ToeplitzCovMode>(config.covariance_mode)) {
    throw InvalidInput("max_lag requires covariance_mode = toeplitz");
  }
  if (j.contains("design_mode")) {
    const auto& v = j.at("design_mode");
    if (!v.is_string()) throw InvalidInput("design_mode must be a string");
    const std::string mode = v.get<std::string>();
    if (mode == "fixed") {
      config.design_mode = DesignMode::FixedAcrossReplicates;
    } else if (mode == "redrawn") {
      config.design_mode = DesignMode::RedrawnPerReplicate;
    } else {
      throw InvalidInput("design_mode must be fixed or redrawn");
    }
  }
  if (j.contains("design_lo")) config.design_lo = require_number(j, "design_lo");
  if (j.contains("design_hi")) config.design_hi = require_number(j, "design_hi");
  return config;
}

namespace {

Json cell_to_json(const SummaryTable& cell) {
  Json j;
  j["innovation"] = cell.innovation_label;
  j["n"] = cell.n;
  j["replicates_requested"] = cell.replicates_requested;
  j["replicates_used"] = cell.replicates_used;
  j["base_seed"] = cell.base_seed;
  j["beta_true"] = vector_to_json(cell.beta_true);
  Json estimates = Json::array();
  for (std::size_t e = 0; e < cell.estimators.size(); ++e) {
    Json one;
    one["estimator"] = method_name(cell.estimators[e]);
    Json bias = Json::array(), se = Json::array(), mse = Json::array();
    for (const auto& stat : cell.stats[e]) {
      bias.push_back(stat.bias);
      se.push_back(stat.se);
      mse.push_back(stat.mse);
    }
    one["bias"] = std::move(bias);
    one["se"] = std::move(se);
    one["mse"] = std::move(mse);
    estimates.push_back(std::move(one));
  }
  j["estimates"] = std::move(estimates);
  return j;
}

SummaryTable cell_from_json(const Json& j) {
  SummaryTable cell;
  cell.innovation_label = j.at("innovation").get<std::string>();
  cell.n = j.at("n").get<std::size_t>();
  cell.replicates_requested = j.at("replicates_requested").get<std::size_t>();
  cell.replicates_used = j.at("replicates_used").get<std::size_t>();
  cell.base_seed = j.at("base_seed").get<std::uint64_t>();
  cell.beta_true = vector_from_json(j.at("beta_true"), "beta_true");
  for (const auto& one : j.at("estimates")) {
    cell.estimators.push_back(method_from_name(one.at("estimator").get<std::string>()));
    std::vector<CoefficientSummary> stats;
    const auto& bias = one.at("bias");
    const auto& se = one.at("se");
    const auto& mse = one.at("mse");
    if (bias.size() != se.size() || bias.size() != mse.size()) {
      throw InvalidInput("cell estimate arrays have mismatched lengths");
    }
    for (std::size_t k = 0; k < bias.size(); ++k) {
      stats.push_back({bias[k].get<double>(), se[k].get<double>(), mse[k].get<double>()});
    }
    cell.stats.push_back(std::move(stats));
  }
  return cell;
}

}  // namespace

std::string to_json(const StudyDocument& doc) {
  Json j;
  j["manifest"] = manifest_to_json(doc.manifest);
  j["config"] = Json::parse(study_config_to_json(doc.study.config));
  Json cells = Json::array();
  for (const auto& cell : doc.study.cells) cells.push_back(cell_to_json(cell));
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

StudyDocument parse_study_json(const std::string& text) {
  const Json j = Json::parse(text);
  StudyDocument doc;
  doc.manifest = manifest_from_json(j.at("manifest"));
  doc.study.config = parse_study_config_json(j.at("config").dump());
  for (const auto& cell : j.at("cells")) doc.study.cells.push_back(cell_from_json(cell));
  return doc;
}

}  // namespace gmd
