#pragma once

#include <string>

#include "gmd/asymptotics.hpp"
#include "gmd/estimators.hpp"
#include "gmd/io.hpp"
#include "gmd/montecarlo.hpp"

namespace gmd {

// JSON documents emitted by the CLI. Each to_json/parse pair round-trips
// exactly: parsing an emitted string and re-serializing reproduces the
// original bytes.

struct EstimateDocument {
  EstimatorResult result;
  RunManifest manifest;
};
std::string to_json(const EstimateDocument& doc);
EstimateDocument parse_estimate_json(const std::string& text);

struct DiagnoseDocument {
  AsymptoticReport report;
  RunManifest manifest;
};
std::string to_json(const DiagnoseDocument& doc);
DiagnoseDocument parse_diagnose_json(const std::string& text);

struct StudyDocument {
  StudyResult study;  // wall_seconds lives in the manifest, not the cells
  RunManifest manifest;
};
std::string to_json(const StudyDocument& doc);
StudyDocument parse_study_json(const std::string& text);

// Simulation config schema (all keys optional, unknown keys rejected):
//   beta_true: array of numbers
//   n_values: array of integers
//   replicates: integer
//   innovations: array of {law: normal|laplace|logistic|mixture, ...}
//     normal/laplace/logistic take sigma/scale; mixture takes epsilon,
//     sigma_narrow, sigma_wide
//   kappa: number            truncation: integer
//   seed: integer             estimators: array of ols|gls|gmd1|gmd2
//   covariance_mode: oracle|toeplitz|identity   max_lag: integer
//   design_mode: fixed|redrawn                  design_lo, design_hi: numbers
StudyConfig parse_study_config_json(const std::string& text);
std::string study_config_to_json(const StudyConfig& config);

}  // namespace gmd
