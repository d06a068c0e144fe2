#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmd/regression.hpp"

namespace gmd {

// Reproducibility record attached to every emitted file. Wall time and
// output paths appear only in JSON/text outputs, never in the byte-stable
// CSV comment lines.
struct RunManifest {
  std::string command;        // subcommand plus normalized flags
  std::string config_source;  // config file path, or "inline"
  std::uint64_t base_seed = 0;
  std::vector<std::string> outputs;
  std::string version;
  double wall_seconds = 0.0;
};

struct LoadedCsv {
  RegressionData data;
  std::vector<std::string> column_names;  // regressor names, intercept first if added
};

// Header row with a column named y; every other column is a regressor, kept
// in file order. An intercept column of ones is prepended unless
// add_intercept is false. Parse errors cite the 1-based data row and the
// column name.
LoadedCsv load_regression_csv(const std::string& path, bool add_intercept);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gmd
