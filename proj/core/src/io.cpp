#include "gmd/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "gmd/errors.hpp"

namespace gmd {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

LoadedCsv load_regression_csv(const std::string& path, bool add_intercept) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open CSV file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("CSV file '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);

  Eigen::Index y_col = -1;
  std::vector<std::string> x_names;
  std::vector<Eigen::Index> x_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "y") {
      if (y_col >= 0) throw InvalidInput("CSV has more than one 'y' column");
      y_col = static_cast<Eigen::Index>(c);
    } else {
      if (header[c].empty()) {
        throw InvalidInput("CSV header has an empty column name at position " +
                           std::to_string(c + 1));
      }
      x_names.push_back(header[c]);
      x_cols.push_back(static_cast<Eigen::Index>(c));
    }
  }
  if (y_col < 0) throw InvalidInput("CSV header must contain a column named 'y'");
  if (x_cols.empty()) throw InvalidInput("CSV must contain at least one regressor column");

  std::vector<std::vector<double>> rows;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++data_row;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw InvalidInput("row " + std::to_string(data_row) + ": expected " +
                         std::to_string(header.size()) + " fields, found " +
                         std::to_string(fields.size()));
    }
    std::vector<double> vals(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      try {
        std::size_t used = 0;
        vals[c] = std::stod(fields[c], &used);
        if (used != fields[c].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw InvalidInput("row " + std::to_string(data_row) + ", column '" + header[c] +
                           "': cannot parse '" + fields[c] + "' as a number");
      }
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw InvalidInput("CSV file '" + path + "' has no data rows");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p_file = static_cast<Eigen::Index>(x_cols.size());
  const Eigen::Index p = p_file + (add_intercept ? 1 : 0);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(y_col)];
    Eigen::Index j = 0;
    if (add_intercept) X(i, j++) = 1.0;
    for (Eigen::Index c = 0; c < p_file; ++c) {
      X(i, j++) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(x_cols[c])];
    }
  }

  LoadedCsv out{make_regression_data(std::move(X), std::move(y)), {}};
  if (add_intercept) out.column_names.push_back("intercept");
  out.column_names.insert(out.column_names.end(), x_names.begin(), x_names.end());
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write file '" + path + "'");
  out << content;
  if (!out) throw InvalidInput("write failed for '" + path + "'");
}

}  // namespace gmd
