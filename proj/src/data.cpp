#include "tlkm/data.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tlkm/errors.hpp"
#include "tlkm/rng.hpp"

namespace tlkm {

SynthFunction synth_function_from_string(std::string_view name) {
  if (name == "f5") return SynthFunction::f5;
  if (name == "f6") return SynthFunction::f6;
  if (name == "f7") return SynthFunction::f7;
  throw std::invalid_argument("unknown synthetic function: " + std::string(name));
}

std::string to_string(SynthFunction which) {
  switch (which) {
    case SynthFunction::f5: return "f5";
    case SynthFunction::f6: return "f6";
    case SynthFunction::f7: return "f7";
  }
  throw std::invalid_argument("invalid synthetic function value");
}

int synth_dimension(SynthFunction which) {
  switch (which) {
    case SynthFunction::f5: return 5;
    case SynthFunction::f6: return 6;
    case SynthFunction::f7: return 7;
  }
  throw std::invalid_argument("invalid synthetic function value");
}

double synth_function(SynthFunction which, const Eigen::VectorXd& x) {
  if (x.size() != synth_dimension(which)) {
    throw std::invalid_argument("synth_function: point has wrong dimension");
  }
  switch (which) {
    case SynthFunction::f5: {
      const double s = x.sum() - 0.5;
      return std::exp(-4.0 * s * s);
    }
    case SynthFunction::f6: {
      const double s = (x.head(5).array() - 0.5).square().sum();
      return std::exp(-4.0 * s) + 2.0 * std::abs(x[0] - 0.5);
    }
    case SynthFunction::f7: {
      const double s_all = (x.array() - 0.5).square().sum();
      const double s_two = (x.head(2).array() - 0.3).square().sum();
      return std::exp(-s_all) + std::exp(-9.0 * s_two);
    }
  }
  throw std::invalid_argument("invalid synthetic function value");
}

Eigen::MatrixXd sample_unit_cube(Eigen::Index d, Eigen::Index n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw std::invalid_argument("sample_unit_cube: need d, n >= 1");
  Rng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      X(i, j) = uniform01(rng);
    }
  }
  return X;
}

Eigen::Index Dataset::train_count() const {
  if (split.empty()) return size();
  Eigen::Index count = 0;
  for (const SplitLabel label : split) {
    if (label == SplitLabel::train) ++count;
  }
  return count;
}

Eigen::Index Dataset::test_count() const { return size() - train_count(); }

Eigen::MatrixXd Dataset::split_X(SplitLabel label) const {
  if (split.empty()) {
    return label == SplitLabel::train ? X : Eigen::MatrixXd(0, dim());
  }
  const Eigen::Index count = label == SplitLabel::train ? train_count() : test_count();
  Eigen::MatrixXd out(count, dim());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (split[static_cast<std::size_t>(i)] == label) out.row(row++) = X.row(i);
  }
  return out;
}

Eigen::VectorXd Dataset::split_y(SplitLabel label) const {
  if (split.empty()) {
    return label == SplitLabel::train ? y : Eigen::VectorXd(0);
  }
  const Eigen::Index count = label == SplitLabel::train ? train_count() : test_count();
  Eigen::VectorXd out(count);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (split[static_cast<std::size_t>(i)] == label) out[row++] = y[i];
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  // Trailing whitespace is tolerated, anything else is a parse failure.
  while (end != nullptr && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || end == nullptr || *end != '\0') {
    throw io_error("csv: cannot parse cell at row " + std::to_string(row) + ", column " +
                   std::to_string(col + 1) + ": '" + cell + "'");
  }
  return value;
}

std::string trim(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  std::size_t last = text.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  return text.substr(first, last - first + 1);
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw io_error("csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(file, line)) throw io_error("csv: empty file '" + path + "'");
  std::vector<std::string> header = split_line(line);
  if (header.size() < 2) {
    throw io_error("csv: need at least one feature column and a target column");
  }

  Dataset dataset;
  dataset.name = path;
  for (auto& column : header) column = trim(column);
  dataset.target_name = header.back();
  dataset.feature_names.assign(header.begin(), header.end() - 1);
  const std::size_t n_cols = header.size();

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;  // header was row 1
  while (std::getline(file, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != n_cols) {
      throw io_error("csv: row " + std::to_string(row_number) + " has " +
                     std::to_string(cells.size()) + " cells, expected " +
                     std::to_string(n_cols));
    }
    std::vector<double> values(n_cols);
    bool finite = true;
    for (std::size_t c = 0; c < n_cols; ++c) {
      values[c] = parse_cell(cells[c], row_number, c);
      finite = finite && std::isfinite(values[c]);
    }
    if (!finite) {
      ++dataset.rejected_rows;
      continue;
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw io_error("csv: no usable data rows in '" + path + "'");

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(n_cols - 1);
  dataset.X.resize(n, d);
  dataset.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      dataset.X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    dataset.y[i] = rows[static_cast<std::size_t>(i)][n_cols - 1];
  }
  return dataset;
}

namespace {

void append_number(std::string& out, double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  out.append(buffer, result.ptr);
}

}  // namespace

void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw io_error("csv: cannot write '" + path + "'");
  std::string out;
  for (std::size_t j = 0; j < dataset.feature_names.size(); ++j) {
    out += dataset.feature_names[j];
    out += ',';
  }
  out += dataset.target_name.empty() ? "y" : dataset.target_name;
  out += '\n';
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    for (Eigen::Index j = 0; j < dataset.dim(); ++j) {
      append_number(out, dataset.X(i, j));
      out += ',';
    }
    append_number(out, dataset.y[i]);
    out += '\n';
  }
  file << out;
  if (!file) throw io_error("csv: write failed for '" + path + "'");
}

Dataset train_test_split(Dataset dataset, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw std::invalid_argument("train_test_split: fraction must lie in [0, 1]");
  }
  const Eigen::Index n = dataset.size();
  const auto n_train = static_cast<Eigen::Index>(
      std::lround(train_fraction * static_cast<double>(n)));
  std::vector<int> order = iota_indices(static_cast<int>(n));
  Rng rng(seed);
  shuffle_indices(order, rng);
  dataset.split.assign(static_cast<std::size_t>(n), SplitLabel::test);
  for (Eigen::Index i = 0; i < n_train; ++i) {
    dataset.split[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        SplitLabel::train;
  }
  return dataset;
}

Dataset standardize(Dataset dataset) {
  const Eigen::Index n = dataset.size();
  const Eigen::Index d = dataset.dim();
  if (n < 1) throw std::invalid_argument("standardize: empty dataset");

  std::vector<Eigen::Index> train_rows;
  train_rows.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dataset.split.empty() ||
        dataset.split[static_cast<std::size_t>(i)] == SplitLabel::train) {
      train_rows.push_back(i);
    }
  }
  if (train_rows.empty()) throw std::invalid_argument("standardize: no training rows");
  const double m = static_cast<double>(train_rows.size());

  Standardization params;
  params.feature_shift.resize(d);
  params.feature_scale.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const Eigen::Index i : train_rows) mean += dataset.X(i, j);
    mean /= m;
    double var = 0.0;
    for (const Eigen::Index i : train_rows) {
      const double delta = dataset.X(i, j) - mean;
      var += delta * delta;
    }
    var /= m;
    double scale = std::sqrt(var);
    if (!(scale > 0.0)) {
      scale = 1.0;
      params.constant_features.push_back(static_cast<int>(j));
    }
    params.feature_shift[j] = mean;
    params.feature_scale[j] = scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      dataset.X(i, j) = (dataset.X(i, j) - mean) / scale;
    }
  }

  double target_mean = 0.0;
  for (const Eigen::Index i : train_rows) target_mean += dataset.y[i];
  target_mean /= m;
  double target_var = 0.0;
  for (const Eigen::Index i : train_rows) {
    const double delta = dataset.y[i] - target_mean;
    target_var += delta * delta;
  }
  target_var /= m;
  double target_scale = std::sqrt(target_var);
  if (!(target_scale > 0.0)) target_scale = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    dataset.y[i] = (dataset.y[i] - target_mean) / target_scale;
  }
  params.target_shift = target_mean;
  params.target_scale = target_scale;
  dataset.standardization = std::move(params);
  return dataset;
}

Metrics metrics(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size() || y_true.size() < 1) {
    throw std::invalid_argument("metrics: vectors must have equal positive length");
  }
  const Eigen::VectorXd diff = y_pred - y_true;
  Metrics out;
  out.mse = diff.squaredNorm() / static_cast<double>(diff.size());
  out.max_abs_error = diff.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace tlkm
