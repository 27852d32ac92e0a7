#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tlkm {

enum class SynthFunction { f5, f6, f7 };

SynthFunction synth_function_from_string(std::string_view name);
std::string to_string(SynthFunction which);
int synth_dimension(SynthFunction which);  // 5, 6, 7

// Synthetic targets on the unit cube:
//   f5(x) = exp(-4 (sum_j x_j - 0.5)^2)                           on R^5
//   f6(x) = exp(-4 sum_{j<=5} (x_j - 0.5)^2) + 2 |x_1 - 0.5|      on R^6
//   f7(x) = exp(-sum_j (x_j - 0.5)^2) + exp(-9 sum_{j<=2} (x_j - 0.3)^2) on R^7
// f5 varies only along (1,...,1) and is invariant orthogonal to it.
double synth_function(SynthFunction which, const Eigen::VectorXd& x);

// N i.i.d. uniform points on [0, 1]^d; bit-identical for a fixed seed.
Eigen::MatrixXd sample_unit_cube(Eigen::Index d, Eigen::Index n, std::uint64_t seed);

// Per-feature z-score parameters computed on the training split.
struct Standardization {
  Eigen::VectorXd feature_shift;
  Eigen::VectorXd feature_scale;
  double target_shift = 0.0;
  double target_scale = 1.0;
  std::vector<int> constant_features;  // scale pinned to 1 for these
};

enum class SplitLabel : std::uint8_t { train = 0, test = 1 };

struct Dataset {
  std::string name;
  std::vector<std::string> feature_names;
  std::string target_name;
  Eigen::MatrixXd X;  // N x d
  Eigen::VectorXd y;  // N
  std::vector<SplitLabel> split;  // empty means everything is train
  std::optional<Standardization> standardization;
  int rejected_rows = 0;  // rows dropped at ingestion for non-finite values

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
  Eigen::Index train_count() const;
  Eigen::Index test_count() const;
  // Materialized copies of one split (train when label == train).
  Eigen::MatrixXd split_X(SplitLabel label) const;
  Eigen::VectorXd split_y(SplitLabel label) const;
};

// CSV with a header row, comma separated, decimal point, last column is the
// target. Rows containing non-finite values are dropped and counted; cells
// that fail to parse raise tlkm::io_error naming the row and column.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& dataset, const std::string& path);

// Seeded permutation prefix: the first round(fraction * N) entries of the
// shuffled row order become the training split.
Dataset train_test_split(Dataset dataset, double train_fraction, std::uint64_t seed);

// Z-scores features and target with parameters computed on the training
// split only. Constant features keep scale 1 and are flagged. Applying the
// operation twice is idempotent up to roundoff.
Dataset standardize(Dataset dataset);

struct Metrics {
  double mse = 0.0;
  double max_abs_error = 0.0;
};

Metrics metrics(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

}  // namespace tlkm
