#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "tlkm/kernels.hpp"
#include "tlkm/layer.hpp"

namespace tlkm {

enum class GreedyCriterion { p_greedy, f_greedy, f_over_p_greedy };

GreedyCriterion greedy_criterion_from_string(std::string_view name);
std::string to_string(GreedyCriterion criterion);

struct GreedyConfig {
  GreedyCriterion criterion = GreedyCriterion::f_greedy;
  int max_centers = 100;
  // Stop once the selection indicator drops to this value or below.
  double residual_tolerance = 0.0;
  // Candidates whose squared power falls below floor * k(x, x) become
  // permanently ineligible; guards the 1/sqrt(p) in the Newton update.
  double power_stability_floor = 1e-13;
  // Diagonal shift of the training Gram (ridge-stabilized coefficients).
  // Prediction always uses the plain kernel expansion.
  double lambda = 0.0;
};

struct GreedyStep {
  int selected_index = -1;
  double indicator = 0.0;     // criterion value of the selected candidate
  double max_residual = 0.0;  // max |r| over eligible candidates at selection
  double max_power = 0.0;     // max P over eligible candidates at selection
};

// Sparse kernel model: selected centers, the lower-triangular Newton basis
// data L over the centers (L L^T is the regularized center Gram in selection
// order), and the expansion coefficients alpha of s(x) = sum a_i k(x, c_i).
struct GreedyModel {
  std::vector<int> center_indices;      // into the training set, pairwise distinct
  Eigen::MatrixXd centers;              // n x d, original input space
  Eigen::MatrixXd newton_triangle;      // n x n lower triangular
  Eigen::VectorXd newton_coefficients;  // c, the Newton-basis coefficients
  Eigen::VectorXd coefficients;         // alpha = L^-T c
  std::vector<GreedyStep> trace;
  double final_max_residual = 0.0;  // max |r| over eligible candidates after the last step
  std::string stop_reason;          // "max_centers" | "tolerance" | "exhausted"

  int size() const { return static_cast<int>(center_indices.size()); }
};

// Greedy center selection over the fixed candidate set X with targets f,
// using the (optionally two-layer) kernel; layer == nullptr means the
// identity map. Ties in the argmax break toward the lowest candidate index.
// Throws std::invalid_argument on malformed inputs and tlkm::numerical_error
// when the recursion degenerates (all candidates below the stability floor
// at the first step, or non-finite intermediates).
GreedyModel fit_greedy(const KernelSpec& spec, const FirstLayer* layer,
                       const Eigen::MatrixXd& X, const Eigen::VectorXd& f,
                       const GreedyConfig& config);

// Direct expansion s(x) = sum alpha_i k(x, center_i).
Eigen::VectorXd predict(const GreedyModel& model, const KernelSpec& spec,
                        const FirstLayer* layer, const Eigen::MatrixXd& X_eval);

// Newton basis values v_j(x) at the evaluation points, an M x n matrix;
// prediction along this path is E * newton_coefficients and power values
// are k(x,x) - sum_j v_j(x)^2. Serves as the second evaluation route.
Eigen::MatrixXd newton_basis_values(const GreedyModel& model, const KernelSpec& spec,
                                    const FirstLayer* layer,
                                    const Eigen::MatrixXd& X_eval);

// Power function values P(x) >= 0; squared power is clamped at zero when
// roundoff drives it negative (observed magnitudes stay within ~1e-12).
// An empty model yields sqrt(k(x, x)).
Eigen::VectorXd power_values(const GreedyModel& model, const KernelSpec& spec,
                             const FirstLayer* layer, const Eigen::MatrixXd& X_eval);

// Largest distance from any candidate to its nearest center; the discrete
// surrogate of the fill distance over the candidate cloud.
double fill_distance(const Eigen::MatrixXd& candidates, const Eigen::MatrixXd& centers);

// Error-decay bookkeeping for growing expansion sizes: row n reports the
// n-center prefix model evaluated via the Newton path.
struct DecayRow {
  int n_centers = 0;
  double train_max_residual = 0.0;
  double test_mse = 0.0;
  double test_max_error = 0.0;
};

std::vector<DecayRow> compute_decay(const GreedyModel& model, const KernelSpec& spec,
                                    const FirstLayer* layer,
                                    const Eigen::MatrixXd& X_test,
                                    const Eigen::VectorXd& y_test);

}  // namespace tlkm
