#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tlkm/cv.hpp"
#include "tlkm/kernels.hpp"
#include "tlkm/layer.hpp"

namespace tlkm {

enum class LayerInit { identity, scaled_identity, loaded };

LayerInit layer_init_from_string(std::string_view name);
std::string to_string(LayerInit init);

struct OptimConfig {
  double learning_rate = 5e-3;
  int batch_size = 64;
  int max_epochs = 25;
  // 0 resolves to batch_size, i.e. leave-one-out.
  int k_folds = 0;
  double lambda = 1e-5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Stop after this many epochs without a relative improvement of the best
  // accumulated epoch loss by at least improvement_tol.
  int patience = 3;
  double improvement_tol = 1e-4;
  std::uint64_t seed = 0;
  LayerInit init = LayerInit::identity;
  double init_scale = 1.0;  // scale for scaled_identity
  // Number of layer rows b; 0 resolves to the data dimension d.
  int layer_rows = 0;

  int resolved_k(int) const;
};

struct EpochRecord {
  double loss = 0.0;     // accumulated mini-batch losses of the epoch
  double seconds = 0.0;  // wall time, excluded from determinism comparisons
};

struct OptimTrace {
  std::vector<EpochRecord> epochs;
  int best_epoch = -1;  // index into epochs, -1 when none ran
  std::string stop_reason;  // "max_epochs" | "patience" | "no_epochs"
};

// Adam moment estimates; step count t drives the bias correction.
struct AdamState {
  Eigen::MatrixXd m;
  Eigen::MatrixXd v;
  long t = 0;

  static AdamState zero(Eigen::Index rows, Eigen::Index cols);
};

// One bias-corrected Adam update applied in place; deterministic.
void adam_step(AdamState& state, Eigen::MatrixXd& parameters,
               const Eigen::MatrixXd& grad, const OptimConfig& config);

// Mini-batch optimization of the first layer on the cross-validation loss:
// per epoch the training set is reshuffled, full batches are visited in
// order (the remainder is dropped and re-enters after the next reshuffle),
// each batch draws a fresh fold plan from the run generator, and the layer
// receives an Adam update from the analytic loss gradient. Stops at
// max_epochs or when patience runs out and returns the final iterate; the
// trace records which epoch had the lowest accumulated loss.
std::pair<FirstLayer, OptimTrace> optimize_first_layer(
    const KernelSpec& spec, const Eigen::MatrixXd& X_train,
    const Eigen::VectorXd& y_train, const OptimConfig& config,
    const FirstLayer* initial = nullptr);

}  // namespace tlkm
