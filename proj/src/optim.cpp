#include "tlkm/optim.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tlkm/errors.hpp"
#include "tlkm/rng.hpp"

namespace tlkm {

LayerInit layer_init_from_string(std::string_view name) {
  if (name == "identity") return LayerInit::identity;
  if (name == "scaled_identity") return LayerInit::scaled_identity;
  if (name == "loaded") return LayerInit::loaded;
  throw std::invalid_argument("unknown layer init: " + std::string(name));
}

std::string to_string(LayerInit init) {
  switch (init) {
    case LayerInit::identity: return "identity";
    case LayerInit::scaled_identity: return "scaled_identity";
    case LayerInit::loaded: return "loaded";
  }
  throw std::invalid_argument("invalid layer init value");
}

int OptimConfig::resolved_k(int batch) const { return k_folds > 0 ? k_folds : batch; }

AdamState AdamState::zero(Eigen::Index rows, Eigen::Index cols) {
  return AdamState{Eigen::MatrixXd::Zero(rows, cols), Eigen::MatrixXd::Zero(rows, cols), 0};
}

void adam_step(AdamState& state, Eigen::MatrixXd& parameters,
               const Eigen::MatrixXd& grad, const OptimConfig& config) {
  if (grad.rows() != parameters.rows() || grad.cols() != parameters.cols() ||
      state.m.rows() != parameters.rows() || state.m.cols() != parameters.cols()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.t += 1;
  state.m = config.adam_beta1 * state.m + (1.0 - config.adam_beta1) * grad;
  state.v = config.adam_beta2 * state.v + (1.0 - config.adam_beta2) * grad.cwiseAbs2();
  const double m_corr = 1.0 - std::pow(config.adam_beta1, static_cast<double>(state.t));
  const double v_corr = 1.0 - std::pow(config.adam_beta2, static_cast<double>(state.t));
  parameters.array() -= config.learning_rate * (state.m.array() / m_corr) /
                        ((state.v.array() / v_corr).sqrt() + config.adam_eps);
}

namespace {

void check_config(const OptimConfig& config, Eigen::Index n_train, Eigen::Index d) {
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("optimize: learning_rate must be positive");
  }
  if (config.batch_size < 2 || n_train < config.batch_size) {
    throw std::invalid_argument("optimize: training set smaller than one batch");
  }
  const int k = config.resolved_k(config.batch_size);
  if (k <= 1 || k > config.batch_size) {
    throw std::invalid_argument("optimize: need 1 < k_folds <= batch_size");
  }
  if (config.lambda < 0.0) throw std::invalid_argument("optimize: lambda must be >= 0");
  if (config.patience < 1) throw std::invalid_argument("optimize: patience must be >= 1");
  if (config.max_epochs < 0) throw std::invalid_argument("optimize: max_epochs must be >= 0");
  const int b = config.layer_rows > 0 ? config.layer_rows : static_cast<int>(d);
  if (b < 1 || b > static_cast<int>(d)) {
    throw std::invalid_argument("optimize: layer rows must satisfy 1 <= b <= d");
  }
}

FirstLayer initial_layer(const OptimConfig& config, Eigen::Index d,
                         const FirstLayer* loaded) {
  const Eigen::Index b = config.layer_rows > 0 ? config.layer_rows : d;
  switch (config.init) {
    case LayerInit::identity:
      return FirstLayer::scaled_identity(b, d, 1.0);
    case LayerInit::scaled_identity:
      return FirstLayer::scaled_identity(b, d, config.init_scale);
    case LayerInit::loaded:
      if (loaded == nullptr) {
        throw std::invalid_argument("optimize: init=loaded requires an initial layer");
      }
      validate_layer(*loaded);
      if (loaded->cols() != d) {
        throw std::invalid_argument("optimize: loaded layer does not match data dimension");
      }
      return *loaded;
  }
  throw std::invalid_argument("optimize: invalid init value");
}

}  // namespace

std::pair<FirstLayer, OptimTrace> optimize_first_layer(
    const KernelSpec& spec, const Eigen::MatrixXd& X_train,
    const Eigen::VectorXd& y_train, const OptimConfig& config,
    const FirstLayer* initial) {
  if (X_train.rows() != y_train.size()) {
    throw std::invalid_argument("optimize: targets do not match training points");
  }
  if (!X_train.allFinite() || !y_train.allFinite()) {
    throw std::invalid_argument("optimize: non-finite training data");
  }
  const Eigen::Index n_train = X_train.rows();
  const Eigen::Index d = X_train.cols();
  check_config(config, n_train, d);

  FirstLayer layer = initial_layer(config, d, initial);
  OptimTrace trace;
  if (config.max_epochs == 0) {
    trace.stop_reason = "no_epochs";
    return {layer, trace};
  }

  const int batch = config.batch_size;
  const int k = config.resolved_k(batch);
  const int batches_per_epoch = static_cast<int>(n_train) / batch;

  Rng rng(config.seed);
  AdamState adam = AdamState::zero(layer.rows(), layer.cols());
  std::vector<int> order = iota_indices(static_cast<int>(n_train));
  Eigen::MatrixXd X_batch(batch, d);
  Eigen::VectorXd f_batch(batch);

  double best_loss = std::numeric_limits<double>::infinity();
  int stale_epochs = 0;
  trace.stop_reason = "max_epochs";

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    shuffle_indices(order, rng);
    double epoch_loss = 0.0;

    for (int ib = 0; ib < batches_per_epoch; ++ib) {
      for (int r = 0; r < batch; ++r) {
        const int src = order[static_cast<std::size_t>(ib * batch + r)];
        X_batch.row(r) = X_train.row(src);
        f_batch[r] = y_train[src];
      }
      FoldPlan plan = make_folds(batch, k, rng);
      auto [value, grad] = cv_loss_grad(spec, layer, X_batch, f_batch, plan, config.lambda);
      if (!std::isfinite(value.loss)) {
        throw numerical_error("optimize: non-finite loss at epoch " + std::to_string(epoch) +
                              ", batch " + std::to_string(ib));
      }
      adam_step(adam, layer.matrix, grad, config);
      epoch_loss += value.loss;
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    trace.epochs.push_back({epoch_loss, seconds});

    if (!std::isfinite(epoch_loss)) {
      throw numerical_error("optimize: non-finite accumulated loss at epoch " +
                            std::to_string(epoch));
    }

    const bool improved =
        best_loss == std::numeric_limits<double>::infinity()
            ? true
            : (best_loss - epoch_loss) > config.improvement_tol * std::abs(best_loss);
    if (epoch_loss < best_loss) {
      best_loss = epoch_loss;
      trace.best_epoch = epoch;
    }
    if (improved) {
      stale_epochs = 0;
    } else {
      ++stale_epochs;
      if (stale_epochs >= config.patience) {
        trace.stop_reason = "patience";
        break;
      }
    }
  }

  // The final iterate is returned. Epoch losses are noisy estimates (each
  // epoch sees different shuffled batches), so selecting the argmin epoch
  // systematically favors lucky batches over better layers; the trace keeps
  // the best epoch index for reference.
  layer.provenance = LayerProvenance::optimized;
  return {layer, trace};
}

}  // namespace tlkm
