#include "tlkm/greedy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tlkm/errors.hpp"

namespace tlkm {

GreedyCriterion greedy_criterion_from_string(std::string_view name) {
  if (name == "p" || name == "p_greedy") return GreedyCriterion::p_greedy;
  if (name == "f" || name == "f_greedy") return GreedyCriterion::f_greedy;
  if (name == "f_over_p" || name == "f_over_p_greedy") return GreedyCriterion::f_over_p_greedy;
  throw std::invalid_argument("unknown greedy criterion: " + std::string(name));
}

std::string to_string(GreedyCriterion criterion) {
  switch (criterion) {
    case GreedyCriterion::p_greedy: return "p_greedy";
    case GreedyCriterion::f_greedy: return "f_greedy";
    case GreedyCriterion::f_over_p_greedy: return "f_over_p_greedy";
  }
  throw std::invalid_argument("invalid greedy criterion value");
}

namespace {

Eigen::MatrixXd transform_points(const FirstLayer* layer, const Eigen::MatrixXd& X) {
  if (layer == nullptr) {
    if (!X.allFinite()) throw std::invalid_argument("greedy: non-finite points");
    return X;
  }
  return apply_layer(*layer, X);
}

void check_config(const GreedyConfig& config) {
  if (config.max_centers < 1) {
    throw std::invalid_argument("greedy: max_centers must be >= 1");
  }
  if (config.residual_tolerance < 0.0 || config.power_stability_floor < 0.0 ||
      config.lambda < 0.0) {
    throw std::invalid_argument("greedy: thresholds must be nonnegative");
  }
}

}  // namespace

GreedyModel fit_greedy(const KernelSpec& spec, const FirstLayer* layer,
                       const Eigen::MatrixXd& X, const Eigen::VectorXd& f,
                       const GreedyConfig& config) {
  check_config(config);
  if (X.rows() < 1) throw std::invalid_argument("greedy: empty candidate set");
  if (X.rows() != f.size()) throw std::invalid_argument("greedy: targets do not match candidates");
  if (!f.allFinite()) throw std::invalid_argument("greedy: non-finite targets");

  const Eigen::MatrixXd Z = transform_points(layer, X);
  const Eigen::Index n_cand = Z.rows();
  const int n_max = std::min<int>(config.max_centers, static_cast<int>(n_cand));

  // kdiag is the plain kernel diagonal (1 for these families); the Newton
  // recursion itself runs on the lambda-shifted training Gram.
  const double kdiag = eval_phi(spec, 0.0);
  Eigen::VectorXd power2 = Eigen::VectorXd::Constant(n_cand, kdiag + config.lambda);
  Eigen::VectorXd residual = f;
  std::vector<char> eligible(static_cast<std::size_t>(n_cand), 1);
  Eigen::MatrixXd basis(n_cand, n_max);  // v_j over all candidates, column per step

  GreedyModel model;
  model.center_indices.reserve(static_cast<std::size_t>(n_max));
  model.trace.reserve(static_cast<std::size_t>(n_max));
  Eigen::VectorXd newton_c(n_max);
  model.stop_reason = "max_centers";

  const double floor = config.power_stability_floor * kdiag;

  for (int step = 0; step < n_max; ++step) {
    int best = -1;
    double best_value = -1.0;
    double max_abs_res = 0.0;
    double max_power = 0.0;
    for (Eigen::Index i = 0; i < n_cand; ++i) {
      if (!eligible[static_cast<std::size_t>(i)]) continue;
      const double p = std::sqrt(std::max(power2[i], 0.0));
      const double ar = std::abs(residual[i]);
      if (ar > max_abs_res) max_abs_res = ar;
      if (p > max_power) max_power = p;
      double value = 0.0;
      switch (config.criterion) {
        case GreedyCriterion::p_greedy: value = p; break;
        case GreedyCriterion::f_greedy: value = ar; break;
        case GreedyCriterion::f_over_p_greedy: value = ar / p; break;
      }
      if (value > best_value) {
        best_value = value;
        best = static_cast<int>(i);
      }
    }

    if (best < 0) {
      if (step == 0) {
        throw numerical_error(
            "fit_greedy: no eligible candidate at the first step (degenerate kernel)");
      }
      model.stop_reason = "exhausted";
      break;
    }
    if (best_value <= config.residual_tolerance) {
      model.stop_reason = "tolerance";
      break;
    }

    const double sqrt_p = std::sqrt(power2[best]);
    // New Newton column on the shifted training kernel.
    Eigen::VectorXd column(n_cand);
    for (Eigen::Index i = 0; i < n_cand; ++i) {
      column[i] = eval_phi(spec, (Z.row(i) - Z.row(best)).norm());
    }
    column[best] += config.lambda;
    if (step > 0) {
      column.noalias() -= basis.leftCols(step) * basis.row(best).head(step).transpose();
    }
    column /= sqrt_p;

    const double coeff = residual[best] / sqrt_p;
    power2.array() -= column.array().square();
    residual.noalias() -= coeff * column;
    basis.col(step) = column;
    newton_c[step] = coeff;

    if (!std::isfinite(coeff) || !column.allFinite()) {
      throw numerical_error("fit_greedy: non-finite Newton update at step " +
                            std::to_string(step));
    }

    model.center_indices.push_back(best);
    model.trace.push_back({best, best_value, max_abs_res, max_power});
    eligible[static_cast<std::size_t>(best)] = 0;
    for (Eigen::Index i = 0; i < n_cand; ++i) {
      if (eligible[static_cast<std::size_t>(i)] && power2[i] < floor) {
        eligible[static_cast<std::size_t>(i)] = 0;
      }
    }
  }

  const int n = model.size();
  model.centers.resize(n, X.cols());
  model.newton_triangle = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    model.centers.row(i) = X.row(model.center_indices[static_cast<std::size_t>(i)]);
    model.newton_triangle.row(i) =
        basis.row(model.center_indices[static_cast<std::size_t>(i)]).head(n);
  }
  model.newton_coefficients = newton_c.head(n);
  model.coefficients = model.newton_triangle.transpose()
                           .triangularView<Eigen::Upper>()
                           .solve(model.newton_coefficients);

  double final_max = 0.0;
  for (Eigen::Index i = 0; i < n_cand; ++i) {
    if (eligible[static_cast<std::size_t>(i)]) {
      final_max = std::max(final_max, std::abs(residual[i]));
    }
  }
  model.final_max_residual = final_max;
  return model;
}

namespace {

void check_model_eval(const GreedyModel& model, const Eigen::MatrixXd& X_eval) {
  if (model.size() < 1) throw std::invalid_argument("greedy: empty model");
  if (X_eval.cols() != model.centers.cols()) {
    throw std::invalid_argument("greedy: evaluation dimension does not match centers");
  }
}

}  // namespace

Eigen::VectorXd predict(const GreedyModel& model, const KernelSpec& spec,
                        const FirstLayer* layer, const Eigen::MatrixXd& X_eval) {
  check_model_eval(model, X_eval);
  const Eigen::MatrixXd Ze = transform_points(layer, X_eval);
  const Eigen::MatrixXd Zc = transform_points(layer, model.centers);
  return gram_matrix(spec, Ze, Zc) * model.coefficients;
}

Eigen::MatrixXd newton_basis_values(const GreedyModel& model, const KernelSpec& spec,
                                    const FirstLayer* layer,
                                    const Eigen::MatrixXd& X_eval) {
  check_model_eval(model, X_eval);
  const Eigen::MatrixXd Ze = transform_points(layer, X_eval);
  const Eigen::MatrixXd Zc = transform_points(layer, model.centers);
  const Eigen::MatrixXd K_eval = gram_matrix(spec, Ze, Zc);  // M x n
  // Solve E L^T = K_eval row-wise: L E^T = K_eval^T.
  return model.newton_triangle.triangularView<Eigen::Lower>()
      .solve(K_eval.transpose())
      .transpose();
}

Eigen::VectorXd power_values(const GreedyModel& model, const KernelSpec& spec,
                             const FirstLayer* layer, const Eigen::MatrixXd& X_eval) {
  const double kdiag = eval_phi(spec, 0.0);
  if (model.size() == 0) {
    return Eigen::VectorXd::Constant(X_eval.rows(), std::sqrt(kdiag));
  }
  const Eigen::MatrixXd E = newton_basis_values(model, spec, layer, X_eval);
  Eigen::VectorXd p2 = Eigen::VectorXd::Constant(X_eval.rows(), kdiag);
  p2 -= E.rowwise().squaredNorm();
  return p2.cwiseMax(0.0).cwiseSqrt();
}

double fill_distance(const Eigen::MatrixXd& candidates, const Eigen::MatrixXd& centers) {
  if (candidates.rows() < 1 || centers.rows() < 1) {
    throw std::invalid_argument("fill_distance: empty point set");
  }
  if (candidates.cols() != centers.cols()) {
    throw std::invalid_argument("fill_distance: dimension mismatch");
  }
  double fill = 0.0;
  for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
      nearest = std::min(nearest, (candidates.row(i) - centers.row(j)).norm());
    }
    fill = std::max(fill, nearest);
  }
  return fill;
}

std::vector<DecayRow> compute_decay(const GreedyModel& model, const KernelSpec& spec,
                                    const FirstLayer* layer,
                                    const Eigen::MatrixXd& X_test,
                                    const Eigen::VectorXd& y_test) {
  const int n = model.size();
  std::vector<DecayRow> rows(static_cast<std::size_t>(n));
  const bool have_test = X_test.rows() > 0;
  if (have_test && X_test.rows() != y_test.size()) {
    throw std::invalid_argument("compute_decay: test targets do not match points");
  }

  Eigen::MatrixXd E;
  if (have_test) E = newton_basis_values(model, spec, layer, X_test);
  Eigen::VectorXd prediction = Eigen::VectorXd::Zero(have_test ? X_test.rows() : 0);

  for (int m = 0; m < n; ++m) {
    DecayRow& row = rows[static_cast<std::size_t>(m)];
    row.n_centers = m + 1;
    // trace[m + 1].max_residual is the residual state of the (m+1)-center
    // model, recorded when the next center was picked.
    row.train_max_residual = (m + 1 < n)
                                 ? model.trace[static_cast<std::size_t>(m + 1)].max_residual
                                 : model.final_max_residual;
    if (have_test) {
      prediction.noalias() += model.newton_coefficients[m] * E.col(m);
      const Eigen::VectorXd diff = prediction - y_test;
      row.test_mse = diff.squaredNorm() / static_cast<double>(diff.size());
      row.test_max_error = diff.cwiseAbs().maxCoeff();
    } else {
      row.test_mse = std::nan("");
      row.test_max_error = std::nan("");
    }
  }
  return rows;
}

}  // namespace tlkm
