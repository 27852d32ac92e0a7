#include "tlkm/cv.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tlkm/errors.hpp"

namespace tlkm {

FoldPlan make_folds(int n_batch, int k, Rng& rng) {
  if (n_batch < 2 || k <= 1 || k > n_batch) {
    throw std::invalid_argument("make_folds: need 1 < k <= n_batch");
  }
  std::vector<int> order = iota_indices(n_batch);
  shuffle_indices(order, rng);

  FoldPlan plan;
  plan.batch_size = n_batch;
  plan.k = k;
  plan.folds.resize(static_cast<std::size_t>(k));
  const int base = n_batch / k;
  const int remainder = n_batch % k;
  int pos = 0;
  for (int fold = 0; fold < k; ++fold) {
    const int size = base + (fold < remainder ? 1 : 0);
    auto& indices = plan.folds[static_cast<std::size_t>(fold)];
    indices.assign(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return plan;
}

namespace {

void check_batch(const FirstLayer& layer, const Eigen::MatrixXd& X,
                 const Eigen::VectorXd& f, const FoldPlan& plan, double lambda) {
  validate_layer(layer);
  if (X.cols() != layer.cols()) {
    throw std::invalid_argument("cv: batch dimension does not match layer");
  }
  if (X.rows() != f.size() || X.rows() != plan.batch_size) {
    throw std::invalid_argument("cv: batch, targets and fold plan sizes disagree");
  }
  if (plan.k <= 1 || plan.k > plan.batch_size) {
    throw std::invalid_argument("cv: fold plan has invalid k");
  }
  if (!X.allFinite() || !f.allFinite()) {
    throw std::invalid_argument("cv: non-finite batch data");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("cv: lambda must be finite and nonnegative");
  }
}

double condition_estimate(const Eigen::MatrixXd& K) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(K, Eigen::EigenvaluesOnly);
  if (eigs.info() != Eigen::Success) return std::nan("");
  const double lo = eigs.eigenvalues().cwiseAbs().minCoeff();
  const double hi = eigs.eigenvalues().cwiseAbs().maxCoeff();
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

// Shared state of the residual computation, kept so the gradient path can
// run the adjoint over the exact same intermediates.
struct EraWorkspace {
  Eigen::MatrixXd Z;          // transformed batch, n x b
  Eigen::MatrixXd R;          // pairwise transformed distances, n x n
  Eigen::MatrixXd K;          // regularized Gram, n x n
  Eigen::MatrixXd W;          // (K + lambda I)^-1
  Eigen::VectorXd c;          // W f
  Eigen::VectorXd residuals;  // complete error vector e
  std::vector<Eigen::VectorXd> fold_adjoints;  // mu_V per fold (gradient path)
};

EraWorkspace era_core(const KernelSpec& spec, const FirstLayer& layer,
                      const Eigen::MatrixXd& X, const Eigen::VectorXd& f,
                      const FoldPlan& plan, double lambda, bool want_adjoints) {
  check_batch(layer, X, f, plan, lambda);
  const Eigen::Index n = X.rows();

  EraWorkspace ws;
  ws.Z = apply_layer(layer, X);
  ws.R.resize(n, n);
  ws.K.resize(n, n);
  ws.R.diagonal().setZero();
  ws.K.diagonal().setConstant(1.0 + lambda);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = (ws.Z.row(i) - ws.Z.row(j)).norm();
      const double v = eval_phi(spec, r);
      ws.R(i, j) = r;
      ws.R(j, i) = r;
      ws.K(i, j) = v;
      ws.K(j, i) = v;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(ws.K);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("era_residuals: regularized Gram matrix is not positive definite",
                          condition_estimate(ws.K));
  }
  ws.W = llt.solve(Eigen::MatrixXd::Identity(n, n));
  ws.c = llt.solve(f);

  ws.residuals.resize(n);
  if (want_adjoints) ws.fold_adjoints.resize(plan.folds.size());

  for (std::size_t fi = 0; fi < plan.folds.size(); ++fi) {
    const auto& fold = plan.folds[fi];
    const Eigen::Index p = static_cast<Eigen::Index>(fold.size());
    if (p == 1) {
      // Classical diagonal formula.
      const int i = fold[0];
      const double wii = ws.W(i, i);
      const double e = ws.c[i] / wii;
      ws.residuals[i] = e;
      if (want_adjoints) {
        ws.fold_adjoints[fi] = Eigen::VectorXd::Constant(1, 2.0 * e / wii);
      }
      continue;
    }
    Eigen::MatrixXd block(p, p);
    Eigen::VectorXd rhs(p);
    for (Eigen::Index a = 0; a < p; ++a) {
      rhs[a] = ws.c[fold[static_cast<std::size_t>(a)]];
      for (Eigen::Index b = 0; b < p; ++b) {
        block(a, b) = ws.W(fold[static_cast<std::size_t>(a)], fold[static_cast<std::size_t>(b)]);
      }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(block);
    if (ldlt.info() != Eigen::Success) {
      throw numerical_error("era_residuals: fold subsystem factorization failed",
                            condition_estimate(block));
    }
    const Eigen::VectorXd e = ldlt.solve(rhs);
    for (Eigen::Index a = 0; a < p; ++a) {
      ws.residuals[fold[static_cast<std::size_t>(a)]] = e[a];
    }
    if (want_adjoints) {
      ws.fold_adjoints[fi] = ldlt.solve(Eigen::VectorXd(2.0 * e));
    }
  }

  if (!ws.residuals.allFinite()) {
    throw numerical_error("era_residuals: non-finite residuals", condition_estimate(ws.K));
  }
  return ws;
}

CvLossValue pack_loss(const EraWorkspace& ws) {
  CvLossValue value;
  value.residuals = ws.residuals;
  value.loss = ws.residuals.squaredNorm();
  return value;
}

}  // namespace

CvLossValue era_residuals(const KernelSpec& spec, const FirstLayer& layer,
                          const Eigen::MatrixXd& X_batch,
                          const Eigen::VectorXd& f_batch, const FoldPlan& plan,
                          double lambda) {
  return pack_loss(era_core(spec, layer, X_batch, f_batch, plan, lambda, false));
}

std::pair<CvLossValue, Eigen::MatrixXd> cv_loss_grad(
    const KernelSpec& spec, const FirstLayer& layer,
    const Eigen::MatrixXd& X_batch, const Eigen::VectorXd& f_batch,
    const FoldPlan& plan, double lambda) {
  EraWorkspace ws = era_core(spec, layer, X_batch, f_batch, plan, lambda, true);
  const Eigen::Index n = X_batch.rows();

  // Adjoint of the fold solves and of c = W f, collected as M = dL/dW.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd q(n);
  for (std::size_t fi = 0; fi < plan.folds.size(); ++fi) {
    const auto& fold = plan.folds[fi];
    const Eigen::VectorXd& mu = ws.fold_adjoints[fi];
    for (std::size_t a = 0; a < fold.size(); ++a) {
      q[fold[a]] = mu[static_cast<Eigen::Index>(a)];
      for (std::size_t b = 0; b < fold.size(); ++b) {
        M(fold[a], fold[b]) -= mu[static_cast<Eigen::Index>(a)] * ws.residuals[fold[b]];
      }
    }
  }
  M.noalias() += q * f_batch.transpose();

  // dW = -W dK W  =>  dL/dK = -W M W (W symmetric).
  Eigen::MatrixXd G = -(ws.W * M * ws.W);

  // Chain rule through K_ij = phi(eps * ||z_i - z_j||); the diagonal is
  // constant. Fixed i < j order keeps the reduction deterministic.
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(layer.rows(), layer.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = ws.R(i, j);
      if (r < 1e-12) continue;  // coincident transformed pair, zero by convention
      const double weight = (G(i, j) + G(j, i)) * eval_phi_radial_derivative(spec, r) / r;
      grad.noalias() +=
          weight * (ws.Z.row(i) - ws.Z.row(j)).transpose() * (X_batch.row(i) - X_batch.row(j));
    }
  }

  if (!grad.allFinite()) {
    throw numerical_error("cv_loss_grad: non-finite gradient", condition_estimate(ws.K));
  }
  return {pack_loss(ws), std::move(grad)};
}

}  // namespace tlkm
