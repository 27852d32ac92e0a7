#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "tlkm/kernels.hpp"
#include "tlkm/layer.hpp"
#include "tlkm/rng.hpp"

namespace tlkm {

// Partition of a mini-batch's indices into k validation folds. Folds are
// disjoint, cover {0, ..., batch_size - 1} and their sizes differ by at
// most one. k = batch_size gives singleton folds (leave-one-out).
struct FoldPlan {
  int batch_size = 0;
  int k = 0;
  std::vector<std::vector<int>> folds;
};

// Uniformly random partition; deterministic for a fixed generator state.
// Requires 1 < k <= n_batch.
FoldPlan make_folds(int n_batch, int k, Rng& rng);

// k-fold cross-validation residuals and their squared two-norm.
struct CvLossValue {
  double loss = 0.0;            // sum of squared residual entries
  Eigen::VectorXd residuals;    // length batch_size, signed f - s
};

// Cross-validation residuals on one mini-batch without refitting per fold:
// with W = (K + lambda I)^-1 and c = W f, the residuals of the fold with
// validation indices V solve the small system W[V,V] e_V = c_V. Singleton
// folds reduce to the classical diagonal formula e_i = c_i / W_ii.
// Tikhonov regularization enters as the diagonal shift of the batch Gram
// matrix before inversion, and nowhere else.
//
// Throws std::invalid_argument on shape/finiteness violations and
// tlkm::numerical_error (with a condition estimate) when the regularized
// matrix cannot be factorized.
CvLossValue era_residuals(const KernelSpec& spec, const FirstLayer& layer,
                          const Eigen::MatrixXd& X_batch,
                          const Eigen::VectorXd& f_batch, const FoldPlan& plan,
                          double lambda);

// Loss plus its gradient with respect to every entry of the layer matrix.
// The gradient is exact: the adjoints of the two linear-solve stages of
// era_residuals yield dL/dK, which is chained through the kernel profile as
//   dL/dA = sum_{i<j} (G_ij + G_ji) * phi'(r_ij)/r_ij * (z_i - z_j)(x_i - x_j)^T
// with z = A x and r_ij = ||z_i - z_j||. Transformed pairs closer than
// 1e-12 contribute zero. Accumulation order is fixed, so repeated calls on
// identical inputs are bit-identical.
std::pair<CvLossValue, Eigen::MatrixXd> cv_loss_grad(
    const KernelSpec& spec, const FirstLayer& layer,
    const Eigen::MatrixXd& X_batch, const Eigen::VectorXd& f_batch,
    const FoldPlan& plan, double lambda);

}  // namespace tlkm
