#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>

#include "tlkm/kernels.hpp"

namespace tlkm {

enum class LayerProvenance { identity_init, optimized, loaded };

LayerProvenance layer_provenance_from_string(std::string_view name);
std::string to_string(LayerProvenance provenance);

// First-layer linear map of the two-layer kernel k(Ax, Ay).
// The matrix is b x d with 1 <= b <= d; only the row space matters for the
// induced kernel, so no structure (symmetry, orthogonality) is imposed.
struct FirstLayer {
  Eigen::MatrixXd matrix;  // b x d
  LayerProvenance provenance = LayerProvenance::identity_init;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }

  static FirstLayer identity(Eigen::Index d);
  // Leading b rows of c * I_d; reduces to c * I_d at b = d.
  static FirstLayer scaled_identity(Eigen::Index b, Eigen::Index d, double scale);
};

// Throws std::invalid_argument when shape or finiteness invariants fail.
void validate_layer(const FirstLayer& layer);

// Row i of the result is A x_i; X is N x d, result N x b.
Eigen::MatrixXd apply_layer(const FirstLayer& layer, const Eigen::MatrixXd& X);

// Gram matrix of the composed kernel k(Ax, Ay).
Eigen::MatrixXd two_layer_gram(const KernelSpec& spec, const FirstLayer& layer,
                               const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);
Eigen::MatrixXd two_layer_gram(const KernelSpec& spec, const FirstLayer& layer,
                               const Eigen::MatrixXd& X);

// Spectral diagnostics of the layer. Singular values are nonincreasing;
// cumulative_power[n] is the partial sum of singular values up to n + 1
// normalized by their total, which judges how much of the map's action is
// clustered in the top directions. A zero matrix has no meaningful
// normalization and is flagged degenerate (cumulative_power left at zero).
// Eigenvalues are reported alongside for square layers only, ordered by
// magnitude; they are a distinct spectrum from the singular values.
struct SpectralReport {
  Eigen::VectorXd singular_values;          // length min(b, d)
  Eigen::MatrixXd right_singular_vectors;   // d x min(b, d), orthonormal columns
  Eigen::MatrixXd left_singular_vectors;    // b x min(b, d), orthonormal columns
  Eigen::VectorXd cumulative_power;         // length min(b, d)
  bool degenerate = false;
  std::optional<Eigen::VectorXcd> eigenvalues;  // square layers only
};

SpectralReport spectral_report(const FirstLayer& layer);

// Principal angles (degrees, nondecreasing, in [0, 90]) between the spans of
// the first n right singular vectors of the two layers, via arccos of the
// singular values of Va^T Vb clamped to [-1, 1]. The plain arccos form loses
// precision below ~1e-8 rad, which is accepted here.
Eigen::VectorXd principal_angles_deg(const FirstLayer& layer_a,
                                     const FirstLayer& layer_b, Eigen::Index n);

}  // namespace tlkm
