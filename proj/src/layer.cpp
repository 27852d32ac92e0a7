#include "tlkm/layer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tlkm {

LayerProvenance layer_provenance_from_string(std::string_view name) {
  if (name == "identity_init") return LayerProvenance::identity_init;
  if (name == "optimized") return LayerProvenance::optimized;
  if (name == "loaded") return LayerProvenance::loaded;
  throw std::invalid_argument("unknown layer provenance: " + std::string(name));
}

std::string to_string(LayerProvenance provenance) {
  switch (provenance) {
    case LayerProvenance::identity_init: return "identity_init";
    case LayerProvenance::optimized: return "optimized";
    case LayerProvenance::loaded: return "loaded";
  }
  throw std::invalid_argument("invalid layer provenance value");
}

FirstLayer FirstLayer::identity(Eigen::Index d) {
  return FirstLayer{Eigen::MatrixXd::Identity(d, d), LayerProvenance::identity_init};
}

FirstLayer FirstLayer::scaled_identity(Eigen::Index b, Eigen::Index d, double scale) {
  FirstLayer layer{scale * Eigen::MatrixXd::Identity(b, d),
                   LayerProvenance::identity_init};
  validate_layer(layer);
  return layer;
}

void validate_layer(const FirstLayer& layer) {
  const Eigen::Index b = layer.rows();
  const Eigen::Index d = layer.cols();
  if (b < 1 || d < 1 || b > d) {
    throw std::invalid_argument("first layer must be b x d with 1 <= b <= d");
  }
  if (!layer.matrix.allFinite()) {
    throw std::invalid_argument("first layer has non-finite entries");
  }
}

Eigen::MatrixXd apply_layer(const FirstLayer& layer, const Eigen::MatrixXd& X) {
  validate_layer(layer);
  if (X.cols() != layer.cols()) {
    throw std::invalid_argument("apply_layer: point dimension does not match layer");
  }
  return X * layer.matrix.transpose();
}

Eigen::MatrixXd two_layer_gram(const KernelSpec& spec, const FirstLayer& layer,
                               const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (&X == &Y) return two_layer_gram(spec, layer, X);
  return gram_matrix(spec, apply_layer(layer, X), apply_layer(layer, Y));
}

Eigen::MatrixXd two_layer_gram(const KernelSpec& spec, const FirstLayer& layer,
                               const Eigen::MatrixXd& X) {
  return gram_matrix(spec, apply_layer(layer, X));
}

SpectralReport spectral_report(const FirstLayer& layer) {
  validate_layer(layer);
  SpectralReport report;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(layer.matrix,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  report.singular_values = svd.singularValues();
  report.left_singular_vectors = svd.matrixU();
  report.right_singular_vectors = svd.matrixV();

  const Eigen::Index m = report.singular_values.size();
  report.cumulative_power = Eigen::VectorXd::Zero(m);
  // Same accumulation order for the normalizer and the prefix sums, so the
  // final entry is exactly 1.
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) total += std::abs(report.singular_values[i]);
  if (total > 0.0) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      acc += std::abs(report.singular_values[i]);
      report.cumulative_power[i] = acc / total;
    }
  } else {
    report.degenerate = true;
  }

  if (layer.rows() == layer.cols()) {
    Eigen::EigenSolver<Eigen::MatrixXd> eigs(layer.matrix);
    Eigen::VectorXcd values = eigs.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(values[a]) > std::abs(values[b]);
    });
    Eigen::VectorXcd sorted(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[static_cast<Eigen::Index>(i)] = values[order[i]];
    report.eigenvalues = std::move(sorted);
  }
  return report;
}

Eigen::VectorXd principal_angles_deg(const FirstLayer& layer_a,
                                     const FirstLayer& layer_b, Eigen::Index n) {
  validate_layer(layer_a);
  validate_layer(layer_b);
  if (layer_a.cols() != layer_b.cols()) {
    throw std::invalid_argument("principal_angles: layers act on different dimensions");
  }
  const Eigen::Index d = layer_a.cols();
  if (n < 1 || n > d) {
    throw std::invalid_argument("principal_angles: subspace dimension out of range");
  }
  // Full V so that subspaces up to dimension d are well defined even for
  // rectangular layers (the completion spans the null space).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_a(layer_a.matrix, Eigen::ComputeFullV);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_b(layer_b.matrix, Eigen::ComputeFullV);
  const Eigen::MatrixXd va = svd_a.matrixV().leftCols(n);
  const Eigen::MatrixXd vb = svd_b.matrixV().leftCols(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> overlap(va.transpose() * vb);
  Eigen::VectorXd cosines = overlap.singularValues();
  Eigen::VectorXd angles(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = std::clamp(cosines[i], -1.0, 1.0);
    angles[i] = std::acos(c) * 180.0 / std::numbers::pi;
  }
  // Singular values come out nonincreasing, so angles are already sorted
  // nondecreasing.
  return angles;
}

}  // namespace tlkm
