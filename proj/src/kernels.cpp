#include "tlkm/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace tlkm {

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "matern0") return KernelFamily::matern0;
  if (name == "matern1") return KernelFamily::matern1;
  if (name == "matern2") return KernelFamily::matern2;
  if (name == "gaussian") return KernelFamily::gaussian;
  throw std::invalid_argument("unknown kernel family: " + std::string(name));
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::matern0: return "matern0";
    case KernelFamily::matern1: return "matern1";
    case KernelFamily::matern2: return "matern2";
    case KernelFamily::gaussian: return "gaussian";
  }
  throw std::invalid_argument("invalid kernel family value");
}

std::optional<int> KernelSpec::smoothness_order() const {
  switch (family) {
    case KernelFamily::matern0: return 0;
    case KernelFamily::matern1: return 1;
    case KernelFamily::matern2: return 2;
    case KernelFamily::gaussian: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

void check_spec(const KernelSpec& spec) {
  if (!(spec.length_scale > 0.0) || !std::isfinite(spec.length_scale)) {
    throw std::invalid_argument("kernel length_scale must be positive and finite");
  }
}

void check_radius(double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument("kernel radius must be finite and nonnegative");
  }
}

double phi_at(KernelFamily family, double s) {
  switch (family) {
    case KernelFamily::matern0: return std::exp(-s);
    case KernelFamily::matern1: return (1.0 + s) * std::exp(-s);
    case KernelFamily::matern2: return (3.0 + 3.0 * s + s * s) * std::exp(-s) / 3.0;
    case KernelFamily::gaussian: return std::exp(-s * s);
  }
  return 0.0;  // unreachable
}

}  // namespace

double eval_phi(const KernelSpec& spec, double r) {
  check_spec(spec);
  check_radius(r);
  return phi_at(spec.family, spec.length_scale * r);
}

double eval_phi_radial_derivative(const KernelSpec& spec, double r) {
  check_spec(spec);
  check_radius(r);
  const double eps = spec.length_scale;
  const double s = eps * r;
  switch (spec.family) {
    case KernelFamily::matern0: return -eps * std::exp(-s);
    case KernelFamily::matern1: return -eps * s * std::exp(-s);
    case KernelFamily::matern2: return -eps * s * (1.0 + s) * std::exp(-s) / 3.0;
    case KernelFamily::gaussian: return -2.0 * eps * s * std::exp(-s * s);
  }
  return 0.0;  // unreachable
}

namespace {

void check_points(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (X.cols() != Y.cols()) {
    throw std::invalid_argument("gram_matrix: point sets differ in dimension");
  }
  if (!X.allFinite() || !Y.allFinite()) {
    throw std::invalid_argument("gram_matrix: non-finite point coordinates");
  }
}

}  // namespace

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X,
                            const Eigen::MatrixXd& Y) {
  if (&X == &Y) return gram_matrix(spec, X);
  check_spec(spec);
  check_points(X, Y);
  const Eigen::Index n = X.rows();
  const Eigen::Index m = Y.rows();
  Eigen::MatrixXd K(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      K(i, j) = phi_at(spec.family, spec.length_scale * (X.row(i) - Y.row(j)).norm());
    }
  }
  return K;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X) {
  check_spec(spec);
  check_points(X, X);
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K(n, n);
  K.diagonal().setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = phi_at(spec.family, spec.length_scale * (X.row(i) - X.row(j)).norm());
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

}  // namespace tlkm
