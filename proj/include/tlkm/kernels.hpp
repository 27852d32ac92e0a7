#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>

namespace tlkm {

enum class KernelFamily { matern0, matern1, matern2, gaussian };

KernelFamily kernel_family_from_string(std::string_view name);
std::string to_string(KernelFamily family);

// Radial kernel profile phi evaluated at scaled distance s = eps * r,
// normalized so phi(0) = 1 for every family:
//   matern0   phi(s) = exp(-s)
//   matern1   phi(s) = (1 + s) exp(-s)
//   matern2   phi(s) = (3 + 3s + s^2) exp(-s) / 3
//   gaussian  phi(s) = exp(-s^2)
struct KernelSpec {
  KernelFamily family = KernelFamily::matern0;
  double length_scale = 1.0;  // eps > 0, multiplier on distances

  // Matern smoothness order (0, 1 or 2); empty for the Gaussian.
  std::optional<int> smoothness_order() const;
};

// phi(eps * r). Throws std::invalid_argument for r < 0, non-finite r,
// or a non-positive length scale.
double eval_phi(const KernelSpec& spec, double r);

// d/dr phi(eps * r), chain factor eps included. The matern0 profile has a
// kink at r = 0; the one-sided limit -eps is returned there by convention.
// The smoother families are flat at the origin.
double eval_phi_radial_derivative(const KernelSpec& spec, double r);

// Entry (i, j) = phi(eps * ||x_i - y_j||_2). Distances are taken as the
// plain Euclidean norm of the difference; the ||x||^2 + ||y||^2 - 2<x,y>
// expansion cancels catastrophically for near-duplicate points.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X,
                            const Eigen::MatrixXd& Y);

// Symmetric fast path: each unordered pair is evaluated once and mirrored,
// so the result equals its transpose exactly as computed. Unit diagonal.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X);

}  // namespace tlkm
