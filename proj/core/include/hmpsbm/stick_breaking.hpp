#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hmpsbm {

/// Finite stick-breaking output: weights for the first K components plus the
/// unbroken remainder of the stick.
struct StickWeights {
  std::vector<double> weights;
  double remainder = 1.0;

  /// Weights with the remainder folded into the last component, which makes
  /// them a proper distribution over K outcomes.
  std::vector<double> with_remainder_in_last() const;
};

/// weight_s = b_s * prod_{r<s} (1 - b_r). Throws std::domain_error for breaks outside [0,1].
StickWeights stick_breaking_weights(std::span<const double> breaks);

/// Probit stick-breaking: breaks Phi(x . phi_k) for each row phi_k of `phi`.
/// Throws ShapeError when x and phi disagree on the feature dimension.
StickWeights probit_stick_probs(const Eigen::VectorXd& x, const Eigen::MatrixXd& phi);

}  // namespace hmpsbm
