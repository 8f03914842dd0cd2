#pragma once

#include <Eigen/Dense>

namespace hmpsbm {

struct Embedding {
  Eigen::MatrixXd coordinates;     // N x d, top-d left singular vectors
  Eigen::VectorXd singular_values; // length d, nonincreasing

  /// Coordinates with column c scaled by singular value c.
  Eigen::MatrixXd scaled() const;
};

/// Top-d left singular vectors of `adjacency`. Each column's sign is chosen so
/// its largest-magnitude entry (first one on ties) is positive.
/// Throws std::domain_error unless 1 <= d <= N.
Embedding spectral_embed(const Eigen::MatrixXd& adjacency, int d);

}  // namespace hmpsbm
