#include "hmpsbm/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace hmpsbm {

Eigen::MatrixXd Embedding::scaled() const { return coordinates * singular_values.asDiagonal(); }

Embedding spectral_embed(const Eigen::MatrixXd& adjacency, int d) {
  if (d < 1 || d > adjacency.rows()) throw std::domain_error("embedding dimension must satisfy 1 <= d <= N");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(adjacency, Eigen::ComputeThinU);
  Embedding out{svd.matrixU().leftCols(d), svd.singularValues().head(d)};
  for (int c = 0; c < d; ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < out.coordinates.rows(); ++r) {
      const double m = std::abs(out.coordinates(r, c));
      if (m > best) {
        best = m;
        arg = r;
      }
    }
    if (out.coordinates(arg, c) < 0.0) out.coordinates.col(c) *= -1.0;
  }
  return out;
}

}  // namespace hmpsbm
