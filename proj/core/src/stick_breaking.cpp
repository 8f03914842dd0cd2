#include "hmpsbm/stick_breaking.hpp"

#include <stdexcept>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/probit.hpp"

namespace hmpsbm {

std::vector<double> StickWeights::with_remainder_in_last() const {
  std::vector<double> out = weights;
  if (!out.empty()) out.back() += remainder;
  return out;
}

StickWeights stick_breaking_weights(std::span<const double> breaks) {
  StickWeights out;
  out.weights.reserve(breaks.size());
  double stick = 1.0;
  for (double b : breaks) {
    if (!(b >= 0.0 && b <= 1.0)) throw std::domain_error("stick break outside [0, 1]");
    out.weights.push_back(b * stick);
    stick *= 1.0 - b;
  }
  out.remainder = stick;
  return out;
}

StickWeights probit_stick_probs(const Eigen::VectorXd& x, const Eigen::MatrixXd& phi) {
  if (phi.cols() != x.size()) {
    throw ShapeError("probit weights have " + std::to_string(phi.cols()) +
                     " columns but the covariate row has length " + std::to_string(x.size()));
  }
  std::vector<double> breaks(static_cast<std::size_t>(phi.rows()));
  for (Eigen::Index k = 0; k < phi.rows(); ++k) breaks[k] = normal_cdf(phi.row(k).dot(x));
  return stick_breaking_weights(breaks);
}

}  // namespace hmpsbm
