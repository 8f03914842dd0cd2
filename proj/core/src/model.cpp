#include "hmpsbm/model.hpp"

#include <cmath>
#include <string>

#include "hmpsbm/errors.hpp"

namespace hmpsbm {

Eigen::VectorXd Hyperparameters::prior_mean(int num_features) const {
  if (mu.size() == 0) return Eigen::VectorXd::Zero(num_features);
  if (mu.size() != num_features) {
    throw ShapeError("prior mean has length " + std::to_string(mu.size()) + ", expected " +
                     std::to_string(num_features));
  }
  return mu;
}

void Hyperparameters::validate(int num_features) const {
  const double scalars[] = {alpha0, beta0, eta0, nu0, omega0};
  for (double v : scalars) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("hyperparameters alpha0, beta0, eta0, nu0, omega0 must be positive");
    }
  }
  if (!prior_mean(num_features).allFinite()) throw ValidationError("prior mean is not finite");
}

void TruncationConfig::validate() const {
  if (m_w < 1 || m_z < 1) throw ValidationError("truncations must be at least 1");
}

}  // namespace hmpsbm
