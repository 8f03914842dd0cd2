#pragma once

#include <Eigen/Dense>

namespace hmpsbm {

struct AdamSettings {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Moment buffers for one parameter block. Shapes follow the parameter.
struct AdamState {
  Eigen::MatrixXd first_moment;
  Eigen::MatrixXd second_moment;
  long step_count = 0;

  static AdamState zeros(Eigen::Index rows, Eigen::Index cols);
};

/// One minimisation step on `param` with gradient `grad`:
///   t += 1, m = b1 m + (1 - b1) g, v = b2 v + (1 - b2) g*g,
///   param -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps).
/// To ascend an objective pass its negated gradient.
void adam_step(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, AdamState& state, const AdamSettings& settings);

}  // namespace hmpsbm
