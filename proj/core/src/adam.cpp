#include "hmpsbm/adam.hpp"

#include <cmath>

#include "hmpsbm/errors.hpp"

namespace hmpsbm {

void AdamSettings::validate() const {
  if (!(learning_rate > 0.0)) throw ValidationError("Adam learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("Adam decay rates must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ValidationError("Adam epsilon must be positive");
}

AdamState AdamState::zeros(Eigen::Index rows, Eigen::Index cols) {
  return {Eigen::MatrixXd::Zero(rows, cols), Eigen::MatrixXd::Zero(rows, cols), 0};
}

void adam_step(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, AdamState& state, const AdamSettings& settings) {
  if (grad.rows() != param.rows() || grad.cols() != param.cols() || state.first_moment.rows() != param.rows() ||
      state.first_moment.cols() != param.cols() || state.second_moment.rows() != param.rows() ||
      state.second_moment.cols() != param.cols()) {
    throw ShapeError("Adam buffers do not match the parameter");
  }
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  state.first_moment = settings.beta1 * state.first_moment + (1.0 - settings.beta1) * grad;
  state.second_moment = settings.beta2 * state.second_moment + (1.0 - settings.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(settings.beta1, t);
  const double c2 = 1.0 - std::pow(settings.beta2, t);
  param.array() -= settings.learning_rate * (state.first_moment.array() / c1) /
                   ((state.second_moment.array() / c2).sqrt() + settings.epsilon);
}

}  // namespace hmpsbm
