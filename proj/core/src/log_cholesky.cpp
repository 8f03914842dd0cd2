#include "hmpsbm/log_cholesky.hpp"

#include <cmath>
#include <stdexcept>

#include "hmpsbm/errors.hpp"

namespace hmpsbm {

Eigen::MatrixXd chol_from_log_chol(const Eigen::MatrixXd& log_chol) {
  if (log_chol.rows() != log_chol.cols()) throw ShapeError("log-Cholesky factor must be square");
  Eigen::MatrixXd l = log_chol.triangularView<Eigen::StrictlyLower>();
  l.diagonal() = log_chol.diagonal().array().exp();
  return l;
}

Eigen::MatrixXd covariance_from_log_chol(const Eigen::MatrixXd& log_chol) {
  const Eigen::MatrixXd l = chol_from_log_chol(log_chol);
  return l * l.transpose();
}

Eigen::MatrixXd log_chol_from_covariance(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw ShapeError("covariance must be square");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw std::domain_error("covariance is not positive definite");
  Eigen::MatrixXd b = llt.matrixL();
  b.diagonal() = b.diagonal().array().log();
  return b;
}

Eigen::MatrixXd grad_log_chol(const Eigen::MatrixXd& grad_sigma, const Eigen::MatrixXd& log_chol) {
  if (grad_sigma.rows() != log_chol.rows() || grad_sigma.cols() != log_chol.cols()) {
    throw ShapeError("gradient and factor shapes differ");
  }
  const Eigen::MatrixXd l = chol_from_log_chol(log_chol);
  Eigen::MatrixXd out = (2.0 * grad_sigma * l).triangularView<Eigen::Lower>();
  out.diagonal().array() *= log_chol.diagonal().array().exp();
  return out;
}

}  // namespace hmpsbm
