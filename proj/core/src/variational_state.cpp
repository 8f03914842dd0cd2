#include "hmpsbm/variational_state.hpp"

#include <cmath>
#include <string>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/log_cholesky.hpp"

namespace hmpsbm {
namespace {

void require_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(std::string(name) + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                     ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_responsibilities(const Eigen::MatrixXd& m, const char* name) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!m.row(i).allFinite() || (m.row(i).array() < 0.0).any() || std::abs(m.row(i).sum() - 1.0) > 1e-10) {
      throw ValidationError(std::string(name) + ": row " + std::to_string(i) + " is not a distribution");
    }
  }
}

void require_positive(const Eigen::MatrixXd& m, const char* name) {
  if (!m.allFinite() || (m.array() <= 0.0).any()) {
    throw ValidationError(std::string(name) + " must be finite and strictly positive");
  }
}

}  // namespace

Eigen::MatrixXd VariationalState::chol_phi(int k) const { return chol_from_log_chol(log_chol_phi[k]); }

Eigen::MatrixXd VariationalState::sigma_phi(int k) const { return covariance_from_log_chol(log_chol_phi[k]); }

void VariationalState::validate(int num_layers, int num_nodes, int num_features) const {
  const int mw = m_w();
  const int mz = m_z();
  if (mw < 1 || mz < 1) throw ShapeError("truncations must be positive");
  require_shape(phi_w, num_nodes, mw, "phi_w");
  require_responsibilities(phi_w, "phi_w");
  if (static_cast<int>(phi_z.size()) != num_layers) throw ShapeError("phi_z: wrong number of layers");
  for (const auto& layer : phi_z) {
    require_shape(layer, num_nodes, mz, "phi_z");
    require_responsibilities(layer, "phi_z");
  }
  require_shape(rho_a, mz, mz, "rho_a");
  require_shape(rho_b, mz, mz, "rho_b");
  require_positive(rho_a, "rho_a");
  require_positive(rho_b, "rho_b");
  require_shape(gamma_a, mw, mz, "gamma_a");
  require_shape(gamma_b, mw, mz, "gamma_b");
  require_positive(gamma_a, "gamma_a");
  require_positive(gamma_b, "gamma_b");
  require_shape(theta_phi, mw, num_features, "theta_phi");
  require_shape(theta_phi0, mw, num_features, "theta_phi0");
  if (!theta_phi.allFinite() || !theta_phi0.allFinite()) throw ValidationError("theta must be finite");
  if (static_cast<int>(log_chol_phi.size()) != mw || static_cast<int>(sigma_phi0.size()) != mw) {
    throw ShapeError("covariance stacks must have M_w entries");
  }
  for (int k = 0; k < mw; ++k) {
    require_shape(log_chol_phi[k], num_features, num_features, "log_chol_phi");
    if (!log_chol_phi[k].allFinite()) throw ValidationError("log_chol_phi must be finite");
    require_shape(sigma_phi0[k], num_features, num_features, "sigma_phi0");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma_phi0[k]);
    if (!sigma_phi0[k].allFinite() || llt.info() != Eigen::Success) {
      throw ValidationError("sigma_phi0 must be positive definite");
    }
  }
  if (nu.size() != mw || omega.size() != mw) throw ShapeError("nu/omega must have M_w entries");
  require_positive(nu, "nu");
  require_positive(omega, "omega");
}

VariationalState make_default_state(int num_layers, int num_nodes, int num_features,
                                    const TruncationConfig& truncation, const Hyperparameters& hyper) {
  truncation.validate();
  hyper.validate(num_features);
  const int mw = truncation.m_w;
  const int mz = truncation.m_z;
  const int p = num_features;
  VariationalState s;
  s.phi_w = Eigen::MatrixXd::Constant(num_nodes, mw, 1.0 / mw);
  s.phi_z.assign(num_layers, Eigen::MatrixXd::Constant(num_nodes, mz, 1.0 / mz));
  s.rho_a = Eigen::MatrixXd::Constant(mz, mz, hyper.alpha0);
  s.rho_b = Eigen::MatrixXd::Constant(mz, mz, hyper.beta0);
  s.gamma_a = Eigen::MatrixXd::Ones(mw, mz);
  s.gamma_b = Eigen::MatrixXd::Constant(mw, mz, hyper.eta0);
  s.theta_phi = Eigen::MatrixXd::Zero(mw, p);
  s.log_chol_phi.assign(mw, Eigen::MatrixXd::Zero(p, p));
  const Eigen::VectorXd mu = hyper.prior_mean(p);
  s.theta_phi0 = mu.transpose().replicate(mw, 1);
  s.sigma_phi0.assign(mw, 0.5 * Eigen::MatrixXd::Identity(p, p));
  s.nu = Eigen::VectorXd::Constant(mw, hyper.nu0 + 0.5 * p);
  s.omega.resize(mw);
  for (int k = 0; k < mw; ++k) {
    // theta = 0, Sigma = I, Sigma0 = I/2
    s.omega(k) = hyper.omega0 + 0.5 * (mu.squaredNorm() + p + 0.5 * p);
  }
  return s;
}

}  // namespace hmpsbm
