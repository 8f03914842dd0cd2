#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hmpsbm/model.hpp"

namespace hmpsbm {

/// Elementwise Beta(a, b) parameters.
struct BetaParams {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};

/// Parameters of the truncated mean-field approximation.
///
///   q(w_i)         = Categorical(phi_w.row(i))
///   q(z_li)        = Categorical(phi_z[l].row(i))
///   q(rho_km)      = Beta(rho_a(k,m), rho_b(k,m))
///   q(gamma'_ks)   = Beta(gamma_a(k,s), gamma_b(k,s))
///   q(phi_k)       = Normal(theta_phi.row(k), Sigma_k), Sigma_k = L_k L_k^T with
///                    L_k = strict_lower(B_k) + diag(exp(diag(B_k))), B_k = log_chol_phi[k]
///   q(phi0_k)      = Normal(theta_phi0.row(k), sigma_phi0[k])
///   q(sigma^2_k)   = Inverse-Gamma(nu(k), omega(k))
struct VariationalState {
  Eigen::MatrixXd phi_w;               // N x M_w
  std::vector<Eigen::MatrixXd> phi_z;  // L entries of N x M_z
  Eigen::MatrixXd rho_a, rho_b;        // M_z x M_z
  Eigen::MatrixXd gamma_a, gamma_b;    // M_w x M_z
  Eigen::MatrixXd theta_phi;           // M_w x P
  std::vector<Eigen::MatrixXd> log_chol_phi;  // M_w entries of P x P lower-triangular B_k
  Eigen::MatrixXd theta_phi0;          // M_w x P
  std::vector<Eigen::MatrixXd> sigma_phi0;    // M_w entries of P x P SPD
  Eigen::VectorXd nu, omega;           // M_w

  int num_nodes() const { return static_cast<int>(phi_w.rows()); }
  int num_layers() const { return static_cast<int>(phi_z.size()); }
  int m_w() const { return static_cast<int>(phi_w.cols()); }
  int m_z() const { return static_cast<int>(rho_a.rows()); }
  int num_features() const { return static_cast<int>(theta_phi.cols()); }

  Eigen::MatrixXd chol_phi(int k) const;
  Eigen::MatrixXd sigma_phi(int k) const;

  /// Throws ShapeError / ValidationError when any invariant is broken:
  /// shapes, normalised nonnegative responsibilities (1e-10), positive
  /// beta and inverse-gamma parameters, SPD sigma_phi0, finite values.
  void validate(int num_layers, int num_nodes, int num_features) const;
};

/// Zero-initialised state of the right shapes with valid defaults: uniform
/// responsibilities, prior beta parameters, theta = 0, B = 0 (Sigma = I),
/// theta0 = mu, Sigma0 = I/2, nu = nu0 + P/2 and omega from the sigma^2 update.
VariationalState make_default_state(int num_layers, int num_nodes, int num_features,
                                    const TruncationConfig& truncation, const Hyperparameters& hyper);

}  // namespace hmpsbm
