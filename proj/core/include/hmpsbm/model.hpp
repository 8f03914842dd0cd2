#pragma once

#include <vector>

#include <Eigen/Dense>

namespace hmpsbm {

/// Prior hyperparameters.
///   rho_km ~ Beta(alpha0, beta0), gamma'_ks ~ Beta(1, eta0),
///   sigma_k^2 ~ Inverse-Gamma(nu0, omega0), phi0_k ~ Normal(mu, I).
/// An empty `mu` means the zero vector of whatever dimension the covariates have.
struct Hyperparameters {
  double alpha0 = 1.0;
  double beta0 = 1.0;
  double eta0 = 1.0;
  double nu0 = 2.0;
  double omega0 = 1.0;
  Eigen::VectorXd mu;

  /// mu resolved to length `num_features`.
  Eigen::VectorXd prior_mean(int num_features) const;
  void validate(int num_features) const;
};

struct TruncationConfig {
  int m_w = 2;  // global groups
  int m_z = 3;  // layer-level groups

  void validate() const;
};

/// Latent structure used to generate a network. Groups are 0-based.
struct GroundTruth {
  std::vector<int> global_groups;               // w, length N
  std::vector<std::vector<int>> layer_groups;   // z, L rows of length N
  Eigen::MatrixXd connection_probs;             // rho, K_z x K_z
  Eigen::MatrixXd gamma;                        // K_w rows, each a distribution over K_z
  Eigen::MatrixXd probit_weights;               // phi, K_w x P; empty for explicit w

  int num_nodes() const { return static_cast<int>(global_groups.size()); }
  int num_layers() const { return static_cast<int>(layer_groups.size()); }
};

}  // namespace hmpsbm
