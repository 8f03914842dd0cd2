#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hmpsbm/model.hpp"
#include "hmpsbm/network.hpp"
#include "hmpsbm/quadrature.hpp"
#include "hmpsbm/variational_state.hpp"

namespace hmpsbm {

/// E[log rho_km] and E[log(1 - rho_km)].
struct RhoExpectations {
  Eigen::MatrixXd log_rho;
  Eigen::MatrixXd log_1m_rho;
};
RhoExpectations expected_log_rho(const VariationalState& state);

/// E[log gamma_ks] for the stick weights gamma_ks = gamma'_ks prod_{r<s} (1 - gamma'_kr).
Eigen::MatrixXd expected_log_gamma(const VariationalState& state);

/// E[log Phi(x_i^T phi_k)] and E[log(1 - Phi(x_i^T phi_k))], N x M_w each.
struct ProbitTable {
  Eigen::MatrixXd log_phi;
  Eigen::MatrixXd log_1m_phi;
};
ProbitTable probit_table(const VariationalState& state, const CovariateMatrix& covariates,
                         const GaussHermiteRule& rule, int threads = 1);

/// E[log tau_iw] = E[log Phi(x_i^T phi_w)] + sum_{l<w} E[log(1 - Phi(x_i^T phi_l))], N x M_w.
Eigen::MatrixXd expected_log_tau(const ProbitTable& table);
Eigen::VectorXd expected_log_tau(int node, const VariationalState& state, const CovariateMatrix& covariates,
                                 const GaussHermiteRule& rule);

/// Expected edge and non-edge counts between layer groups:
///   edges(k,m)     = sum_l sum_{i!=j} A_lij phi_z[l](i,k) phi_z[l](j,m)
///   non_edges(k,m) = sum_l sum_{i!=j} (1 - A_lij) phi_z[l](i,k) phi_z[l](j,m)
/// Layers are reduced in index order.
struct BlockCounts {
  Eigen::MatrixXd edges;
  Eigen::MatrixXd non_edges;
};
BlockCounts block_counts(const VariationalState& state, const MultiplexNetwork& network, int threads = 1);

/// Soft counts C(k,s) = sum_l sum_i phi_w(i,k) phi_z[l](i,s).
Eigen::MatrixXd group_counts(const VariationalState& state);

/// New phi_w: log phi_w(i,k) = sum_l sum_s phi_z[l](i,s) E[log gamma_ks] + E[log tau_ik], then normalised.
Eigen::MatrixXd update_w(const VariationalState& state, const CovariateMatrix& covariates,
                         const GaussHermiteRule& rule, int threads = 1);
/// Same, with E[log tau] supplied.
Eigen::MatrixXd update_w(const VariationalState& state, const Eigen::MatrixXd& expected_log_tau);

/// New phi_z. Within a layer the nodes are visited in index order and each
/// row sees the rows already updated, so every row update is an exact
/// coordinate step. Layers are independent given phi_w and run in parallel.
std::vector<Eigen::MatrixXd> update_z(const VariationalState& state, const MultiplexNetwork& network,
                                      int threads = 1);

/// alpha = alpha0 + edges, beta = beta0 + non_edges.
BetaParams update_rho(const VariationalState& state, const MultiplexNetwork& network, const Hyperparameters& hyper,
                      int threads = 1);

/// alpha_ks = 1 + C(k,s), beta_ks = eta0 + sum_{r=s+1}^{M_z} C(k,r).
BetaParams update_gamma(const VariationalState& state, const Hyperparameters& hyper);

struct Phi0Params {
  Eigen::MatrixXd theta;             // M_w x P
  std::vector<Eigen::MatrixXd> sigma;
};
/// theta0 = (nu theta + omega mu) / (nu + omega), Sigma0 = omega / (nu + omega) I.
Phi0Params update_phi0(const VariationalState& state, const Hyperparameters& hyper);

struct Sigma2Params {
  Eigen::VectorXd nu;
  Eigen::VectorXd omega;
};
/// nu = nu0 + P/2, omega = omega0 + 1/2 (|theta - theta0|^2 + tr Sigma + tr Sigma0).
Sigma2Params update_sigma2(const VariationalState& state, const Hyperparameters& hyper);

/// Row-wise log-sum-exp normalisation in place.
void normalize_log_rows(Eigen::MatrixXd& log_weights);

}  // namespace hmpsbm
