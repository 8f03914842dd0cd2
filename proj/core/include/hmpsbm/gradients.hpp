#pragma once

#include <Eigen/Dense>

#include "hmpsbm/network.hpp"
#include "hmpsbm/quadrature.hpp"
#include "hmpsbm/variational_state.hpp"

namespace hmpsbm {

/// The part of the ELBO that depends on (theta_k, Sigma_k):
///   sum_i [phi_w(i,k) E h(s_ik) + tail_ik E g(s_ik)]
///     - nu_k / (2 omega_k) (|theta_k - theta0_k|^2 + tr Sigma_k) + 1/2 log det Sigma_k
/// with tail_ik = sum_{m>k} phi_w(i,m), h = log Phi, g = log(1 - Phi).
struct PhiBlockEval {
  double value = 0.0;
  Eigen::VectorXd grad_theta;  // P
  Eigen::MatrixXd grad_sigma;  // P x P, symmetric
};

/// Evaluates block k at an arbitrary (theta, B) with everything else read from `state`.
/// Per-node terms are reduced in node order, so the result does not depend on `threads`.
PhiBlockEval evaluate_phi_block(int k, const VariationalState& state, const CovariateMatrix& covariates,
                                const GaussHermiteRule& rule, const Eigen::VectorXd& theta,
                                const Eigen::MatrixXd& log_chol, bool with_gradients = true, int threads = 1);

double phi_block_objective(int k, const VariationalState& state, const CovariateMatrix& covariates,
                           const GaussHermiteRule& rule);

/// dELBO/dtheta_k = sum_i [phi_w(i,k) E h' + tail_ik E g'] x_i - nu_k/omega_k (theta_k - theta0_k).
Eigen::VectorXd grad_theta(int k, const VariationalState& state, const CovariateMatrix& covariates,
                           const GaussHermiteRule& rule);

/// dELBO/dSigma_k = 1/2 sum_i [phi_w(i,k) E h'' + tail_ik E g''] x_i x_i^T - nu_k/(2 omega_k) I + 1/2 Sigma_k^{-1},
/// with E h'' taken as the exact variance derivative of the quadrature (GaussExpectations::dv2), so the
/// gradient is that of the objective actually evaluated.
Eigen::MatrixXd grad_sigma(int k, const VariationalState& state, const CovariateMatrix& covariates,
                           const GaussHermiteRule& rule);

/// dELBO/dB_k through the log-Cholesky map.
Eigen::MatrixXd grad_B(int k, const VariationalState& state, const CovariateMatrix& covariates,
                       const GaussHermiteRule& rule);

}  // namespace hmpsbm
