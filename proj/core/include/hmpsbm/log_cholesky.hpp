#pragma once

#include <Eigen/Dense>

namespace hmpsbm {

/// L = strict_lower(B) + diag(exp(diag(B))). Entries of B above the diagonal are ignored.
Eigen::MatrixXd chol_from_log_chol(const Eigen::MatrixXd& log_chol);

/// Sigma = L L^T for L = chol_from_log_chol(B).
Eigen::MatrixXd covariance_from_log_chol(const Eigen::MatrixXd& log_chol);

/// Inverse map: B with strict_lower(B) = strict_lower(L), diag(B) = log(diag(L)),
/// L the Cholesky factor of sigma. Throws std::domain_error if sigma is not SPD.
Eigen::MatrixXd log_chol_from_covariance(const Eigen::MatrixXd& sigma);

/// Chain rule from dELBO/dSigma (symmetric, entries treated as free) to dELBO/dB:
///   i > j:  2 (G L)_ij
///   i == j: 2 (G L)_ii exp(B_ii)
///   i < j:  0
Eigen::MatrixXd grad_log_chol(const Eigen::MatrixXd& grad_sigma, const Eigen::MatrixXd& log_chol);

}  // namespace hmpsbm
