#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hmpsbm/model.hpp"
#include "hmpsbm/network.hpp"

namespace hmpsbm {

/// A point in the truncated parameter space: discrete labels plus values for
/// every continuous parameter. Labels are 0-based and must be below the
/// truncations implied by the matrix shapes (M_w = phi.rows(), M_z = rho.rows()).
struct JointPoint {
  std::vector<int> global_groups;              // w
  std::vector<std::vector<int>> layer_groups;  // z, L x N
  Eigen::MatrixXd rho;                         // M_z x M_z
  Eigen::MatrixXd gamma_breaks;                // gamma', M_w x M_z
  Eigen::MatrixXd phi;                         // M_w x P
  Eigen::MatrixXd phi0;                        // M_w x P
  Eigen::VectorXd sigma2;                      // M_w
};

/// The log joint density broken into its factors. Each term includes its
/// normalising constant; a zero-probability event yields -infinity.
struct LogJointTerms {
  double likelihood = 0.0;    // log p(A | z, rho)
  double layer_groups = 0.0;  // log p(z | w, gamma')
  double global_groups = 0.0; // log p(w | phi, X)
  double phi = 0.0;           // log p(phi | phi0, sigma^2)
  double phi0 = 0.0;          // log p(phi0)
  double sigma2 = 0.0;        // log p(sigma^2)
  double gamma = 0.0;         // log p(gamma')
  double rho = 0.0;           // log p(rho)

  double total() const;
};

LogJointTerms log_joint_terms(const JointPoint& point, const MultiplexNetwork& network,
                              const CovariateMatrix& covariates, const Hyperparameters& hyper);

double log_joint(const JointPoint& point, const MultiplexNetwork& network,
                 const CovariateMatrix& covariates, const Hyperparameters& hyper);

/// log tau_iw under probit stick-breaking without a remainder component.
double log_stick_probability(const Eigen::VectorXd& x, const Eigen::MatrixXd& phi, int group);

}  // namespace hmpsbm
