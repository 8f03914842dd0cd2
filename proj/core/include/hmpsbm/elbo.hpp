#pragma once

#include <Eigen/Dense>

#include "hmpsbm/model.hpp"
#include "hmpsbm/network.hpp"
#include "hmpsbm/quadrature.hpp"
#include "hmpsbm/variational_state.hpp"

namespace hmpsbm {

/// ELBO = E_q[log p] - E_q[log q], split by factor. Every term carries its
/// normalising constants, so the total is comparable across truncations.
struct ElboTerms {
  double likelihood = 0.0;     // E log p(A | z, rho)
  double layer_groups = 0.0;   // E log p(z | w, gamma')
  double global_groups = 0.0;  // E log p(w | phi, X)
  double rho = 0.0;            // -KL(q(rho) || p(rho))
  double gamma = 0.0;          // -KL(q(gamma') || p(gamma'))
  double phi = 0.0;            // sum_k of phi_block_prior_terms
  double entropy_w = 0.0;      // H[q(w)]
  double entropy_z = 0.0;      // H[q(z)]

  double total() const;
};

ElboTerms elbo_terms(const VariationalState& state, const MultiplexNetwork& network,
                     const CovariateMatrix& covariates, const Hyperparameters& hyper, const GaussHermiteRule& rule,
                     int threads = 1);

double elbo(const VariationalState& state, const MultiplexNetwork& network, const CovariateMatrix& covariates,
            const Hyperparameters& hyper, const GaussHermiteRule& rule, int threads = 1);

/// KL(Beta(a, b) || Beta(a0, b0)).
double beta_kl(double a, double b, double a0, double b0);

/// For global group k:
///   E log p(phi_k | phi0_k, sigma2_k) + E log p(phi0_k) + E log p(sigma2_k)
///   + H[q(phi_k)] + H[q(phi0_k)] + H[q(sigma2_k)].
double phi_block_prior_terms(int k, const VariationalState& state, const Hyperparameters& hyper);

/// -sum p log p over the entries of a responsibility matrix, with 0 log 0 = 0.
double categorical_entropy(const Eigen::MatrixXd& responsibilities);

}  // namespace hmpsbm
