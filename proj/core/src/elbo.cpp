#include "hmpsbm/elbo.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>

#include "hmpsbm/updates.hpp"

namespace hmpsbm {
namespace {

using boost::math::digamma;

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

double ElboTerms::total() const {
  return likelihood + layer_groups + global_groups + rho + gamma + phi + entropy_w + entropy_z;
}

double beta_kl(double a, double b, double a0, double b0) {
  const double total = digamma(a + b);
  return log_beta(a0, b0) - log_beta(a, b) + (a - a0) * (digamma(a) - total) + (b - b0) * (digamma(b) - total);
}

double categorical_entropy(const Eigen::MatrixXd& responsibilities) {
  double h = 0.0;
  for (Eigen::Index c = 0; c < responsibilities.cols(); ++c) {
    for (Eigen::Index r = 0; r < responsibilities.rows(); ++r) {
      const double p = responsibilities(r, c);
      if (p > 0.0) h -= p * std::log(p);
    }
  }
  return h;
}

double phi_block_prior_terms(int k, const VariationalState& state, const Hyperparameters& hyper) {
  const int p = state.num_features();
  const double nu = state.nu(k);
  const double omega = state.omega(k);
  const double e_log_sigma2 = std::log(omega) - digamma(nu);
  const double e_precision = nu / omega;
  const Eigen::VectorXd mu = hyper.prior_mean(p);

  const double tr_sigma = state.sigma_phi(k).trace();
  const double tr_sigma0 = state.sigma_phi0[k].trace();
  const double spread = (state.theta_phi.row(k) - state.theta_phi0.row(k)).squaredNorm() + tr_sigma + tr_sigma0;

  const double log_p_phi = -0.5 * p * kLog2Pi - 0.5 * p * e_log_sigma2 - 0.5 * e_precision * spread;
  const double log_p_phi0 =
      -0.5 * p * kLog2Pi - 0.5 * ((state.theta_phi0.row(k) - mu.transpose()).squaredNorm() + tr_sigma0);
  const double log_p_sigma2 = hyper.nu0 * std::log(hyper.omega0) - std::lgamma(hyper.nu0) -
                              (hyper.nu0 + 1.0) * e_log_sigma2 - hyper.omega0 * e_precision;

  const double log_det = 2.0 * state.log_chol_phi[k].diagonal().sum();
  const double log_det0 = 2.0 * Eigen::LLT<Eigen::MatrixXd>(state.sigma_phi0[k]).matrixLLT().diagonal().array().log().sum();
  const double h_phi = 0.5 * p * (1.0 + kLog2Pi) + 0.5 * log_det;
  const double h_phi0 = 0.5 * p * (1.0 + kLog2Pi) + 0.5 * log_det0;
  const double h_sigma2 = nu + std::log(omega) + std::lgamma(nu) - (1.0 + nu) * digamma(nu);

  return log_p_phi + log_p_phi0 + log_p_sigma2 + h_phi + h_phi0 + h_sigma2;
}

ElboTerms elbo_terms(const VariationalState& state, const MultiplexNetwork& network,
                     const CovariateMatrix& covariates, const Hyperparameters& hyper, const GaussHermiteRule& rule,
                     int threads) {
  ElboTerms t;
  const int mz = state.m_z();
  const int mw = state.m_w();

  const RhoExpectations rho = expected_log_rho(state);
  const BlockCounts counts = block_counts(state, network, threads);
  t.likelihood = (counts.edges.array() * rho.log_rho.array()).sum() +
                 (counts.non_edges.array() * rho.log_1m_rho.array()).sum();

  t.layer_groups = (group_counts(state).array() * expected_log_gamma(state).array()).sum();

  const Eigen::MatrixXd log_tau = expected_log_tau(probit_table(state, covariates, rule, threads));
  t.global_groups = (state.phi_w.array() * log_tau.array()).sum();

  for (int k = 0; k < mz; ++k) {
    for (int m = 0; m < mz; ++m) t.rho -= beta_kl(state.rho_a(k, m), state.rho_b(k, m), hyper.alpha0, hyper.beta0);
  }
  for (int k = 0; k < mw; ++k) {
    for (int s = 0; s < mz; ++s) t.gamma -= beta_kl(state.gamma_a(k, s), state.gamma_b(k, s), 1.0, hyper.eta0);
  }
  for (int k = 0; k < mw; ++k) t.phi += phi_block_prior_terms(k, state, hyper);

  t.entropy_w = categorical_entropy(state.phi_w);
  for (const auto& layer : state.phi_z) t.entropy_z += categorical_entropy(layer);
  return t;
}

double elbo(const VariationalState& state, const MultiplexNetwork& network, const CovariateMatrix& covariates,
            const Hyperparameters& hyper, const GaussHermiteRule& rule, int threads) {
  return elbo_terms(state, network, covariates, hyper, rule, threads).total();
}

}  // namespace hmpsbm
