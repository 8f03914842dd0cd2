#include "hmpsbm/gradients.hpp"

#include <vector>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/log_cholesky.hpp"
#include "hmpsbm/parallel.hpp"

namespace hmpsbm {

PhiBlockEval evaluate_phi_block(int k, const VariationalState& state, const CovariateMatrix& covariates,
                                const GaussHermiteRule& rule, const Eigen::VectorXd& theta,
                                const Eigen::MatrixXd& log_chol, bool with_gradients, int threads) {
  const int n = covariates.num_nodes();
  const int p = covariates.num_features();
  const int mw = state.m_w();
  if (k < 0 || k >= mw) throw ShapeError("group index outside the truncation");
  if (p != state.num_features() || theta.size() != p || log_chol.rows() != p || log_chol.cols() != p) {
    throw ShapeError("phi block dimensions disagree");
  }
  const Eigen::MatrixXd chol = chol_from_log_chol(log_chol);
  const Eigen::MatrixXd& x = covariates.values;
  const Eigen::VectorXd means = x * theta;
  const Eigen::VectorXd variances = (x * chol).rowwise().squaredNorm();

  Eigen::VectorXd value(n), c1(n), c2(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const double own = state.phi_w(i, k);
    double tail = 0.0;
    for (int m = k + 1; m < mw; ++m) tail += state.phi_w(i, m);
    if (own == 0.0 && tail == 0.0) {
      value(i) = c1(i) = c2(i) = 0.0;
      return;
    }
    const GaussExpectations e = gauss_expectations_1d(means(i), variances(i), rule);
    value(i) = own * e.e_log_phi + tail * e.e_log_1m_phi;
    c1(i) = own * e.e_d1 + tail * e.e_d1m;
    c2(i) = own * e.dv2 + tail * e.dv2m;
  });

  const double precision = state.nu(k) / state.omega(k);
  const Eigen::VectorXd offset = theta - state.theta_phi0.row(k).transpose();
  const double log_det = 2.0 * log_chol.diagonal().sum();
  double data = 0.0;
  for (int i = 0; i < n; ++i) data += value(i);

  PhiBlockEval out;
  out.value = data - 0.5 * precision * (offset.squaredNorm() + chol.squaredNorm()) + 0.5 * log_det;
  if (with_gradients) {
    out.grad_theta = x.transpose() * c1 - precision * offset;
    Eigen::MatrixXd weighted = x;
    for (int i = 0; i < n; ++i) weighted.row(i) *= c2(i);
    const Eigen::MatrixXd chol_inv =
        chol.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(p, p));
    out.grad_sigma = 0.5 * (x.transpose() * weighted) - 0.5 * precision * Eigen::MatrixXd::Identity(p, p) +
                     0.5 * chol_inv.transpose() * chol_inv;
    out.grad_sigma = 0.5 * (out.grad_sigma + out.grad_sigma.transpose()).eval();
  }
  return out;
}

double phi_block_objective(int k, const VariationalState& state, const CovariateMatrix& covariates,
                           const GaussHermiteRule& rule) {
  return evaluate_phi_block(k, state, covariates, rule, state.theta_phi.row(k).transpose(), state.log_chol_phi[k],
                            false)
      .value;
}

Eigen::VectorXd grad_theta(int k, const VariationalState& state, const CovariateMatrix& covariates,
                           const GaussHermiteRule& rule) {
  return evaluate_phi_block(k, state, covariates, rule, state.theta_phi.row(k).transpose(), state.log_chol_phi[k])
      .grad_theta;
}

Eigen::MatrixXd grad_sigma(int k, const VariationalState& state, const CovariateMatrix& covariates,
                           const GaussHermiteRule& rule) {
  return evaluate_phi_block(k, state, covariates, rule, state.theta_phi.row(k).transpose(), state.log_chol_phi[k])
      .grad_sigma;
}

Eigen::MatrixXd grad_B(int k, const VariationalState& state, const CovariateMatrix& covariates,
                       const GaussHermiteRule& rule) {
  return grad_log_chol(grad_sigma(k, state, covariates, rule), state.log_chol_phi[k]);
}

}  // namespace hmpsbm
