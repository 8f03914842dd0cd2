#include "hmpsbm/updates.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/parallel.hpp"

namespace hmpsbm {
namespace {

using boost::math::digamma;

void normalize_log_row(Eigen::Ref<Eigen::RowVectorXd> row) {
  const double top = row.maxCoeff();
  if (!std::isfinite(top)) throw std::domain_error("responsibility update produced a non-finite row");
  row = (row.array() - top).exp();
  row /= row.sum();
}

}  // namespace

void normalize_log_rows(Eigen::MatrixXd& log_weights) {
  for (Eigen::Index i = 0; i < log_weights.rows(); ++i) {
    Eigen::RowVectorXd row = log_weights.row(i);
    normalize_log_row(row);
    log_weights.row(i) = row;
  }
}

RhoExpectations expected_log_rho(const VariationalState& state) {
  const int mz = state.m_z();
  RhoExpectations e{Eigen::MatrixXd(mz, mz), Eigen::MatrixXd(mz, mz)};
  for (int k = 0; k < mz; ++k) {
    for (int m = 0; m < mz; ++m) {
      const double total = digamma(state.rho_a(k, m) + state.rho_b(k, m));
      e.log_rho(k, m) = digamma(state.rho_a(k, m)) - total;
      e.log_1m_rho(k, m) = digamma(state.rho_b(k, m)) - total;
    }
  }
  return e;
}

Eigen::MatrixXd expected_log_gamma(const VariationalState& state) {
  const int mw = state.m_w();
  const int mz = state.m_z();
  Eigen::MatrixXd out(mw, mz);
  for (int k = 0; k < mw; ++k) {
    double broken = 0.0;  // sum_{r<s} E[log(1 - gamma'_kr)]
    for (int s = 0; s < mz; ++s) {
      const double a = state.gamma_a(k, s);
      const double b = state.gamma_b(k, s);
      const double total = digamma(a + b);
      out(k, s) = digamma(a) - total + broken;
      broken += digamma(b) - total;
    }
  }
  return out;
}

ProbitTable probit_table(const VariationalState& state, const CovariateMatrix& covariates,
                         const GaussHermiteRule& rule, int threads) {
  const int n = covariates.num_nodes();
  const int mw = state.m_w();
  if (covariates.num_features() != state.num_features()) throw ShapeError("covariates and state disagree on P");
  ProbitTable t{Eigen::MatrixXd(n, mw), Eigen::MatrixXd(n, mw)};
  std::vector<Eigen::MatrixXd> chol(mw);
  for (int k = 0; k < mw; ++k) chol[k] = state.chol_phi(k);
  // Precompute projected means and variances, then fill rows in parallel.
  const Eigen::MatrixXd means = covariates.values * state.theta_phi.transpose();  // N x M_w
  Eigen::MatrixXd variances(n, mw);
  for (int k = 0; k < mw; ++k) {
    variances.col(k) = (covariates.values * chol[k]).rowwise().squaredNorm();
  }
  parallel_for(n, threads, [&](std::size_t i) {
    for (int k = 0; k < mw; ++k) {
      const GaussExpectations e = gauss_expectations_1d(means(i, k), variances(i, k), rule);
      t.log_phi(i, k) = e.e_log_phi;
      t.log_1m_phi(i, k) = e.e_log_1m_phi;
    }
  });
  return t;
}

Eigen::MatrixXd expected_log_tau(const ProbitTable& table) {
  Eigen::MatrixXd out = table.log_phi;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    double broken = 0.0;
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
      out(i, k) += broken;
      broken += table.log_1m_phi(i, k);
    }
  }
  return out;
}

Eigen::VectorXd expected_log_tau(int node, const VariationalState& state, const CovariateMatrix& covariates,
                                 const GaussHermiteRule& rule) {
  const Eigen::VectorXd x = covariates.values.row(node).transpose();
  Eigen::VectorXd out(state.m_w());
  double broken = 0.0;
  for (int k = 0; k < state.m_w(); ++k) {
    const GaussExpectations e =
        gauss_expectations(x, state.theta_phi.row(k).transpose(), state.chol_phi(k), rule);
    out(k) = e.e_log_phi + broken;
    broken += e.e_log_1m_phi;
  }
  return out;
}

BlockCounts block_counts(const VariationalState& state, const MultiplexNetwork& network, int threads) {
  const int mz = state.m_z();
  const int n = network.num_nodes();
  const int layers = network.num_layers();
  std::vector<Eigen::MatrixXd> edges(layers), totals(layers);
  parallel_for(layers, threads, [&](std::size_t l) {
    const Eigen::MatrixXd& z = state.phi_z[l];
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(mz, mz);
    Eigen::RowVectorXd out_mass(mz);
    for (int i = 0; i < n; ++i) {
      const auto row = network.row(static_cast<int>(l), i);
      out_mass.setZero();
      for (int j = 0; j < n; ++j) {
        if (row[j]) out_mass += z.row(j);
      }
      e.noalias() += z.row(i).transpose() * out_mass;
    }
    const Eigen::VectorXd col = z.colwise().sum().transpose();
    edges[l] = std::move(e);
    totals[l] = col * col.transpose() - z.transpose() * z;
  });
  BlockCounts out{Eigen::MatrixXd::Zero(mz, mz), Eigen::MatrixXd::Zero(mz, mz)};
  for (int l = 0; l < layers; ++l) {
    out.edges += edges[l];
    out.non_edges += totals[l] - edges[l];
  }
  // Pair totals minus edges can dip below zero by round-off.
  out.non_edges = out.non_edges.cwiseMax(0.0);
  return out;
}

Eigen::MatrixXd group_counts(const VariationalState& state) {
  Eigen::MatrixXd z_sum = Eigen::MatrixXd::Zero(state.num_nodes(), state.m_z());
  for (const auto& layer : state.phi_z) z_sum += layer;
  return state.phi_w.transpose() * z_sum;
}

Eigen::MatrixXd update_w(const VariationalState& state, const Eigen::MatrixXd& log_tau) {
  Eigen::MatrixXd z_sum = Eigen::MatrixXd::Zero(state.num_nodes(), state.m_z());
  for (const auto& layer : state.phi_z) z_sum += layer;
  Eigen::MatrixXd logits = z_sum * expected_log_gamma(state).transpose() + log_tau;
  normalize_log_rows(logits);
  return logits;
}

Eigen::MatrixXd update_w(const VariationalState& state, const CovariateMatrix& covariates,
                         const GaussHermiteRule& rule, int threads) {
  return update_w(state, expected_log_tau(probit_table(state, covariates, rule, threads)));
}

std::vector<Eigen::MatrixXd> update_z(const VariationalState& state, const MultiplexNetwork& network, int threads) {
  const int n = network.num_nodes();
  const int mz = state.m_z();
  const RhoExpectations rho = expected_log_rho(state);
  const Eigen::MatrixXd diff = rho.log_rho - rho.log_1m_rho;
  const Eigen::MatrixXd prior = state.phi_w * expected_log_gamma(state);  // N x M_z
  std::vector<Eigen::MatrixXd> out = state.phi_z;
  parallel_for(out.size(), threads, [&](std::size_t l) {
    Eigen::MatrixXd& z = out[l];
    Eigen::RowVectorXd col = z.colwise().sum();
    Eigen::RowVectorXd out_mass(mz), in_mass(mz), logits(mz);
    for (int i = 0; i < n; ++i) {
      out_mass.setZero();
      in_mass.setZero();
      const auto row = network.row(static_cast<int>(l), i);
      for (int j = 0; j < n; ++j) {
        if (row[j]) out_mass += z.row(j);
        if (network.edge(static_cast<int>(l), j, i)) in_mass += z.row(j);
      }
      const Eigen::RowVectorXd others = col - z.row(i);
      // Out-edges i -> j use rho(k, m); in-edges j -> i use rho(m, k).
      logits = prior.row(i);
      logits += others * rho.log_1m_rho.transpose() + out_mass * diff.transpose();
      logits += others * rho.log_1m_rho + in_mass * diff;
      normalize_log_row(logits);
      col += logits - z.row(i);
      z.row(i) = logits;
    }
  });
  return out;
}

BetaParams update_rho(const VariationalState& state, const MultiplexNetwork& network, const Hyperparameters& hyper,
                      int threads) {
  const BlockCounts c = block_counts(state, network, threads);
  return {c.edges.array() + hyper.alpha0, c.non_edges.array() + hyper.beta0};
}

BetaParams update_gamma(const VariationalState& state, const Hyperparameters& hyper) {
  const Eigen::MatrixXd c = group_counts(state);
  BetaParams out{c.array() + 1.0, Eigen::MatrixXd::Constant(c.rows(), c.cols(), hyper.eta0)};
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    double tail = 0.0;
    for (Eigen::Index s = c.cols() - 1; s >= 0; --s) {
      out.b(k, s) += tail;
      tail += c(k, s);
    }
  }
  return out;
}

Phi0Params update_phi0(const VariationalState& state, const Hyperparameters& hyper) {
  const int mw = state.m_w();
  const int p = state.num_features();
  const Eigen::VectorXd mu = hyper.prior_mean(p);
  Phi0Params out{Eigen::MatrixXd(mw, p), {}};
  for (int k = 0; k < mw; ++k) {
    const double nu = state.nu(k);
    const double omega = state.omega(k);
    out.theta.row(k) = (nu * state.theta_phi.row(k) + omega * mu.transpose()) / (nu + omega);
    out.sigma.push_back(omega / (nu + omega) * Eigen::MatrixXd::Identity(p, p));
  }
  return out;
}

Sigma2Params update_sigma2(const VariationalState& state, const Hyperparameters& hyper) {
  const int mw = state.m_w();
  const int p = state.num_features();
  Sigma2Params out{Eigen::VectorXd::Constant(mw, hyper.nu0 + 0.5 * p), Eigen::VectorXd(mw)};
  for (int k = 0; k < mw; ++k) {
    const double spread = (state.theta_phi.row(k) - state.theta_phi0.row(k)).squaredNorm() +
                          state.sigma_phi(k).trace() + state.sigma_phi0[k].trace();
    out.omega(k) = hyper.omega0 + 0.5 * spread;
  }
  return out;
}

}  // namespace hmpsbm
