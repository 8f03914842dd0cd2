#include "hmpsbm/fit.hpp"

#include <chrono>
#include <cmath>

#include "hmpsbm/elbo.hpp"
#include "hmpsbm/errors.hpp"
#include "hmpsbm/evaluation.hpp"
#include "hmpsbm/gradients.hpp"
#include "hmpsbm/log_cholesky.hpp"
#include "hmpsbm/updates.hpp"

namespace hmpsbm {

void FitConfig::validate() const {
  truncation.validate();
  if (max_iterations < 1) throw ValidationError("max_iterations must be positive");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (!(inner_tolerance >= 0.0)) throw ValidationError("inner_tolerance must be nonnegative");
  if (max_steps < 1 || max_decreases < 0) throw ValidationError("step limits must be positive");
  if (quadrature_nodes < 1 || monte_carlo_samples < 1) throw ValidationError("sample counts must be positive");
  if (threads < 1) throw ValidationError("threads must be positive");
  adam_theta.validate();
  adam_sigma.validate();
}

PhiOptimizerState PhiOptimizerState::zeros(int m_w, int num_features) {
  PhiOptimizerState s;
  s.theta.assign(m_w, AdamState::zeros(num_features, 1));
  s.sigma.assign(m_w, AdamState::zeros(num_features, num_features));
  return s;
}

PhiStepStats optimize_phi_k(int k, VariationalState& state, const CovariateMatrix& covariates,
                            const FitConfig& config, const GaussHermiteRule& rule, PhiOptimizerState& optimizer) {
  PhiStepStats stats;
  Eigen::MatrixXd theta_best = state.theta_phi.row(k).transpose();
  Eigen::MatrixXd b_best = state.log_chol_phi[k];
  PhiBlockEval best = evaluate_phi_block(k, state, covariates, rule, theta_best, b_best, true, config.threads);
  stats.entry_value = best.value;

  const auto accept_small_gain = [&](double gain, double value) {
    return gain <= config.inner_tolerance * std::abs(value);
  };

  // theta with Sigma held at its best value.
  {
    AdamState adam = optimizer.theta[k];
    Eigen::MatrixXd curr = theta_best;
    PhiBlockEval at_curr = best;
    int decreases = 0;
    while (stats.theta_steps < config.max_steps) {
      if (!at_curr.grad_theta.allFinite()) {
        stats.non_finite = true;
        break;
      }
      ++stats.theta_steps;
      adam_step(curr, -at_curr.grad_theta, adam, config.adam_theta);
      at_curr = evaluate_phi_block(k, state, covariates, rule, curr, b_best, true, config.threads);
      if (!std::isfinite(at_curr.value)) {
        stats.non_finite = true;
        break;
      }
      if (at_curr.value > best.value) {
        const double gain = at_curr.value - best.value;
        best = at_curr;
        theta_best = curr;
        optimizer.theta[k] = adam;
        ++stats.theta_accepted;
        if (accept_small_gain(gain, best.value)) break;
      } else if (++decreases > config.max_decreases) {
        break;
      }
    }
  }

  // B with theta held at its best value.
  {
    AdamState adam = optimizer.sigma[k];
    Eigen::MatrixXd curr = b_best;
    PhiBlockEval at_curr = best;
    int decreases = 0;
    while (stats.sigma_steps < config.max_steps) {
      const Eigen::MatrixXd grad = grad_log_chol(at_curr.grad_sigma, curr);
      if (!grad.allFinite()) {
        stats.non_finite = true;
        break;
      }
      ++stats.sigma_steps;
      adam_step(curr, -grad, adam, config.adam_sigma);
      at_curr = evaluate_phi_block(k, state, covariates, rule, theta_best, curr, true, config.threads);
      if (!std::isfinite(at_curr.value)) {
        stats.non_finite = true;
        break;
      }
      if (at_curr.value > best.value) {
        const double gain = at_curr.value - best.value;
        best = at_curr;
        b_best = curr;
        optimizer.sigma[k] = adam;
        ++stats.sigma_accepted;
        if (accept_small_gain(gain, best.value)) break;
      } else if (++decreases > config.max_decreases) {
        break;
      }
    }
  }

  state.theta_phi.row(k) = theta_best.transpose();
  state.log_chol_phi[k] = b_best;
  stats.exit_value = best.value;
  return stats;
}

FitResult fit(const MultiplexNetwork& network, const CovariateMatrix& covariates, const Hyperparameters& hyper,
              const FitConfig& config, VariationalState initial) {
  config.validate();
  covariates.validate(network.num_nodes());
  const int p = covariates.num_features();
  hyper.validate(p);
  initial.validate(network.num_layers(), network.num_nodes(), p);
  if (initial.m_w() != config.truncation.m_w || initial.m_z() != config.truncation.m_z) {
    throw ShapeError("initial state truncations differ from the configuration");
  }

  const GaussHermiteRule& rule = gauss_hermite_rule(config.quadrature_nodes);
  const int threads = config.threads;
  FitResult result{std::move(initial), {}};
  VariationalState& state = result.state;
  FitReport& report = result.report;
  PhiOptimizerState optimizer = PhiOptimizerState::zeros(state.m_w(), p);

  const auto full_elbo = [&] { return elbo(state, network, covariates, hyper, rule, threads); };
  double previous = full_elbo();
  report.elbo_trace.push_back(previous);

  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    const auto start = std::chrono::steady_clock::now();
    const auto record = [&](const char* step) {
      if (config.record_substeps) report.substeps.push_back({iteration, step, full_elbo()});
    };

    BetaParams rho = update_rho(state, network, hyper, threads);
    state.rho_a = std::move(rho.a);
    state.rho_b = std::move(rho.b);
    record("rho");

    BetaParams gamma = update_gamma(state, hyper);
    state.gamma_a = std::move(gamma.a);
    state.gamma_b = std::move(gamma.b);
    record("gamma");

    Phi0Params phi0 = update_phi0(state, hyper);
    state.theta_phi0 = std::move(phi0.theta);
    state.sigma_phi0 = std::move(phi0.sigma);
    record("phi0");

    for (int k = 0; k < state.m_w(); ++k) {
      report.phi_steps.push_back(optimize_phi_k(k, state, covariates, config, rule, optimizer));
      report.non_finite_gradient = report.non_finite_gradient || report.phi_steps.back().non_finite;
    }
    record("phi");

    Sigma2Params sigma2 = update_sigma2(state, hyper);
    state.nu = std::move(sigma2.nu);
    state.omega = std::move(sigma2.omega);
    record("sigma2");

    state.phi_z = update_z(state, network, threads);
    record("z");

    state.phi_w = update_w(state, covariates, rule, threads);

    const double current = config.record_substeps ? (record("w"), report.substeps.back().elbo) : full_elbo();
    report.elbo_trace.push_back(current);
    report.sweep_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    report.iterations = iteration;

    const double scale = std::max(std::abs(previous), 1e-300);
    if (std::abs(current - previous) / scale < config.tolerance) {
      report.converged = true;
      break;
    }
    previous = current;
  }

  const ClusteringResult labels = extract_assignments(state);
  report.occupied_global = labels.occupied_global;
  for (const auto& layer : labels.layer_labels) report.occupied_layer.push_back(count_distinct(layer));
  return result;
}

}  // namespace hmpsbm
