#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>

namespace hmpsbm::oracle {
namespace {

using boost::math::digamma;

Eigen::RowVectorXd random_simplex(int size, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0, 1.0);
  Eigen::RowVectorXd row(size);
  for (int j = 0; j < size; ++j) row(j) = g(rng) + 1e-3;
  return row / row.sum();
}

// Visits every assignment of `radices.size()` variables, the first varying fastest.
template <typename Visit>
void for_each_assignment(const std::vector<int>& radices, Visit&& visit) {
  std::vector<int> digits(radices.size(), 0);
  while (true) {
    visit(digits);
    std::size_t pos = 0;
    while (pos < digits.size()) {
      if (++digits[pos] < radices[pos]) break;
      digits[pos] = 0;
      ++pos;
    }
    if (pos == digits.size()) return;
  }
}

Eigen::RowVectorXd normalise_log(const Eigen::RowVectorXd& log_weights) {
  const double top = log_weights.maxCoeff();
  Eigen::RowVectorXd p = (log_weights.array() - top).exp();
  return p / p.sum();
}

// Enumerates all discrete labellings with one variable pinned and returns
// E_q[f | pinned = value] for every value.
//   slot < N       : w_slot
//   slot = N + l*N + i : z_li
Eigen::RowVectorXd conditional_by_enumeration(const VariationalState& state, const MultiplexNetwork& network,
                                              const ExpectedLogs& logs, int pinned) {
  const int n = state.num_nodes();
  const int layers = state.num_layers();
  const int total = n + layers * n;
  std::vector<int> radices;
  std::vector<int> slots;
  for (int v = 0; v < total; ++v) {
    if (v == pinned) continue;
    slots.push_back(v);
    radices.push_back(v < n ? state.m_w() : state.m_z());
  }
  const int values = pinned < n ? state.m_w() : state.m_z();
  auto prob_of = [&](int slot, int label) {
    if (slot < n) return state.phi_w(slot, label);
    const int l = (slot - n) / n;
    const int i = (slot - n) % n;
    return state.phi_z[l](i, label);
  };

  Eigen::RowVectorXd expected = Eigen::RowVectorXd::Zero(values);
  std::vector<int> w(n, 0);
  std::vector<std::vector<int>> z(layers, std::vector<int>(n, 0));
  auto set_slot = [&](int slot, int label) {
    if (slot < n) w[slot] = label;
    else z[(slot - n) / n][(slot - n) % n] = label;
  };
  for_each_assignment(radices, [&](const std::vector<int>& digits) {
    double weight = 1.0;
    for (std::size_t j = 0; j < slots.size(); ++j) {
      weight *= prob_of(slots[j], digits[j]);
      set_slot(slots[j], digits[j]);
    }
    if (weight == 0.0) return;
    for (int value = 0; value < values; ++value) {
      set_slot(pinned, value);
      expected(value) += weight * expected_complete_log_lik(w, z, network, logs);
    }
  });
  return normalise_log(expected);
}

}  // namespace

TinyShape random_shape(Engine& rng, int max_layers, int max_nodes, int max_features, int max_m) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  TinyShape s;
  s.layers = pick(1, max_layers);
  s.nodes = pick(2, max_nodes);
  s.features = pick(1, max_features);
  s.m_w = pick(1, max_m);
  s.m_z = pick(1, max_m);
  return s;
}

MultiplexNetwork random_network(int layers, int nodes, double density, Engine& rng) {
  MultiplexNetwork net(layers, nodes);
  std::bernoulli_distribution edge(density);
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i < nodes; ++i) {
      for (int j = 0; j < nodes; ++j) {
        if (i != j && edge(rng)) net.set_edge(l, i, j);
      }
    }
  }
  return net;
}

CovariateMatrix random_covariates(int nodes, int features, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CovariateMatrix x;
  x.values.resize(nodes, features);
  x.values.col(0).setOnes();
  for (int i = 0; i < nodes; ++i) {
    for (int p = 1; p < features; ++p) x.values(i, p) = normal(rng);
  }
  x.includes_intercept = true;
  return x;
}

Hyperparameters random_hyper(int features, Engine& rng) {
  std::uniform_real_distribution<double> u(0.5, 3.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Hyperparameters h;
  h.alpha0 = u(rng);
  h.beta0 = u(rng);
  h.eta0 = u(rng);
  h.nu0 = u(rng);
  h.omega0 = u(rng);
  h.mu.resize(features);
  for (int p = 0; p < features; ++p) h.mu(p) = 0.5 * normal(rng);
  return h;
}

VariationalState random_state(int layers, int nodes, int features, const TruncationConfig& truncation,
                              Engine& rng) {
  const int mw = truncation.m_w;
  const int mz = truncation.m_z;
  std::uniform_real_distribution<double> shape(0.5, 6.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> log_diag(-1.0, 0.2);

  VariationalState s;
  s.phi_w.resize(nodes, mw);
  for (int i = 0; i < nodes; ++i) s.phi_w.row(i) = random_simplex(mw, rng);
  s.phi_z.assign(layers, Eigen::MatrixXd(nodes, mz));
  for (auto& layer : s.phi_z) {
    for (int i = 0; i < nodes; ++i) layer.row(i) = random_simplex(mz, rng);
  }
  auto beta_matrix = [&](int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = shape(rng);
    }
    return m;
  };
  s.rho_a = beta_matrix(mz, mz);
  s.rho_b = beta_matrix(mz, mz);
  s.gamma_a = beta_matrix(mw, mz);
  s.gamma_b = beta_matrix(mw, mz);
  s.theta_phi.resize(mw, features);
  s.theta_phi0.resize(mw, features);
  for (int k = 0; k < mw; ++k) {
    for (int p = 0; p < features; ++p) {
      s.theta_phi(k, p) = 0.7 * normal(rng);
      s.theta_phi0(k, p) = 0.7 * normal(rng);
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(features, features);
    for (int r = 0; r < features; ++r) {
      b(r, r) = log_diag(rng);
      for (int c = 0; c < r; ++c) b(r, c) = 0.3 * normal(rng);
    }
    s.log_chol_phi.push_back(b);
    Eigen::MatrixXd a(features, features);
    for (int r = 0; r < features; ++r) {
      for (int c = 0; c < features; ++c) a(r, c) = normal(rng);
    }
    s.sigma_phi0.push_back(a * a.transpose() / features + 0.2 * Eigen::MatrixXd::Identity(features, features));
  }
  s.nu.resize(mw);
  s.omega.resize(mw);
  for (int k = 0; k < mw; ++k) {
    s.nu(k) = shape(rng);
    s.omega(k) = shape(rng);
  }
  return s;
}

TinyInstance random_tiny_instance(const TinyShape& shape, std::uint64_t seed) {
  Engine rng(seed);
  TinyInstance t;
  t.network = random_network(shape.layers, shape.nodes, 0.45, rng);
  t.covariates = random_covariates(shape.nodes, shape.features, rng);
  t.hyper = random_hyper(shape.features, rng);
  t.state = random_state(shape.layers, shape.nodes, shape.features, {shape.m_w, shape.m_z}, rng);
  return t;
}

double normal_expectation(const std::function<double(double)>& f, double mean, double variance) {
  if (variance <= 0.0) return f(mean);
  const double sd = std::sqrt(variance);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto integrand = [&](double t) { return f(mean + sd * t) * norm * std::exp(-0.5 * t * t); };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -12.0, 12.0, 20, 1e-15, &error);
}

HermiteRule hermite_rule_newton(int n) {
  // Physicists' rule (weight exp(-x^2)), then x -> sqrt(2) x.
  HermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Orthonormal recurrence: p_j = z sqrt(2/j) p_{j-1} - sqrt((j-1)/j) p_{j-2}.
      double p1 = std::pow(std::numbers::pi, -0.25), p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.weights[i] = 2.0 / (pp * pp);
  }
  HermiteRule out;
  out.nodes.assign(n, 0.0);
  out.weights.assign(n, 0.0);
  for (int i = 0; i < half; ++i) {
    out.nodes[n - 1 - i] = std::numbers::sqrt2 * rule.nodes[i];
    out.nodes[i] = -out.nodes[n - 1 - i];
    out.weights[i] = out.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) out.nodes[n / 2] = 0.0;
  double total = 0.0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  return out;
}

double normal_expectation(const std::function<double(double)>& f, double mean, double variance,
                          const HermiteRule& rule) {
  const double sd = std::sqrt(std::max(variance, 0.0));
  double total = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) total += rule.weights[j] * f(mean + sd * rule.nodes[j]);
  return total;
}

double log_cdf(double s) {
  if (s < -30.0) {
    // log Phi(s) ~ log pdf(s) - log(-s) + log(1 - 1/s^2 + 3/s^4 - 15/s^6)
    const double inv = 1.0 / (s * s);
    return -0.5 * s * s - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-s) +
           std::log1p(-inv + 3.0 * inv * inv - 15.0 * inv * inv * inv);
  }
  return std::log(0.5 * std::erfc(-s / std::numbers::sqrt2));
}

double log_ccdf(double s) { return log_cdf(-s); }

ExpectedLogs expected_logs(const VariationalState& state, const CovariateMatrix& covariates, int quadrature_nodes) {
  const HermiteRule rule = quadrature_nodes > 0 ? hermite_rule_newton(quadrature_nodes) : HermiteRule{};
  auto expect = [&](double (*f)(double), double mean, double var) {
    return quadrature_nodes > 0 ? normal_expectation(f, mean, var, rule) : normal_expectation(f, mean, var);
  };
  const int mz = state.m_z();
  const int mw = state.m_w();
  const int n = state.num_nodes();
  ExpectedLogs e;
  e.log_rho.resize(mz, mz);
  e.log_1m_rho.resize(mz, mz);
  for (int k = 0; k < mz; ++k) {
    for (int m = 0; m < mz; ++m) {
      const double a = state.rho_a(k, m);
      const double b = state.rho_b(k, m);
      e.log_rho(k, m) = digamma(a) - digamma(a + b);
      e.log_1m_rho(k, m) = digamma(b) - digamma(a + b);
    }
  }
  e.log_gamma.resize(mw, mz);
  for (int k = 0; k < mw; ++k) {
    for (int s = 0; s < mz; ++s) {
      double v = digamma(state.gamma_a(k, s)) - digamma(state.gamma_a(k, s) + state.gamma_b(k, s));
      for (int r = 0; r < s; ++r) {
        v += digamma(state.gamma_b(k, r)) - digamma(state.gamma_a(k, r) + state.gamma_b(k, r));
      }
      e.log_gamma(k, s) = v;
    }
  }
  e.log_tau.resize(n, mw);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = covariates.values.row(i).transpose();
    for (int k = 0; k < mw; ++k) {
      double v = 0.0;
      for (int r = 0; r <= k; ++r) {
        const Eigen::MatrixXd sigma = state.sigma_phi(r);
        const double mean = x.dot(state.theta_phi.row(r).transpose());
        const double var = x.dot(sigma * x);
        v += r == k ? expect(log_cdf, mean, var) : expect(log_ccdf, mean, var);
      }
      e.log_tau(i, k) = v;
    }
  }
  return e;
}

double expected_complete_log_lik(const std::vector<int>& w, const std::vector<std::vector<int>>& z,
                                 const MultiplexNetwork& network, const ExpectedLogs& logs) {
  double total = 0.0;
  const int n = network.num_nodes();
  for (int l = 0; l < network.num_layers(); ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int a = z[l][i];
        const int b = z[l][j];
        total += network.edge(l, i, j) ? logs.log_rho(a, b) : logs.log_1m_rho(a, b);
      }
      total += logs.log_gamma(w[i], z[l][i]);
    }
  }
  for (int i = 0; i < n; ++i) total += logs.log_tau(i, w[i]);
  return total;
}

Eigen::RowVectorXd cond_z(const VariationalState& state, const MultiplexNetwork& network,
                          const CovariateMatrix& covariates, int layer, int node, int quadrature_nodes) {
  const ExpectedLogs logs = expected_logs(state, covariates, quadrature_nodes);
  const int n = state.num_nodes();
  return conditional_by_enumeration(state, network, logs, n + layer * n + node);
}

Eigen::RowVectorXd cond_w(const VariationalState& state, const MultiplexNetwork& network,
                          const CovariateMatrix& covariates, int node, int quadrature_nodes) {
  const ExpectedLogs logs = expected_logs(state, covariates, quadrature_nodes);
  return conditional_by_enumeration(state, network, logs, node);
}

BetaParams cond_rho(const VariationalState& state, const MultiplexNetwork& network, const Hyperparameters& hyper) {
  const int mz = state.m_z();
  BetaParams out{Eigen::MatrixXd::Constant(mz, mz, hyper.alpha0), Eigen::MatrixXd::Constant(mz, mz, hyper.beta0)};
  for (int l = 0; l < network.num_layers(); ++l) {
    for (int i = 0; i < network.num_nodes(); ++i) {
      for (int j = 0; j < network.num_nodes(); ++j) {
        if (i == j) continue;
        for (int k = 0; k < mz; ++k) {
          for (int m = 0; m < mz; ++m) {
            const double mass = state.phi_z[l](i, k) * state.phi_z[l](j, m);
            if (network.edge(l, i, j)) out.a(k, m) += mass;
            else out.b(k, m) += mass;
          }
        }
      }
    }
  }
  return out;
}

BetaParams cond_gamma(const VariationalState& state, const Hyperparameters& hyper) {
  const int mw = state.m_w();
  const int mz = state.m_z();
  BetaParams out{Eigen::MatrixXd::Ones(mw, mz), Eigen::MatrixXd::Constant(mw, mz, hyper.eta0)};
  for (int k = 0; k < mw; ++k) {
    for (int s = 0; s < mz; ++s) {
      for (int l = 0; l < state.num_layers(); ++l) {
        for (int i = 0; i < state.num_nodes(); ++i) {
          out.a(k, s) += state.phi_z[l](i, s) * state.phi_w(i, k);
          for (int r = s + 1; r < mz; ++r) out.b(k, s) += state.phi_z[l](i, r) * state.phi_w(i, k);
        }
      }
    }
  }
  return out;
}

GaussianParams cond_phi0(const VariationalState& state, const Hyperparameters& hyper, int k) {
  const int p = state.num_features();
  const Eigen::VectorXd mu = hyper.mu.size() == 0 ? Eigen::VectorXd::Zero(p) : hyper.mu;
  const double nu = state.nu(k);
  const double omega = state.omega(k);
  GaussianParams g;
  g.mean = (nu * state.theta_phi.row(k).transpose() + omega * mu) / (nu + omega);
  g.covariance = omega / (nu + omega) * Eigen::MatrixXd::Identity(p, p);
  return g;
}

InverseGammaParams cond_sigma2(const VariationalState& state, const Hyperparameters& hyper, int k) {
  const int p = state.num_features();
  const Eigen::VectorXd diff = state.theta_phi.row(k) - state.theta_phi0.row(k);
  InverseGammaParams g;
  g.shape = hyper.nu0 + 0.5 * p;
  g.scale = hyper.omega0 + 0.5 * diff.dot(diff) + 0.5 * state.sigma_phi(k).trace() + 0.5 * state.sigma_phi0[k].trace();
  return g;
}

McGaussExpectations mc_gauss_expectations(double mean, double variance, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(variance);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  double sum[6] = {};
  double sum_sq[6] = {};
  for (int n = 0; n < samples; ++n) {
    const double s = mean + sd * normal(rng);
    const double pdf = inv_sqrt_2pi * std::exp(-0.5 * s * s);
    const double cdf = 0.5 * std::erfc(-s / std::numbers::sqrt2);
    const double ccdf = 0.5 * std::erfc(s / std::numbers::sqrt2);
    const double r = pdf / cdf;    // d/ds log Phi
    const double rm = -pdf / ccdf; // d/ds log(1 - Phi)
    const double v[6] = {log_cdf(s), log_ccdf(s), r, rm, -r * (s + r), -rm * (s + rm)};
    for (int q = 0; q < 6; ++q) {
      sum[q] += v[q];
      sum_sq[q] += v[q] * v[q];
    }
  }
  McEstimate e[6];
  for (int q = 0; q < 6; ++q) {
    const double m = sum[q] / samples;
    const double var = (sum_sq[q] - samples * m * m) / (samples - 1);
    e[q] = {m, std::sqrt(std::max(var, 0.0) / samples)};
  }
  return {e[0], e[1], e[2], e[3], e[4], e[5]};
}

Eigen::MatrixXd finite_diff(const std::function<double(const Eigen::MatrixXd&)>& f, const Eigen::MatrixXd& x,
                            double step) {
  Eigen::MatrixXd grad(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      auto at = [&](double offset) {
        Eigen::MatrixXd y = x;
        y(r, c) += offset;
        return f(y);
      };
      grad(r, c) = (-at(2 * step) + 8 * at(step) - 8 * at(-step) + at(-2 * step)) / (12 * step);
    }
  }
  return grad;
}

std::vector<double> brute_force_discrete_posterior(const MultiplexNetwork& network, const Eigen::MatrixXd& rho,
                                                   const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& tau) {
  const int n = network.num_nodes();
  const int layers = network.num_layers();
  const int mw = static_cast<int>(gamma.rows());
  const int mz = static_cast<int>(rho.rows());
  std::vector<int> radices(n, mw);
  radices.insert(radices.end(), static_cast<std::size_t>(layers * n), mz);
  std::vector<double> log_post;
  for_each_assignment(radices, [&](const std::vector<int>& d) {
    double lp = 0.0;
    for (int i = 0; i < n; ++i) lp += std::log(tau(i, d[i]));
    for (int l = 0; l < layers; ++l) {
      const int* z = d.data() + n + l * n;
      for (int i = 0; i < n; ++i) {
        lp += std::log(gamma(d[i], z[i]));
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const double p = rho(z[i], z[j]);
          lp += network.edge(l, i, j) ? std::log(p) : std::log1p(-p);
        }
      }
    }
    log_post.push_back(lp);
  });
  double top = -std::numeric_limits<double>::infinity();
  for (double v : log_post) top = std::max(top, v);
  double total = 0.0;
  for (double& v : log_post) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : log_post) v /= total;
  return log_post;
}

}  // namespace hmpsbm::oracle
