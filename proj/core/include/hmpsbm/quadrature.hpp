#pragma once

#include <vector>

#include <Eigen/Dense>

namespace hmpsbm {

/// Gauss-Hermite rule for expectations under a standard normal:
/// E[f(Z)] ~= sum_j weights[j] f(nodes[j]), weights summing to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Golub-Welsch construction. Rules are cached per size; the returned
/// reference stays valid for the program's lifetime.
const GaussHermiteRule& gauss_hermite_rule(int num_nodes);

/// Expectations of h(s) = log Phi(s), g(s) = log(1 - Phi(s)) and their first
/// two derivatives for s ~ Normal(m, v).
struct GaussExpectations {
  double e_log_phi = 0.0;
  double e_log_1m_phi = 0.0;
  double e_d1 = 0.0;
  double e_d1m = 0.0;
  double e_d2 = 0.0;
  double e_d2m = 0.0;
  // 2 d/dv of the quadrature values of E[h] and E[g]. Both tend to e_d2 and
  // e_d2m as the rule grows, but these are the exact variance derivatives of
  // the finite rule.
  double dv2 = 0.0;
  double dv2m = 0.0;
};

/// One-dimensional form. v = 0 reduces to point evaluation at m.
GaussExpectations gauss_expectations_1d(double mean, double variance, const GaussHermiteRule& rule);

/// s = x^T phi with phi ~ Normal(theta, L L^T), i.e. m = x^T theta and v = |L^T x|^2.
/// The gradient expectations of the probit terms follow from these by
/// E[grad_theta h] = x E[h'] and E[grad_Sigma h] = 1/2 x x^T E[h''].
GaussExpectations gauss_expectations(const Eigen::VectorXd& x, const Eigen::VectorXd& theta,
                                     const Eigen::MatrixXd& sigma_factor, const GaussHermiteRule& rule);

}  // namespace hmpsbm
