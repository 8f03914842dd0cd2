#include "hmpsbm/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/probit.hpp"

namespace hmpsbm {
namespace {

GaussHermiteRule build_rule(int n) {
  // Jacobi matrix of the probabilists' Hermite polynomials: zero diagonal,
  // off-diagonal sqrt(k). Eigenvalues are the nodes; the squared first
  // components of the normalised eigenvectors are the weights.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int j = 0; j < n; ++j) {
    rule.nodes[j] = solver.eigenvalues()(j);
    const double v0 = solver.eigenvectors()(0, j);
    rule.weights[j] = v0 * v0;
  }
  // Enforce the exact symmetry of the rule so E[h] = E[g] at m = 0 holds to round-off.
  for (int j = 0; j < n / 2; ++j) {
    const int r = n - 1 - j;
    const double x = 0.5 * (rule.nodes[r] - rule.nodes[j]);
    const double w = 0.5 * (rule.weights[r] + rule.weights[j]);
    rule.nodes[j] = -x;
    rule.nodes[r] = x;
    rule.weights[j] = w;
    rule.weights[r] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(int num_nodes) {
  if (num_nodes < 1) throw ValidationError("quadrature needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[num_nodes];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(build_rule(num_nodes));
  return *slot;
}

GaussExpectations gauss_expectations_1d(double mean, double variance, const GaussHermiteRule& rule) {
  GaussExpectations e;
  if (variance <= 0.0) {
    const auto [h, g] = log_cdf_pair(mean);
    return {h.value, g.value, h.d1, g.d1, h.d2, g.d2, h.d2, g.d2};
  }
  const double sd = std::sqrt(variance);
  for (int j = 0; j < rule.size(); ++j) {
    const double s = mean + sd * rule.nodes[j];
    const double w = rule.weights[j];
    const auto [h, g] = log_cdf_pair(s);
    e.e_log_phi += w * h.value;
    e.e_log_1m_phi += w * g.value;
    e.e_d1 += w * h.d1;
    e.e_d1m += w * g.d1;
    e.e_d2 += w * h.d2;
    e.e_d2m += w * g.d2;
    e.dv2 += w * h.d1 * rule.nodes[j];
    e.dv2m += w * g.d1 * rule.nodes[j];
  }
  e.dv2 /= sd;
  e.dv2m /= sd;
  return e;
}

GaussExpectations gauss_expectations(const Eigen::VectorXd& x, const Eigen::VectorXd& theta,
                                     const Eigen::MatrixXd& sigma_factor, const GaussHermiteRule& rule) {
  if (x.size() != theta.size() || sigma_factor.rows() != x.size() || sigma_factor.cols() != x.size()) {
    throw ShapeError("gauss_expectations: dimension mismatch");
  }
  const double m = x.dot(theta);
  const double v = (sigma_factor.transpose() * x).squaredNorm();
  return gauss_expectations_1d(m, v, rule);
}

}  // namespace hmpsbm
