#include "hmpsbm/log_joint.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/probit.hpp"

namespace hmpsbm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// x * log(y) with 0 * log(0) = 0.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

double log_beta_fn(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double log_beta_density(double v, double a, double b) {
  if (v < 0.0 || v > 1.0) return kNegInf;
  return xlogy(a - 1.0, v) + xlogy(b - 1.0, 1.0 - v) - log_beta_fn(a, b);
}

void check_shapes(const JointPoint& p, const MultiplexNetwork& net, const CovariateMatrix& x) {
  const auto n = static_cast<std::size_t>(net.num_nodes());
  const auto mw = p.phi.rows();
  const auto mz = p.rho.rows();
  if (p.global_groups.size() != n || p.layer_groups.size() != static_cast<std::size_t>(net.num_layers())) {
    throw ShapeError("label arrays do not match the network");
  }
  if (p.rho.cols() != mz || p.gamma_breaks.rows() != mw || p.gamma_breaks.cols() != mz ||
      p.phi0.rows() != mw || p.phi0.cols() != p.phi.cols() || p.sigma2.size() != mw ||
      p.phi.cols() != x.num_features()) {
    throw ShapeError("parameter shapes are inconsistent");
  }
  x.validate(net.num_nodes());
  for (int w : p.global_groups) {
    if (w < 0 || w >= mw) throw ValidationError("global label outside the truncation");
  }
  for (const auto& layer : p.layer_groups) {
    if (layer.size() != n) throw ShapeError("layer label row has the wrong length");
    for (int z : layer) {
      if (z < 0 || z >= mz) throw ValidationError("layer label outside the truncation");
    }
  }
}

}  // namespace

double LogJointTerms::total() const {
  return likelihood + layer_groups + global_groups + phi + phi0 + sigma2 + gamma + rho;
}

double log_stick_probability(const Eigen::VectorXd& x, const Eigen::MatrixXd& phi, int group) {
  double out = log_normal_cdf(phi.row(group).dot(x));
  for (int k = 0; k < group; ++k) out += log_normal_cdf(-phi.row(k).dot(x));
  return out;
}

LogJointTerms log_joint_terms(const JointPoint& p, const MultiplexNetwork& net, const CovariateMatrix& x,
                              const Hyperparameters& hyper) {
  check_shapes(p, net, x);
  const int n = net.num_nodes();
  const int num_features = x.num_features();
  const auto mw = p.phi.rows();
  const auto mz = p.rho.rows();
  const Eigen::VectorXd mu = hyper.prior_mean(num_features);
  LogJointTerms t;

  for (int l = 0; l < net.num_layers(); ++l) {
    const auto& z = p.layer_groups[l];
    for (int i = 0; i < n; ++i) {
      const auto row = net.row(l, i);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double r = p.rho(z[i], z[j]);
        t.likelihood += row[j] ? xlogy(1.0, r) : xlogy(1.0, 1.0 - r);
      }
    }
  }

  for (int l = 0; l < net.num_layers(); ++l) {
    for (int i = 0; i < n; ++i) {
      const int w = p.global_groups[i];
      const int k = p.layer_groups[l][i];
      t.layer_groups += std::log(p.gamma_breaks(w, k));
      for (int r = 0; r < k; ++r) t.layer_groups += std::log1p(-p.gamma_breaks(w, r));
    }
  }

  for (int i = 0; i < n; ++i) {
    t.global_groups += log_stick_probability(x.values.row(i).transpose(), p.phi, p.global_groups[i]);
  }

  for (Eigen::Index k = 0; k < mw; ++k) {
    const double s2 = p.sigma2(k);
    const double dev = (p.phi.row(k) - p.phi0.row(k)).squaredNorm();
    t.phi += -0.5 * num_features * (kLog2Pi + std::log(s2)) - 0.5 * dev / s2;
    t.phi0 += -0.5 * num_features * kLog2Pi - 0.5 * (p.phi0.row(k).transpose() - mu).squaredNorm();
    t.sigma2 += hyper.nu0 * std::log(hyper.omega0) - std::lgamma(hyper.nu0) -
                (hyper.nu0 + 1.0) * std::log(s2) - hyper.omega0 / s2;
    for (Eigen::Index s = 0; s < mz; ++s) t.gamma += log_beta_density(p.gamma_breaks(k, s), 1.0, hyper.eta0);
  }
  for (Eigen::Index a = 0; a < mz; ++a) {
    for (Eigen::Index b = 0; b < mz; ++b) t.rho += log_beta_density(p.rho(a, b), hyper.alpha0, hyper.beta0);
  }
  return t;
}

double log_joint(const JointPoint& point, const MultiplexNetwork& network, const CovariateMatrix& covariates,
                 const Hyperparameters& hyper) {
  const double v = log_joint_terms(point, network, covariates, hyper).total();
  return std::isnan(v) ? kNegInf : v;
}

}  // namespace hmpsbm
