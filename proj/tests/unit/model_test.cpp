// Network container, sampler and the log joint.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/log_joint.hpp"
#include "hmpsbm/network.hpp"
#include "hmpsbm/probit.hpp"
#include "hmpsbm/sampler.hpp"
#include "oracles.hpp"

using namespace hmpsbm;

namespace {

Eigen::MatrixXd study_rho() {
  Eigen::MatrixXd rho(3, 3);
  rho << 0.8, 0.5, 0.2, 0.4, 0.7, 0.05, 0.2, 0.01, 0.6;
  return rho;
}

// Empirical block densities over all layers; NaN for blocks without pairs.
Eigen::MatrixXd block_density(const SampledNetwork& s, int k) {
  Eigen::MatrixXd edges = Eigen::MatrixXd::Zero(k, k), pairs = Eigen::MatrixXd::Zero(k, k);
  const int n = s.network.num_nodes();
  for (int l = 0; l < s.network.num_layers(); ++l) {
    const auto& z = s.truth.layer_groups[l];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        pairs(z[i], z[j]) += 1;
        edges(z[i], z[j]) += s.network.edge(l, i, j);
      }
  }
  return edges.array() / pairs.array();
}

}  // namespace

TEST(Network, RejectsSelfLoopsAndOutOfRange) {
  MultiplexNetwork net(2, 3);
  EXPECT_THROW(net.set_edge(0, 1, 1), ValidationError);
  EXPECT_THROW(net.set_edge(2, 0, 1), ValidationError);
  EXPECT_THROW(net.set_edge(0, 0, 3), ValidationError);
  net.set_edge(1, 2, 0);
  EXPECT_TRUE(net.edge(1, 2, 0));
  EXPECT_FALSE(net.edge(1, 0, 2));
  EXPECT_EQ(net.edge_count(), 1u);
  EXPECT_EQ(net.edge_count(0), 0u);
}

TEST(Network, AggregatedMatrixSumsLayers) {
  Engine rng(1);
  const MultiplexNetwork net = oracle::random_network(3, 6, 0.4, rng);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(6, 6);
  for (int l = 0; l < 3; ++l) sum += net.layer_matrix(l);
  EXPECT_EQ(net.aggregated_matrix(), sum);
  EXPECT_EQ(sum.diagonal().sum(), 0.0);
}

TEST(Covariates, InterceptOnlyAndValidation) {
  const CovariateMatrix x = CovariateMatrix::intercept_only(4);
  EXPECT_EQ(x.num_features(), 1);
  EXPECT_TRUE(x.values.isOnes());
  EXPECT_THROW(x.validate(5), ShapeError);
  CovariateMatrix bad = x;
  bad.values(2, 0) = std::nan("");
  EXPECT_THROW(bad.validate(4), ValidationError);
}

TEST(Sampler, CertainEdgesAllPresent) {
  ExplicitGroups spec{{0, 0}, Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
  const SampledNetwork s = sample_network(2, 1, spec, 7);
  EXPECT_TRUE(s.network.edge(0, 0, 1));
  EXPECT_TRUE(s.network.edge(0, 1, 0));
}

TEST(Sampler, SameSeedIsBitwiseReproducibleAtAnyThreadCount) {
  Eigen::MatrixXd gamma(2, 3);
  gamma << 0.8, 0.1, 0.1, 0.0, 0.5, 0.5;
  const ExplicitGroups spec{split_by_ratio(60, {3, 2}), gamma, study_rho()};
  const SampledNetwork a = sample_network(60, 4, spec, 99, 1);
  const SampledNetwork b = sample_network(60, 4, spec, 99, 4);
  EXPECT_EQ(a.network, b.network);
  EXPECT_EQ(a.truth.layer_groups, b.truth.layer_groups);
  const SampledNetwork c = sample_network(60, 4, spec, 100, 1);
  EXPECT_FALSE(a.network == c.network);
}

TEST(Sampler, BlockDensitiesMatchRhoForTheFirstStudySetting) {
  Eigen::MatrixXd gamma(2, 3);
  gamma << 0.8, 0.1, 0.1, 0.0, 0.5, 0.5;
  const ExplicitGroups spec{split_by_ratio(250, {3, 2}), gamma, study_rho()};
  EXPECT_EQ(std::count(spec.global_groups.begin(), spec.global_groups.end(), 0), 150);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(3, 3);
  for (int seed = 0; seed < 20; ++seed) mean += block_density(sample_network(250, 3, spec, seed), 3);
  mean /= 20.0;
  EXPECT_LE((mean - study_rho()).cwiseAbs().maxCoeff(), 0.03);
}

TEST(Sampler, ConstantRhoDensityWithinThreeStandardErrors) {
  const double p = 0.3;
  const ExplicitGroups spec{std::vector<int>(80, 0), Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Constant(1, 1, p)};
  const SampledNetwork s = sample_network(80, 2, spec, 5);
  const double trials = 2.0 * 80 * 79;
  const double density = static_cast<double>(s.network.edge_count()) / trials;
  EXPECT_LE(std::abs(density - p), 3.0 * std::sqrt(p * (1 - p) / trials));
}

TEST(Sampler, PermutedRhoGivesMatchingBlockDensities) {
  Eigen::MatrixXd gamma(1, 3);
  gamma << 0.5, 0.3, 0.2;
  const std::vector<int> perm{2, 0, 1};  // new label of old group g
  Eigen::MatrixXd rho_p(3, 3), gamma_p(1, 3);
  for (int a = 0; a < 3; ++a) {
    gamma_p(0, perm[a]) = gamma(0, a);
    for (int b = 0; b < 3; ++b) rho_p(perm[a], perm[b]) = study_rho()(a, b);
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3), dp = Eigen::MatrixXd::Zero(3, 3);
  for (int seed = 0; seed < 20; ++seed) {
    d += block_density(sample_network(120, 2, ExplicitGroups{std::vector<int>(120, 0), gamma, study_rho()}, seed), 3);
    dp += block_density(sample_network(120, 2, ExplicitGroups{std::vector<int>(120, 0), gamma_p, rho_p}, seed + 1000), 3);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) EXPECT_NEAR(d(a, b) / 20, dp(perm[a], perm[b]) / 20, 0.03);
}

TEST(Sampler, CovariateDrivenGroupsFollowTheProbitSticks) {
  CovariateDriven spec;
  spec.covariates = CovariateMatrix::intercept_only(4000);
  spec.phi = Eigen::MatrixXd::Zero(2, 1);  // 1/2, 1/4 and the remainder 1/4 folded into group 1
  spec.gamma = Eigen::MatrixXd::Constant(2, 1, 1.0);
  spec.rho = Eigen::MatrixXd::Constant(1, 1, 0.1);
  const SampledNetwork s = sample_network(4000, 1, spec, 3);
  const double share = std::count(s.truth.global_groups.begin(), s.truth.global_groups.end(), 0) / 4000.0;
  EXPECT_NEAR(share, 0.5, 3 * std::sqrt(0.25 / 4000));
}

TEST(Sampler, RejectsNonStochasticGamma) {
  Eigen::MatrixXd gamma(1, 2);
  gamma << 0.7, 0.7;
  EXPECT_THROW(sample_network(3, 1, ExplicitGroups{{0, 0, 0}, gamma, Eigen::MatrixXd::Constant(2, 2, 0.5)}, 1),
               std::domain_error);
}

TEST(Sampler, SplitByRatio) {
  const auto labels = split_by_ratio(250, {3, 2});
  EXPECT_EQ(labels.size(), 250u);
  EXPECT_EQ(labels[149], 0);
  EXPECT_EQ(labels[150], 1);
  const auto five = split_by_ratio(250, {2, 2, 1});
  EXPECT_EQ(std::count(five.begin(), five.end(), 2), 50);
}

namespace {

JointPoint single_group_point(int layers, int nodes, double rho) {
  JointPoint p;
  p.global_groups.assign(nodes, 0);
  p.layer_groups.assign(layers, std::vector<int>(nodes, 0));
  p.rho = Eigen::MatrixXd::Constant(1, 1, rho);
  p.gamma_breaks = Eigen::MatrixXd::Constant(1, 1, 0.5);
  p.phi = Eigen::MatrixXd::Zero(1, 1);
  p.phi0 = Eigen::MatrixXd::Zero(1, 1);
  p.sigma2 = Eigen::VectorXd::Ones(1);
  return p;
}

JointPoint random_point(const MultiplexNetwork& net, int mw, int mz, int p, Engine& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> gw(0, mw - 1), gz(0, mz - 1);
  JointPoint j;
  const int n = net.num_nodes();
  for (int i = 0; i < n; ++i) j.global_groups.push_back(gw(rng));
  j.layer_groups.assign(net.num_layers(), std::vector<int>(n));
  for (auto& layer : j.layer_groups)
    for (int& z : layer) z = gz(rng);
  j.rho = Eigen::MatrixXd::NullaryExpr(mz, mz, [&] { return u(rng); });
  j.gamma_breaks = Eigen::MatrixXd::NullaryExpr(mw, mz, [&] { return u(rng); });
  j.phi = Eigen::MatrixXd::NullaryExpr(mw, p, [&] { return normal(rng); });
  j.phi0 = Eigen::MatrixXd::NullaryExpr(mw, p, [&] { return normal(rng); });
  j.sigma2 = Eigen::VectorXd::NullaryExpr(mw, [&] { return 0.5 + u(rng); });
  return j;
}

// Term-by-term transcription of the model's densities.
double independent_log_joint(const JointPoint& j, const MultiplexNetwork& net, const CovariateMatrix& x,
                             const Hyperparameters& h) {
  const double log2pi = std::log(2 * std::numbers::pi);
  const int n = net.num_nodes(), p = x.num_features();
  const Eigen::VectorXd mu = h.prior_mean(p);
  double total = 0.0;
  for (int l = 0; l < net.num_layers(); ++l)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (i == k) continue;
        const double r = j.rho(j.layer_groups[l][i], j.layer_groups[l][k]);
        total += net.edge(l, i, k) ? std::log(r) : std::log(1 - r);
      }
  for (int l = 0; l < net.num_layers(); ++l)
    for (int i = 0; i < n; ++i) {
      std::vector<double> breaks(j.gamma_breaks.cols());
      for (Eigen::Index s = 0; s < j.gamma_breaks.cols(); ++s) breaks[s] = j.gamma_breaks(j.global_groups[i], s);
      double stick = 1.0, weight = 0.0;
      for (int s = 0; s <= j.layer_groups[l][i]; ++s) {
        weight = breaks[s] * stick;
        stick *= 1 - breaks[s];
      }
      total += std::log(weight);
    }
  for (int i = 0; i < n; ++i) {
    double stick = 1.0, weight = 0.0;
    for (int k = 0; k <= j.global_groups[i]; ++k) {
      const double b = 0.5 * std::erfc(-j.phi.row(k).dot(x.values.row(i)) / std::numbers::sqrt2);
      weight = b * stick;
      stick *= 1 - b;
    }
    total += std::log(weight);
  }
  for (Eigen::Index k = 0; k < j.phi.rows(); ++k) {
    const double s2 = j.sigma2(k);
    total += -0.5 * p * std::log(2 * std::numbers::pi * s2) - (j.phi.row(k) - j.phi0.row(k)).squaredNorm() / (2 * s2);
    total += -0.5 * p * log2pi - 0.5 * (j.phi0.row(k).transpose() - mu).squaredNorm();
    total += h.nu0 * std::log(h.omega0) - std::lgamma(h.nu0) - (h.nu0 + 1) * std::log(s2) - h.omega0 / s2;
    for (Eigen::Index s = 0; s < j.gamma_breaks.cols(); ++s)
      total += std::log(h.eta0) + (h.eta0 - 1) * std::log(1 - j.gamma_breaks(k, s));
  }
  const double log_b = std::lgamma(h.alpha0) + std::lgamma(h.beta0) - std::lgamma(h.alpha0 + h.beta0);
  for (Eigen::Index a = 0; a < j.rho.rows(); ++a)
    for (Eigen::Index b = 0; b < j.rho.cols(); ++b)
      total += (h.alpha0 - 1) * std::log(j.rho(a, b)) + (h.beta0 - 1) * std::log(1 - j.rho(a, b)) - log_b;
  return total;
}

}  // namespace

TEST(LogJoint, SingleEdgeContributesLogHalf) {
  MultiplexNetwork net(1, 2);
  net.set_edge(0, 0, 1);
  const JointPoint p = single_group_point(1, 2, 0.5);
  const LogJointTerms t = log_joint_terms(p, net, CovariateMatrix::intercept_only(2), {});
  EXPECT_DOUBLE_EQ(t.likelihood, 2 * std::log(0.5));  // one edge, one non-edge
}

TEST(LogJoint, MatchesIndependentTranscription) {
  Engine rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const MultiplexNetwork net = oracle::random_network(2, 3, 0.5, rng);
    const CovariateMatrix x = oracle::random_covariates(3, 2, rng);
    const Hyperparameters h = oracle::random_hyper(2, rng);
    const JointPoint j = random_point(net, 3, 2, 2, rng);
    const double expected = independent_log_joint(j, net, x, h);
    EXPECT_NEAR(log_joint(j, net, x, h), expected, 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST(LogJoint, DoublingLayersDoublesLikelihood) {
  Engine rng(32);
  const MultiplexNetwork one = oracle::random_network(1, 5, 0.4, rng);
  MultiplexNetwork two(2, 5);
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (one.edge(0, i, j)) two.set_edge(l, i, j);
  JointPoint p = random_point(one, 2, 2, 1, rng);
  JointPoint q = p;
  q.layer_groups.push_back(p.layer_groups[0]);
  const CovariateMatrix x = CovariateMatrix::intercept_only(5);
  EXPECT_NEAR(log_joint_terms(q, two, x, {}).likelihood, 2 * log_joint_terms(p, one, x, {}).likelihood, 1e-12);
}

TEST(LogJoint, ZeroProbabilityEventIsNegativeInfinity) {
  MultiplexNetwork net(1, 2);
  net.set_edge(0, 0, 1);
  const JointPoint p = single_group_point(1, 2, 0.0);
  const double v = log_joint(p, net, CovariateMatrix::intercept_only(2), {});
  EXPECT_TRUE(std::isinf(v) && v < 0);
}

TEST(LogJoint, RejectsLabelsOutsideTruncation) {
  MultiplexNetwork net(1, 2);
  JointPoint p = single_group_point(1, 2, 0.5);
  p.layer_groups[0][1] = 1;
  EXPECT_THROW(log_joint(p, net, CovariateMatrix::intercept_only(2), {}), ValidationError);
}

TEST(LogJoint, MovingBlockProbabilityAwayFromEmpiricalMeanLowersIt) {
  Engine rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const MultiplexNetwork net = oracle::random_network(2, 8, 0.35, rng);
    JointPoint p = single_group_point(2, 8, 0.5);
    const double mean = static_cast<double>(net.edge_count()) / (2 * 8 * 7);
    p.rho(0, 0) = mean;
    const CovariateMatrix x = CovariateMatrix::intercept_only(8);
    const double at_mean = log_joint_terms(p, net, x, {}).likelihood;
    p.rho(0, 0) = std::min(0.99, mean + 0.1);
    EXPECT_LT(log_joint_terms(p, net, x, {}).likelihood, at_mean);
    p.rho(0, 0) = std::max(0.01, mean - 0.1);
    EXPECT_LT(log_joint_terms(p, net, x, {}).likelihood, at_mean);
  }
}

TEST(LogJoint, DiscreteRatiosMatchBruteForcePosterior) {
  // Changing one label changes the log joint by the log ratio of exact posterior masses.
  Engine rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const MultiplexNetwork net = oracle::random_network(2, 2, 0.5, rng);
    const CovariateMatrix x = oracle::random_covariates(2, 2, rng);
    const JointPoint j = random_point(net, 2, 2, 2, rng);
    Eigen::MatrixXd gamma(2, 2), tau(2, 2);
    for (int k = 0; k < 2; ++k) {
      gamma(k, 0) = j.gamma_breaks(k, 0);
      gamma(k, 1) = j.gamma_breaks(k, 1) * (1 - j.gamma_breaks(k, 0));
    }
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) tau(i, k) = std::exp(log_stick_probability(x.values.row(i).transpose(), j.phi, k));
    const std::vector<double> post = oracle::brute_force_discrete_posterior(net, j.rho, gamma, tau);
    auto index = [](const JointPoint& q) {
      // w first, node 0 least significant, then z layer by layer
      int idx = 0, radix = 1;
      for (int w : q.global_groups) { idx += w * radix; radix *= 2; }
      for (const auto& layer : q.layer_groups)
        for (int z : layer) { idx += z * radix; radix *= 2; }
      return idx;
    };
    for (int flip = 0; flip < 6; ++flip) {
      JointPoint k = j;
      if (flip < 2) k.global_groups[flip] ^= 1;
      else k.layer_groups[(flip - 2) / 2][(flip - 2) % 2] ^= 1;
      const double diff = log_joint(k, net, x, {}) - log_joint(j, net, x, {});
      EXPECT_NEAR(diff, std::log(post[index(k)] / post[index(j)]), 1e-10);
    }
  }
}
