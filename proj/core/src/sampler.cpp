#include "hmpsbm/sampler.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hmpsbm/errors.hpp"
#include "hmpsbm/parallel.hpp"
#include "hmpsbm/rng.hpp"
#include "hmpsbm/stick_breaking.hpp"

namespace hmpsbm {
namespace {

enum StreamKind : std::uint64_t { kGlobalStream = 1, kLayerStream = 2, kEdgeStream = 3, kFeatureStream = 4 };

void check_probability_matrix(const Eigen::MatrixXd& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ShapeError("rho must be square and non-empty");
  if (!((rho.array() >= 0.0).all() && (rho.array() <= 1.0).all())) {
    throw std::domain_error("rho entries must lie in [0, 1]");
  }
}

void check_gamma(const Eigen::MatrixXd& gamma, Eigen::Index num_layer_groups) {
  if (gamma.cols() != num_layer_groups) {
    throw ShapeError("gamma has " + std::to_string(gamma.cols()) + " columns, rho has " +
                     std::to_string(num_layer_groups) + " groups");
  }
  for (Eigen::Index k = 0; k < gamma.rows(); ++k) {
    const auto row = gamma.row(k);
    if ((row.array() < 0.0).any() || std::abs(row.sum() - 1.0) > 1e-9) {
      throw std::domain_error("gamma row " + std::to_string(k) + " is not a probability vector");
    }
  }
}

template <typename Weights>
int draw_categorical(Engine& engine, const Weights& weights, int size) {
  const double u = uniform01(engine);
  double cumulative = 0.0;
  int last_positive = 0;
  for (int k = 0; k < size; ++k) {
    if (weights[k] > 0.0) last_positive = k;
    cumulative += weights[k];
    if (u < cumulative) return k;
  }
  return last_positive;
}

}  // namespace

SampledNetwork sample_network(int num_nodes, int num_layers, const TruthSpec& spec, std::uint64_t seed,
                              int threads) {
  if (num_nodes < 1 || num_layers < 1) throw ValidationError("need at least one node and one layer");

  GroundTruth truth;
  const Eigen::MatrixXd& gamma =
      std::visit([](const auto& s) -> const Eigen::MatrixXd& { return s.gamma; }, spec);
  const Eigen::MatrixXd& rho = std::visit([](const auto& s) -> const Eigen::MatrixXd& { return s.rho; }, spec);
  check_probability_matrix(rho);
  check_gamma(gamma, rho.rows());
  const int num_layer_groups = static_cast<int>(rho.rows());

  if (const auto* given = std::get_if<ExplicitGroups>(&spec)) {
    if (static_cast<int>(given->global_groups.size()) != num_nodes) {
      throw ShapeError("explicit global groups must have one entry per node");
    }
    for (int w : given->global_groups) {
      if (w < 0 || w >= gamma.rows()) throw ValidationError("global group index outside gamma rows");
    }
    truth.global_groups = given->global_groups;
  } else {
    const auto& driven = std::get<CovariateDriven>(spec);
    driven.covariates.validate(num_nodes);
    if (driven.phi.cols() != driven.covariates.num_features()) {
      throw ShapeError("phi columns must match the number of covariates");
    }
    if (driven.phi.rows() > gamma.rows()) throw ShapeError("phi has more groups than gamma has rows");
    truth.probit_weights = driven.phi;
    truth.global_groups.resize(num_nodes);
    for (int i = 0; i < num_nodes; ++i) {
      const auto tau =
          probit_stick_probs(driven.covariates.values.row(i).transpose(), driven.phi).with_remainder_in_last();
      Engine engine = make_stream(seed, {kGlobalStream, static_cast<std::uint64_t>(i)});
      truth.global_groups[i] = draw_categorical(engine, tau, static_cast<int>(tau.size()));
    }
  }
  truth.connection_probs = rho;
  truth.gamma = gamma;
  truth.layer_groups.assign(num_layers, std::vector<int>(num_nodes));

  MultiplexNetwork network(num_layers, num_nodes);
  parallel_for(static_cast<std::size_t>(num_layers), threads, [&](std::size_t layer) {
    const auto l = static_cast<std::uint64_t>(layer);
    auto& z = truth.layer_groups[layer];
    for (int i = 0; i < num_nodes; ++i) {
      Engine engine = make_stream(seed, {kLayerStream, l, static_cast<std::uint64_t>(i)});
      z[i] = draw_categorical(engine, gamma.row(truth.global_groups[i]), num_layer_groups);
    }
    for (int i = 0; i < num_nodes; ++i) {
      Engine engine = make_stream(seed, {kEdgeStream, l, static_cast<std::uint64_t>(i)});
      for (int j = 0; j < num_nodes; ++j) {
        if (j == i) continue;
        if (uniform01(engine) < rho(z[i], z[j])) network.set_edge(static_cast<int>(layer), i, j);
      }
    }
  });
  return {std::move(network), std::move(truth)};
}

std::vector<int> split_by_ratio(int num_nodes, const std::vector<int>& ratio) {
  if (ratio.empty() || num_nodes < 1) throw ValidationError("split needs nodes and a non-empty ratio");
  const int total = std::accumulate(ratio.begin(), ratio.end(), 0);
  if (total <= 0) throw ValidationError("split ratio must have a positive sum");
  std::vector<int> labels;
  labels.reserve(num_nodes);
  int assigned = 0;
  int cumulative = 0;
  for (std::size_t g = 0; g < ratio.size(); ++g) {
    cumulative += ratio[g];
    const int upto = g + 1 == ratio.size() ? num_nodes
                                           : static_cast<int>(std::lround(static_cast<double>(num_nodes) *
                                                                          cumulative / total));
    for (; assigned < upto; ++assigned) labels.push_back(static_cast<int>(g));
  }
  return labels;
}

Eigen::MatrixXd sample_group_features(const std::vector<int>& groups, const Eigen::MatrixXd& means,
                                      std::uint64_t seed) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(groups.size()), means.cols());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i] < 0 || groups[i] >= means.rows()) throw ValidationError("group without a feature mean");
    Engine engine = make_stream(seed, {kFeatureStream, static_cast<std::uint64_t>(i)});
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index p = 0; p < means.cols(); ++p) {
      x(static_cast<Eigen::Index>(i), p) = means(groups[i], p) + normal(engine);
    }
  }
  return x;
}

}  // namespace hmpsbm
