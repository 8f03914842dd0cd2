#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hmpsbm/model.hpp"
#include "hmpsbm/network.hpp"

namespace hmpsbm {

/// Global groups given directly.
struct ExplicitGroups {
  std::vector<int> global_groups;
  Eigen::MatrixXd gamma;  // rows: distribution of a global group over layer groups
  Eigen::MatrixXd rho;    // square, layer-group connection probabilities
};

/// Global groups drawn from probit stick-breaking on the covariates.
/// The last stick component absorbs the remainder mass.
struct CovariateDriven {
  CovariateMatrix covariates;
  Eigen::MatrixXd phi;  // K x P
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd rho;
};

using TruthSpec = std::variant<ExplicitGroups, CovariateDriven>;

struct SampledNetwork {
  MultiplexNetwork network;
  GroundTruth truth;
};

/// Draws w (if not given), z_li ~ Categorical(gamma_{w_i}) per layer and
/// A_lij ~ Bernoulli(rho_{z_li z_lj}) for i != j. Every node/layer uses its
/// own stream derived from `seed`, so the result does not depend on `threads`.
SampledNetwork sample_network(int num_nodes, int num_layers, const TruthSpec& spec,
                              std::uint64_t seed, int threads = 1);

/// Contiguous group labels for `num_nodes` nodes split by integer ratio,
/// e.g. {3, 2} over 250 nodes gives 150 zeros then 100 ones.
std::vector<int> split_by_ratio(int num_nodes, const std::vector<int>& ratio);

/// Features x_i ~ Normal(means.row(w_i), I).
Eigen::MatrixXd sample_group_features(const std::vector<int>& groups, const Eigen::MatrixXd& means,
                                      std::uint64_t seed);

}  // namespace hmpsbm
