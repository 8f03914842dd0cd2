#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hmpsbm/density_cluster.hpp"
#include "hmpsbm/model.hpp"
#include "hmpsbm/network.hpp"
#include "hmpsbm/variational_state.hpp"

namespace hmpsbm {

struct InitOptions {
  double smoothing = 0.05;          // epsilon spread over the non-assigned groups
  int min_cluster_size_start = 5;
  ClusterMethod method = ClusterMethod::hdbscan;
  bool scale_by_singular_values = true;  // cluster U diag(s) rather than U
  bool informed_global = true;      // false: phi_w rows uniform 1/M_w
  int threads = 1;
};

/// Hard labels together with their smoothed responsibilities.
struct LabelInit {
  std::vector<std::vector<int>> hard;  // one row per layer (a single row for global groups)
  std::vector<Eigen::MatrixXd> soft;   // matching N x M matrices
  std::vector<std::string> warnings;
};

/// One-hot rows softened to 1 - eps on the label and eps / (M - 1) elsewhere.
/// With M = 1 every row is exactly 1.
Eigen::MatrixXd soften_labels(const std::vector<int>& labels, int num_groups, double eps);

/// Embed -> cluster -> reassign outliers for one adjacency matrix, d = num_groups.
ClusterLabels cluster_adjacency(const Eigen::MatrixXd& adjacency, int num_groups, const InitOptions& options);

/// Per layer clustering, each layer aligned to layer 0.
LabelInit init_layer_groups(const MultiplexNetwork& network, int m_z, const InitOptions& options = {});

/// Clustering of the aggregated (summed) adjacency matrix.
LabelInit init_global_groups(const MultiplexNetwork& network, int m_w, const InitOptions& options = {});

/// beta = 1; alpha = p / (1 - p) for the clamped empirical block density p
/// over all layers. Blocks with no node pairs keep the prior (alpha0, beta0).
BetaParams init_rho(const MultiplexNetwork& network, const std::vector<std::vector<int>>& layer_labels, int m_z,
                    const Hyperparameters& hyper);

/// q_ks = share of the (layer, node) pairs with w_i = k that have z_li = s,
/// clamped and inverted with beta = 1. Global groups with no nodes keep (1, eta0).
BetaParams init_gamma(const std::vector<int>& global_labels, const std::vector<std::vector<int>>& layer_labels,
                      int m_w, int m_z, const Hyperparameters& hyper);

/// Complete informed starting point. The covariates fix P; probit blocks
/// start at theta = 0, Sigma = I and the conjugate blocks at their defaults.
VariationalState initialize_state(const MultiplexNetwork& network, const CovariateMatrix& covariates,
                                  const Hyperparameters& hyper, const TruncationConfig& truncation,
                                  const InitOptions& options = {}, std::vector<std::string>* warnings = nullptr);

}  // namespace hmpsbm
