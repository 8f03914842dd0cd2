#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hmpsbm/model.hpp"
#include "hmpsbm/variational_state.hpp"

namespace hmpsbm {

struct ClusteringResult {
  std::vector<int> global_labels;               // length N
  std::vector<std::vector<int>> layer_labels;   // L x N
  int occupied_global = 0;                      // distinct global labels
  int occupied_layer = 0;                       // distinct layer labels over all layers
};

/// Row argmax, lowest index on ties.
std::vector<int> argmax_rows(const Eigen::MatrixXd& responsibilities);

ClusteringResult extract_assignments(const VariationalState& state);

/// Number of distinct values.
int count_distinct(const std::vector<int>& labels);

enum class NmiNormalization { arithmetic, geometric };

/// Mutual information over the mean entropy (arithmetic by default). Two
/// constant labelings score 1 if they induce the same partition, which for
/// constant labelings is always the case; a constant labeling against a
/// non-constant one scores 0. Throws ShapeError on a length mismatch or empty input.
double nmi(const std::vector<int>& a, const std::vector<int>& b,
           NmiNormalization normalization = NmiNormalization::arithmetic);

/// counts(r, c) = #{i : a_i = r, b_i = c}. Labels must lie in [0, k_a) and [0, k_b).
Eigen::MatrixXi confusion_matrix(const std::vector<int>& a, const std::vector<int>& b, int k_a, int k_b);

/// Relabels `result` to agree as far as possible with the truth: global
/// labels against truth.global_groups, each layer against its truth layer.
ClusteringResult align_to_truth(const ClusteringResult& result, const GroundTruth& truth);

}  // namespace hmpsbm
