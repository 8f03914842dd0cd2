#pragma once

#include <vector>

#include <Eigen/Dense>

namespace hmpsbm {

/// Maximum-weight perfect matching on a square matrix: returns col_for_row
/// with sum_r weights(r, col_for_row[r]) maximal. Shortest augmenting path
/// (Jonker-Volgenant style) without an initialisation phase, O(k^3).
std::vector<int> linear_sum_assignment_max(const Eigen::MatrixXd& weights);

/// Permutation pi of 0..k-1 maximising the number of i with
/// reference[i] == pi[target[i]]. Apply as relabelled[i] = pi[target[i]].
/// Throws ShapeError on a length mismatch or a label outside [0, k).
std::vector<int> align_labels(const std::vector<int>& reference, const std::vector<int>& target, int k);

/// Applies a permutation from align_labels.
std::vector<int> relabel(const std::vector<int>& labels, const std::vector<int>& permutation);

}  // namespace hmpsbm
