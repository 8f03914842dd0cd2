#include "hmpsbm/assignment.hpp"

#include <limits>
#include <string>

#include "hmpsbm/errors.hpp"

namespace hmpsbm {

std::vector<int> linear_sum_assignment_max(const Eigen::MatrixXd& weights) {
  const int n = static_cast<int>(weights.rows());
  if (weights.cols() != n) throw ShapeError("assignment matrix must be square");
  if (n == 0) return {};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Minimise cost = -weight. Potentials u (rows), v (columns); 1-based with a
  // virtual column 0 that holds the row currently being inserted.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> row_of_col(n + 1, 0), way(n + 1, 0);
  for (int r = 1; r <= n; ++r) {
    row_of_col[0] = r;
    int col = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col] = 1;
      const int row = row_of_col[col];
      double delta = kInf;
      int next_col = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double reduced = -weights(row - 1, c - 1) - u[row] - v[c];
        if (reduced < min_slack[c]) {
          min_slack[c] = reduced;
          way[c] = col;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          next_col = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[row_of_col[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col = next_col;
    } while (row_of_col[col] != 0);
    do {
      const int prev = way[col];
      row_of_col[col] = row_of_col[prev];
      col = prev;
    } while (col != 0);
  }
  std::vector<int> col_for_row(n, -1);
  for (int c = 1; c <= n; ++c) col_for_row[row_of_col[c] - 1] = c - 1;
  return col_for_row;
}

std::vector<int> align_labels(const std::vector<int>& reference, const std::vector<int>& target, int k) {
  if (reference.size() != target.size()) throw ShapeError("label vectors differ in length");
  if (k < 1) throw ShapeError("label count must be positive");
  // counts(t, r): nodes with target label t and reference label r.
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] < 0 || target[i] >= k || reference[i] < 0 || reference[i] >= k) {
      throw ShapeError("label " + std::to_string(std::max(target[i], reference[i])) + " outside [0, " +
                       std::to_string(k) + ")");
    }
    counts(target[i], reference[i]) += 1.0;
  }
  return linear_sum_assignment_max(counts);
}

std::vector<int> relabel(const std::vector<int>& labels, const std::vector<int>& permutation) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = permutation.at(labels[i]);
  return out;
}

}  // namespace hmpsbm
