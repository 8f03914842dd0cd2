#include "hmpsbm/network.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hmpsbm/errors.hpp"

namespace hmpsbm {

MultiplexNetwork::MultiplexNetwork(int num_layers, int num_nodes)
    : num_layers_(num_layers), num_nodes_(num_nodes) {
  if (num_layers < 1 || num_nodes < 1) {
    throw ValidationError("network needs at least one layer and one node");
  }
  adjacency_.assign(static_cast<std::size_t>(num_layers) * num_nodes * num_nodes, 0);
}

void MultiplexNetwork::set_edge(int layer, int source, int target, bool present) {
  if (layer < 0 || layer >= num_layers_) {
    throw ValidationError("layer index " + std::to_string(layer) + " out of range");
  }
  if (source < 0 || source >= num_nodes_ || target < 0 || target >= num_nodes_) {
    throw ValidationError("node index out of range (N=" + std::to_string(num_nodes_) + ")");
  }
  if (source == target) {
    throw ValidationError("self-loop on node " + std::to_string(source));
  }
  adjacency_[offset(layer, source, target)] = present ? 1 : 0;
}

std::size_t MultiplexNetwork::edge_count() const {
  return static_cast<std::size_t>(std::count(adjacency_.begin(), adjacency_.end(), 1));
}

std::size_t MultiplexNetwork::edge_count(int layer) const {
  const auto begin = adjacency_.begin() + static_cast<std::ptrdiff_t>(offset(layer, 0, 0));
  const auto end = begin + static_cast<std::ptrdiff_t>(num_nodes_) * num_nodes_;
  return static_cast<std::size_t>(std::count(begin, end, 1));
}

Eigen::MatrixXd MultiplexNetwork::layer_matrix(int layer) const {
  Eigen::MatrixXd out(num_nodes_, num_nodes_);
  for (int i = 0; i < num_nodes_; ++i) {
    const auto r = row(layer, i);
    for (int j = 0; j < num_nodes_; ++j) out(i, j) = r[j];
  }
  return out;
}

Eigen::MatrixXd MultiplexNetwork::aggregated_matrix() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(num_nodes_, num_nodes_);
  for (int l = 0; l < num_layers_; ++l) out += layer_matrix(l);
  return out;
}

CovariateMatrix CovariateMatrix::intercept_only(int num_nodes) {
  return {Eigen::MatrixXd::Ones(num_nodes, 1), true};
}

void CovariateMatrix::validate(int expected_nodes) const {
  if (values.rows() != expected_nodes) {
    throw ShapeError("covariate matrix has " + std::to_string(values.rows()) +
                     " rows but the network has " + std::to_string(expected_nodes) + " nodes");
  }
  if (values.cols() < 1) throw ShapeError("covariate matrix has no columns");
  if (!values.allFinite()) throw ValidationError("covariate matrix contains non-finite entries");
}

}  // namespace hmpsbm
