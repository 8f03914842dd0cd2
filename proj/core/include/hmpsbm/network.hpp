#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hmpsbm {

/// Directed multiplex network: L binary adjacency matrices over a shared
/// node set. Self-loops are structurally absent; set_edge rejects them.
class MultiplexNetwork {
 public:
  MultiplexNetwork() = default;
  MultiplexNetwork(int num_layers, int num_nodes);

  int num_layers() const noexcept { return num_layers_; }
  int num_nodes() const noexcept { return num_nodes_; }

  bool edge(int layer, int source, int target) const {
    return adjacency_[offset(layer, source, target)] != 0;
  }
  void set_edge(int layer, int source, int target, bool present = true);

  /// Row `source` of layer `layer`, one byte per target (0 or 1).
  std::span<const std::uint8_t> row(int layer, int source) const {
    return {adjacency_.data() + offset(layer, source, 0), static_cast<std::size_t>(num_nodes_)};
  }

  std::size_t edge_count() const;
  std::size_t edge_count(int layer) const;

  Eigen::MatrixXd layer_matrix(int layer) const;
  /// Entrywise sum of all layers.
  Eigen::MatrixXd aggregated_matrix() const;

  bool operator==(const MultiplexNetwork&) const = default;

 private:
  std::size_t offset(int layer, int source, int target) const {
    return (static_cast<std::size_t>(layer) * num_nodes_ + source) * num_nodes_ + target;
  }

  int num_layers_ = 0;
  int num_nodes_ = 0;
  std::vector<std::uint8_t> adjacency_;
};

/// Nodal covariates, one row per node.
struct CovariateMatrix {
  Eigen::MatrixXd values;
  bool includes_intercept = false;

  int num_nodes() const { return static_cast<int>(values.rows()); }
  int num_features() const { return static_cast<int>(values.cols()); }

  /// Intercept-only design (a single column of ones).
  static CovariateMatrix intercept_only(int num_nodes);

  /// Throws ShapeError on a row-count mismatch, ValidationError on non-finite entries.
  void validate(int expected_nodes) const;
};

}  // namespace hmpsbm
