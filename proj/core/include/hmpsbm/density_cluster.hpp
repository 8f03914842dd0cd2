#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hmpsbm {

inline constexpr int kOutlier = -1;

struct ClusterLabels {
  std::vector<int> labels;  // kOutlier or 0..num_clusters-1
  int num_clusters = 0;
  int min_cluster_size = 0; // size that produced these labels (density clustering)
  std::string warning;      // set when escalation ran out and fell back to one cluster
};

enum class ClusterMethod { hdbscan, kmeans };

/// One HDBSCAN pass: mutual-reachability distances with k = min_cluster_size,
/// a minimum spanning tree, a condensed tree that drops splits smaller than
/// min_cluster_size, and excess-of-mass cluster selection. If the tree never
/// splits into two sufficiently large parts every point lands in one cluster.
ClusterLabels hdbscan(const Eigen::MatrixXd& points, int min_cluster_size);

/// Deterministic k-means (farthest-point seeding from row 0, Lloyd iterations).
ClusterLabels kmeans(const Eigen::MatrixXd& points, int k);

/// Clusters rows of `points`, raising the minimum cluster size by one until at
/// most `max_clusters` clusters remain. Runs out when the size exceeds N, in
/// which case every point is put in a single cluster and `warning` is set.
ClusterLabels density_cluster(const Eigen::MatrixXd& points, int max_clusters, int min_cluster_size_start = 5,
                              ClusterMethod method = ClusterMethod::hdbscan);

/// Moves every outlier to the cluster whose centroid is nearest (lowest
/// index on ties). Throws std::invalid_argument if every point is an outlier.
ClusterLabels assign_outliers(const Eigen::MatrixXd& points, const ClusterLabels& clusters);

}  // namespace hmpsbm
