#include "hmpsbm/density_cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hmpsbm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MstEdge {
  int a;
  int b;
  double weight;
};

struct CondensedEntry {
  int parent;       // cluster id
  int child;        // point index when is_point, otherwise cluster id
  bool is_point;
  double lambda;
  int size;
};

// Pairwise distances and each row's sorted distances, shared across the
// escalation loop so only the minimum-size-dependent steps are repeated.
class DistanceCache {
 public:
  explicit DistanceCache(const Eigen::MatrixXd& points) : n_(static_cast<int>(points.rows())) {
    dist_.resize(n_, n_);
    for (int i = 0; i < n_; ++i) {
      dist_(i, i) = 0.0;
      for (int j = i + 1; j < n_; ++j) {
        const double d = (points.row(i) - points.row(j)).norm();
        dist_(i, j) = d;
        dist_(j, i) = d;
      }
    }
    sorted_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      sorted_[i].resize(n_);
      for (int j = 0; j < n_; ++j) sorted_[i][j] = dist_(i, j);
      std::sort(sorted_[i].begin(), sorted_[i].end());
    }
    max_distance_ = n_ > 0 ? dist_.maxCoeff() : 0.0;
  }

  int size() const { return n_; }
  double max_distance() const { return max_distance_; }
  double distance(int i, int j) const { return dist_(i, j); }
  // Distance to the k-th nearest point, counting the point itself as the first.
  double core_distance(int i, int k) const { return sorted_[i][std::min(k, n_) - 1]; }

 private:
  int n_;
  Eigen::MatrixXd dist_;
  std::vector<std::vector<double>> sorted_;
  double max_distance_ = 0.0;
};

std::vector<MstEdge> mutual_reachability_mst(const DistanceCache& cache, int min_samples) {
  const int n = cache.size();
  std::vector<double> core(n);
  for (int i = 0; i < n; ++i) core[i] = cache.core_distance(i, min_samples);

  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, kInf);
  std::vector<int> from(n, -1);
  std::vector<MstEdge> edges;
  edges.reserve(n > 0 ? n - 1 : 0);
  int current = 0;
  in_tree[0] = 1;
  for (int added = 1; added < n; ++added) {
    int next = -1;
    double next_weight = kInf;
    for (int j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double mr = std::max({core[current], core[j], cache.distance(current, j)});
      if (mr < best[j]) {
        best[j] = mr;
        from[j] = current;
      }
      if (best[j] < next_weight) {
        next_weight = best[j];
        next = j;
      }
    }
    in_tree[next] = 1;
    edges.push_back({from[next], next, next_weight});
    current = next;
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const MstEdge& x, const MstEdge& y) { return x.weight < y.weight; });
  return edges;
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void attach(int child, int root) { parent_[child] = root; }

 private:
  std::vector<int> parent_;
};

ClusterLabels single_cluster(int n, int min_size) {
  ClusterLabels out;
  out.labels.assign(n, 0);
  out.num_clusters = n > 0 ? 1 : 0;
  out.min_cluster_size = min_size;
  return out;
}

ClusterLabels hdbscan_cached(const DistanceCache& cache, int min_cluster_size) {
  const int n = cache.size();
  const int m = std::max(min_cluster_size, 2);
  if (n < 2 || cache.max_distance() == 0.0) return single_cluster(n, min_cluster_size);

  // Single-linkage dendrogram over the mutual-reachability MST.
  const auto edges = mutual_reachability_mst(cache, std::min(m, n));
  const int num_nodes = 2 * n - 1;
  std::vector<int> left(num_nodes, -1), right(num_nodes, -1), size(num_nodes, 1);
  std::vector<double> height(num_nodes, 0.0);
  UnionFind uf(num_nodes);
  int next = n;
  for (const auto& e : edges) {
    const int ra = uf.find(e.a);
    const int rb = uf.find(e.b);
    left[next] = ra;
    right[next] = rb;
    height[next] = e.weight;
    size[next] = size[ra] + size[rb];
    uf.attach(ra, next);
    uf.attach(rb, next);
    ++next;
  }
  const int root = num_nodes - 1;
  const double tiny = 1e-12 * cache.max_distance();
  auto lambda_of = [&](double h) { return 1.0 / std::max(h, tiny); };

  // Condensed tree.
  std::vector<CondensedEntry> tree;
  std::vector<int> cluster_of(num_nodes, -1);
  std::vector<double> birth{0.0};
  std::vector<int> cluster_parent{-1};
  cluster_of[root] = 0;
  std::vector<int> queue{root};
  auto drop_points = [&](int node, int cluster, double lambda) {
    std::vector<int> stack{node};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (v < n) {
        tree.push_back({cluster, v, true, lambda, 1});
      } else {
        stack.push_back(left[v]);
        stack.push_back(right[v]);
      }
    }
  };
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const int node = queue[q];
    const int cluster = cluster_of[node];
    const double lambda = lambda_of(height[node]);
    const int a = left[node];
    const int b = right[node];
    const bool a_big = size[a] >= m;
    const bool b_big = size[b] >= m;
    if (a_big && b_big) {
      for (int child : {a, b}) {
        const int id = static_cast<int>(birth.size());
        birth.push_back(lambda);
        cluster_parent.push_back(cluster);
        tree.push_back({cluster, id, false, lambda, size[child]});
        cluster_of[child] = id;
        if (child >= n) queue.push_back(child);
        else tree.push_back({id, child, true, lambda, 1});
      }
    } else {
      for (int child : {a, b}) {
        const bool big = child == a ? a_big : b_big;
        if (big) {
          cluster_of[child] = cluster;
          if (child >= n) queue.push_back(child);
          else tree.push_back({cluster, child, true, lambda, 1});
        } else {
          drop_points(child, cluster, lambda);
        }
      }
    }
  }

  const int num_clusters = static_cast<int>(birth.size());
  if (num_clusters == 1) return single_cluster(n, min_cluster_size);

  std::vector<double> stability(num_clusters, 0.0);
  std::vector<std::vector<int>> children(num_clusters);
  for (const auto& e : tree) {
    stability[e.parent] += (e.lambda - birth[e.parent]) * e.size;
    if (!e.is_point) children[e.parent].push_back(e.child);
  }

  // Excess of mass; cluster ids increase with depth, so a reverse sweep
  // visits children before parents. The root is never selected.
  std::vector<char> selected(num_clusters, 0);
  for (int c = num_clusters - 1; c >= 1; --c) {
    if (children[c].empty()) {
      selected[c] = 1;
      continue;
    }
    double child_total = 0.0;
    for (int ch : children[c]) child_total += stability[ch];
    if (child_total > stability[c]) {
      stability[c] = child_total;
    } else {
      selected[c] = 1;
      std::vector<int> stack(children[c].begin(), children[c].end());
      while (!stack.empty()) {
        const int d = stack.back();
        stack.pop_back();
        selected[d] = 0;
        stack.insert(stack.end(), children[d].begin(), children[d].end());
      }
    }
  }

  std::vector<int> label_of_cluster(num_clusters, kOutlier);
  int count = 0;
  for (int c = 1; c < num_clusters; ++c) {
    if (selected[c]) label_of_cluster[c] = count++;
  }

  ClusterLabels out;
  out.labels.assign(n, kOutlier);
  out.num_clusters = count;
  out.min_cluster_size = min_cluster_size;
  for (const auto& e : tree) {
    if (!e.is_point) continue;
    for (int c = e.parent; c > 0; c = cluster_parent[c]) {
      if (selected[c]) {
        out.labels[e.child] = label_of_cluster[c];
        break;
      }
    }
  }
  return out;
}

}  // namespace

ClusterLabels hdbscan(const Eigen::MatrixXd& points, int min_cluster_size) {
  if (min_cluster_size < 1) throw std::invalid_argument("min_cluster_size must be positive");
  return hdbscan_cached(DistanceCache(points), min_cluster_size);
}

ClusterLabels kmeans(const Eigen::MatrixXd& points, int k) {
  const auto n = points.rows();
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (n == 0) return {};
  k = static_cast<int>(std::min<Eigen::Index>(k, n));

  // Farthest-point seeding starting from row 0.
  Eigen::MatrixXd centres(k, points.cols());
  centres.row(0) = points.row(0);
  Eigen::VectorXd nearest = (points.rowwise() - points.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    Eigen::Index far = 0;
    nearest.maxCoeff(&far);
    centres.row(c) = points.row(far);
    nearest = nearest.cwiseMin((points.rowwise() - centres.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (centres.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
      if (labels[i] != static_cast<int>(best)) {
        labels[i] = static_cast<int>(best);
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centres.row(c) = sums.row(c) / counts[c];
    }
  }

  // Renumber occupied clusters contiguously in order of first appearance.
  std::vector<int> remap(k, -1);
  ClusterLabels out;
  out.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int& r = remap[labels[i]];
    if (r < 0) r = out.num_clusters++;
    out.labels[i] = r;
  }
  return out;
}

ClusterLabels density_cluster(const Eigen::MatrixXd& points, int max_clusters, int min_cluster_size_start,
                              ClusterMethod method) {
  if (max_clusters < 1) throw std::invalid_argument("max_clusters must be at least 1");
  const int n = static_cast<int>(points.rows());
  if (method == ClusterMethod::kmeans) return kmeans(points, max_clusters);

  const DistanceCache cache(points);
  for (int size = std::max(min_cluster_size_start, 1); size <= n; ++size) {
    ClusterLabels out = hdbscan_cached(cache, size);
    if (out.num_clusters <= max_clusters) return out;
  }
  ClusterLabels out = single_cluster(n, n + 1);
  out.warning = "cluster count never fell to " + std::to_string(max_clusters) +
                "; using a single cluster";
  return out;
}

ClusterLabels assign_outliers(const Eigen::MatrixXd& points, const ClusterLabels& clusters) {
  const int k = clusters.num_clusters;
  Eigen::MatrixXd centres = Eigen::MatrixXd::Zero(std::max(k, 0), points.cols());
  std::vector<int> counts(std::max(k, 0), 0);
  for (std::size_t i = 0; i < clusters.labels.size(); ++i) {
    const int c = clusters.labels[i];
    if (c == kOutlier) continue;
    centres.row(c) += points.row(static_cast<Eigen::Index>(i));
    ++counts[c];
  }
  bool any = false;
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) {
      centres.row(c) /= counts[c];
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("cannot assign outliers: no non-outlier cluster");

  ClusterLabels out = clusters;
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    if (out.labels[i] != kOutlier) continue;
    int best = -1;
    double best_d = kInf;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double d = (points.row(static_cast<Eigen::Index>(i)) - centres.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out.labels[i] = best;
  }
  return out;
}

}  // namespace hmpsbm
