#include "hmpsbm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hmpsbm/assignment.hpp"
#include "hmpsbm/errors.hpp"

namespace hmpsbm {
namespace {

double entropy(const std::map<int, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

std::vector<int> align(const std::vector<int>& reference, const std::vector<int>& target) {
  int k = 1;
  for (int v : reference) k = std::max(k, v + 1);
  for (int v : target) k = std::max(k, v + 1);
  return relabel(target, align_labels(reference, target, k));
}

}  // namespace

std::vector<int> argmax_rows(const Eigen::MatrixXd& responsibilities) {
  std::vector<int> out(responsibilities.rows(), 0);
  for (Eigen::Index i = 0; i < responsibilities.rows(); ++i) {
    for (Eigen::Index k = 1; k < responsibilities.cols(); ++k) {
      if (responsibilities(i, k) > responsibilities(i, out[i])) out[i] = static_cast<int>(k);
    }
  }
  return out;
}

int count_distinct(const std::vector<int>& labels) {
  return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
}

ClusteringResult extract_assignments(const VariationalState& state) {
  ClusteringResult r;
  r.global_labels = argmax_rows(state.phi_w);
  r.occupied_global = count_distinct(r.global_labels);
  std::set<int> used;
  for (const auto& layer : state.phi_z) {
    r.layer_labels.push_back(argmax_rows(layer));
    used.insert(r.layer_labels.back().begin(), r.layer_labels.back().end());
  }
  r.occupied_layer = static_cast<int>(used.size());
  return r;
}

double nmi(const std::vector<int>& a, const std::vector<int>& b, NmiNormalization normalization) {
  if (a.size() != b.size()) throw ShapeError("nmi: label vectors differ in length");
  if (a.empty()) throw ShapeError("nmi: empty labelings");
  const double n = static_cast<double>(a.size());
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  const double ha = entropy(ca, n);
  const double hb = entropy(cb, n);
  if (ca.size() == 1 && cb.size() == 1) return 1.0;
  if (ca.size() == 1 || cb.size() == 1) return 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    mi += c / n * std::log(c * n / (ca[key.first] * cb[key.second]));
  }
  const double norm = normalization == NmiNormalization::arithmetic ? 0.5 * (ha + hb) : std::sqrt(ha * hb);
  return std::clamp(mi / norm, 0.0, 1.0);
}

Eigen::MatrixXi confusion_matrix(const std::vector<int>& a, const std::vector<int>& b, int k_a, int k_b) {
  if (a.size() != b.size()) throw ShapeError("confusion_matrix: label vectors differ in length");
  if (a.empty()) throw ShapeError("confusion_matrix: empty labelings");
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(k_a, k_b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= k_a || b[i] < 0 || b[i] >= k_b) throw ValidationError("label outside its range");
    counts(a[i], b[i]) += 1;
  }
  return counts;
}

ClusteringResult align_to_truth(const ClusteringResult& result, const GroundTruth& truth) {
  if (result.layer_labels.size() != truth.layer_groups.size()) throw ShapeError("layer counts differ");
  ClusteringResult out = result;
  out.global_labels = align(truth.global_groups, result.global_labels);
  for (std::size_t l = 0; l < result.layer_labels.size(); ++l) {
    out.layer_labels[l] = align(truth.layer_groups[l], result.layer_labels[l]);
  }
  return out;
}

}  // namespace hmpsbm
