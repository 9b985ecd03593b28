#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "scanplan/core/types.hpp"

namespace scanplan {

/// 3-d kd-tree for k-nearest-neighbor and radius queries.
///
/// Results are fully deterministic: neighbors are ranked by (squared
/// distance, index), so ties at the k-th distance always resolve to the
/// lower index regardless of traversal order.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(std::vector<Vec3> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    nodes_.reserve(points_.size() / kLeafSize * 2 + 2);
    if (!points_.empty()) root_ = build(0, static_cast<int>(points_.size()));
  }

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Vec3>& points() const noexcept { return points_; }

  /// Indices of the k nearest points to q, sorted by (distance, index).
  /// Pass exclude >= 0 to skip one index (typically the query point itself).
  std::vector<int> knn(const Vec3& q, int k, int exclude = -1) const {
    Best best;
    best.k = k;
    best.exclude = exclude;
    if (root_ >= 0 && k > 0) search_knn(root_, q, best);
    std::sort(best.heap.begin(), best.heap.end());
    std::vector<int> out;
    out.reserve(best.heap.size());
    for (const auto& e : best.heap) out.push_back(e.second);
    return out;
  }

  /// Indices of all points within radius r of q, sorted ascending.
  std::vector<int> radius(const Vec3& q, double r) const {
    std::vector<int> out;
    if (root_ >= 0 && r >= 0.0) search_radius(root_, q, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr int kLeafSize = 16;

  struct Node {
    double split = 0.0;
    int axis = -1;  // -1 marks a leaf
    int left = -1, right = -1;
    int begin = 0, end = 0;  // range into order_ (leaves only)
  };

  using Entry = std::pair<double, int>;  // (squared distance, index)

  struct Best {
    std::vector<Entry> heap;  // max-heap on (d2, index)
    int k = 0;
    int exclude = -1;

    bool full() const { return static_cast<int>(heap.size()) == k; }
    double worst_d2() const { return heap.front().first; }

    void offer(const Entry& e) {
      if (e.second == exclude) return;
      if (!full()) {
        heap.push_back(e);
        std::push_heap(heap.begin(), heap.end());
      } else if (e < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = e;
        std::push_heap(heap.begin(), heap.end());
      }
    }
  };

  int build(int begin, int end) {
    Node node;
    const int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeafSize) {
      nodes_[idx].begin = begin;
      nodes_[idx].end = end;
      // fixed intra-leaf order for reproducible scans
      std::sort(order_.begin() + begin, order_.begin() + end);
      return idx;
    }
    Vec3 lo = points_[order_[begin]], hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      lo = lo.cwiseMin(points_[order_[i]]);
      hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                       const double da = points_[a][axis], db = points_[b][axis];
                       return da < db || (da == db && a < b);
                     });
    nodes_[idx].axis = axis;
    nodes_[idx].split = points_[order_[mid]][axis];
    nodes_[idx].left = build(begin, mid);
    nodes_[idx].right = build(mid, end);
    return idx;
  }

  void search_knn(int ni, const Vec3& q, Best& best) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int p = order_[i];
        best.offer({(points_[p] - q).squaredNorm(), p});
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search_knn(near, q, best);
    if (!best.full() || delta * delta <= best.worst_d2()) search_knn(far, q, best);
  }

  void search_radius(int ni, const Vec3& q, double r2, std::vector<int>& out) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int p = order_[i];
        if ((points_[p] - q).squaredNorm() <= r2) out.push_back(p);
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search_radius(near, q, r2, out);
    if (delta * delta <= r2) search_radius(far, q, r2, out);
  }

  std::vector<Vec3> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Median distance to the nearest other point. Used to auto-scale the
/// Euclidean split radius. Returns 0 for clouds with fewer than 2 points.
inline double median_nn_spacing(const KdTree& tree) {
  const std::size_t n = tree.size();
  if (n < 2) return 0.0;
  std::vector<double> d;
  d.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto nb = tree.knn(tree.points()[i], 1, static_cast<int>(i));
    if (!nb.empty()) d.push_back((tree.points()[nb[0]] - tree.points()[i]).norm());
  }
  std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
  return d[d.size() / 2];
}

}  // namespace scanplan
