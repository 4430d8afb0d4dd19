#include "cadseq/metrics/chamfer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "cadseq/errors.hpp"

namespace cadseq::metrics {

namespace {

// Median-split kd-tree over an index permutation; exact nearest neighbor.
class KdTree {
 public:
  explicit KdTree(const std::vector<Vec3>& points) : points_(points) {
    index_.resize(points.size());
    std::iota(index_.begin(), index_.end(), 0);
    nodes_.reserve(points.size() * 2);
    root_ = build(0, points.size());
  }

  std::size_t nearest(const Vec3& q) const {
    std::size_t best_index = 0;
    double best_dist = std::numeric_limits<double>::max();
    search(root_, q, &best_index, &best_dist);
    return best_index;
  }

 private:
  static constexpr int kLeafSize = 16;

  struct Node {
    int axis = -1;  // -1 for leaves
    double split = 0.0;
    std::size_t begin = 0, end = 0;  // leaf payload range in index_
    int left = -1, right = -1;
  };

  double coord(std::size_t point, int axis) const {
    const Vec3& p = points_[point];
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
  }

  int build(std::size_t begin, std::size_t end) {
    Node node;
    if (end - begin <= kLeafSize) {
      node.begin = begin;
      node.end = end;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size() - 1);
    }
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3& p = points_[index_[i]];
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Vec3 ext = hi - lo;
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > (axis == 0 ? ext.x : ext.y)) axis = 2;

    const std::size_t mid = (begin + end) / 2;
    std::nth_element(index_.begin() + begin, index_.begin() + mid,
                     index_.begin() + end, [&](std::size_t a, std::size_t b) {
                       return coord(a, axis) < coord(b, axis);
                     });
    node.axis = axis;
    node.split = coord(index_[mid], axis);
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void search(int node_id, const Vec3& q, std::size_t* best_index,
              double* best_dist) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const double d = squared_distance(points_[index_[i]], q);
        if (d < *best_dist) {
          *best_dist = d;
          *best_index = index_[i];
        }
      }
      return;
    }
    const double qc = node.axis == 0 ? q.x : (node.axis == 1 ? q.y : q.z);
    const int near = qc < node.split ? node.left : node.right;
    const int far = qc < node.split ? node.right : node.left;
    search(near, q, best_index, best_dist);
    const double gap = qc - node.split;
    if (gap * gap < *best_dist) {
      search(far, q, best_index, best_dist);
    }
  }

  const std::vector<Vec3>& points_;
  std::vector<std::size_t> index_;
  std::vector<Node> nodes_;
  int root_;
};

}  // namespace

std::vector<std::size_t> nearest_neighbors(const std::vector<Vec3>& points,
                                           const std::vector<Vec3>& queries) {
  if (points.empty()) throw Error("nearest_neighbors: empty point set");
  const KdTree tree(points);
  std::vector<std::size_t> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    out[i] = tree.nearest(queries[i]);
  }
  return out;
}

double chamfer_distance(const PointCloud& a, const PointCloud& b) {
  if (a.points.empty() || b.points.empty()) {
    throw Error("chamfer_distance: empty point cloud");
  }
  const KdTree tree_b(b.points);
  double sum_ab = 0.0;
  for (const Vec3& p : a.points) {
    sum_ab += squared_distance(p, b.points[tree_b.nearest(p)]);
  }
  const KdTree tree_a(a.points);
  double sum_ba = 0.0;
  for (const Vec3& p : b.points) {
    sum_ba += squared_distance(p, a.points[tree_a.nearest(p)]);
  }
  const double mean_ab = sum_ab / static_cast<double>(a.points.size());
  const double mean_ba = sum_ba / static_cast<double>(b.points.size());
  return kChamferScale * (mean_ab + mean_ba);
}

}  // namespace cadseq::metrics
