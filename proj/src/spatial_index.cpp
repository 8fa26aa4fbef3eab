#include "sck/spatial_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sck {

SpatialIndex::SpatialIndex(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!points_.empty()) root_ = build(0, static_cast<int>(points_.size()));
}

int SpatialIndex::build(int begin, int end) {
    Node node;
    if (end - begin <= kLeafSize) {
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size()) - 1;
    }

    Eigen::Vector3d lo = points_[order_[begin]];
    Eigen::Vector3d hi = lo;
    for (int i = begin + 1; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);

    const int mid = begin + (end - begin) / 2;
    // Tie-break on index so the layout is a pure function of the input.
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                         const double ca = points_[a][axis], cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });

    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    nodes_.push_back(node);
    const int self = static_cast<int>(nodes_.size()) - 1;
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

std::vector<int> SpatialIndex::radius_query(const Eigen::Vector3d& query, double radius) const {
    std::vector<int> out;
    if (root_ < 0 || radius < 0.0) return out;
    radius_search(root_, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

void SpatialIndex::radius_search(int node_idx, const Eigen::Vector3d& q, double r2,
                                 std::vector<int>& out) const {
    const Node& node = nodes_[node_idx];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            if ((points_[idx] - q).squaredNorm() <= r2) out.push_back(idx);
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    // Left subtree holds coords <= split, right holds >= split; prune with
    // the plane distance bound.
    if (delta <= 0.0) {
        radius_search(node.left, q, r2, out);
        if (delta * delta <= r2) radius_search(node.right, q, r2, out);
    } else {
        radius_search(node.right, q, r2, out);
        if (delta * delta <= r2) radius_search(node.left, q, r2, out);
    }
}

std::pair<int, double> SpatialIndex::nearest(const Eigen::Vector3d& query) const {
    if (root_ < 0) return {-1, std::numeric_limits<double>::infinity()};
    double best_d2 = std::numeric_limits<double>::infinity();
    int best_idx = -1;
    nearest_search(root_, query, best_d2, best_idx);
    return {best_idx, std::sqrt(best_d2)};
}

void SpatialIndex::nearest_search(int node_idx, const Eigen::Vector3d& q, double& best_d2,
                                  int& best_idx) const {
    const Node& node = nodes_[node_idx];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            const double d2 = (points_[idx] - q).squaredNorm();
            if (d2 < best_d2 || (d2 == best_d2 && idx < best_idx)) {
                best_d2 = d2;
                best_idx = idx;
            }
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta <= 0.0 ? node.left : node.right;
    const int far = delta <= 0.0 ? node.right : node.left;
    nearest_search(near, q, best_d2, best_idx);
    // <= keeps equidistant points on the far side reachable for the
    // smallest-index tie rule.
    if (delta * delta <= best_d2) nearest_search(far, q, best_d2, best_idx);
}

}  // namespace sck
