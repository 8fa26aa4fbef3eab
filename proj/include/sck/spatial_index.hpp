#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace sck {

// kd-tree over a fixed point set. Immutable after construction; concurrent
// read-only queries are safe. Distance comparisons use squared norms, so
// radius_query(q, r) returns exactly the indices with |p - q|^2 <= r^2,
// sorted ascending. Nearest-neighbor ties resolve to the smallest index.
class SpatialIndex {
public:
    SpatialIndex() = default;
    explicit SpatialIndex(std::vector<Eigen::Vector3d> points);

    std::size_t size() const { return points_.size(); }
    const std::vector<Eigen::Vector3d>& points() const { return points_; }

    std::vector<int> radius_query(const Eigen::Vector3d& query, double radius) const;

    // Returns (index, distance); (-1, inf) when the index is empty.
    std::pair<int, double> nearest(const Eigen::Vector3d& query) const;

private:
    struct Node {
        int axis = -1;       // -1 marks a leaf
        double split = 0.0;  // coordinate of the median point on `axis`
        int left = -1;
        int right = -1;
        int begin = 0;  // leaf span into order_
        int end = 0;
    };

    int build(int begin, int end);
    void radius_search(int node, const Eigen::Vector3d& q, double r2, std::vector<int>& out) const;
    void nearest_search(int node, const Eigen::Vector3d& q, double& best_d2, int& best_idx) const;

    std::vector<Eigen::Vector3d> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;

    static constexpr int kLeafSize = 16;
};

}  // namespace sck
