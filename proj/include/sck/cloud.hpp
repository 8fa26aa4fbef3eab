#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace sck {

// Point set with optional per-point attributes. Attribute vectors are either
// empty (absent) or exactly positions.size() long.
struct PointCloud {
    std::vector<Eigen::Vector3d> positions;
    std::vector<std::array<std::uint8_t, 3>> colors;
    std::vector<int> semantic_labels;
    std::vector<int> instance_labels;

    std::size_t size() const { return positions.size(); }
    bool empty() const { return positions.empty(); }
    bool has_colors() const { return !colors.empty(); }
    bool has_semantics() const { return !semantic_labels.empty(); }
    bool has_instances() const { return !instance_labels.empty(); }

    // Throws std::invalid_argument on attribute length mismatch, non-finite
    // coordinates, or negative labels.
    void validate() const;
};

// Rigid transform, applied as R * p + t.
struct Pose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    bool is_rigid(double tol = 1e-6) const;
    Pose inverse() const;
    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
};

PointCloud transform(const PointCloud& cloud, const Pose& pose);

}  // namespace sck
