#include "sck/cloud.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sck {

void PointCloud::validate() const {
    const std::size_t n = positions.size();
    if (!colors.empty() && colors.size() != n)
        throw std::invalid_argument("PointCloud: colors length mismatch");
    if (!semantic_labels.empty() && semantic_labels.size() != n)
        throw std::invalid_argument("PointCloud: semantic_labels length mismatch");
    if (!instance_labels.empty() && instance_labels.size() != n)
        throw std::invalid_argument("PointCloud: instance_labels length mismatch");
    for (const auto& p : positions) {
        if (!p.allFinite())
            throw std::invalid_argument("PointCloud: non-finite position");
    }
    for (int l : semantic_labels)
        if (l < 0) throw std::invalid_argument("PointCloud: negative semantic label");
    for (int l : instance_labels)
        if (l < 0) throw std::invalid_argument("PointCloud: negative instance label");
}

bool Pose::is_rigid(double tol) const {
    if (!rotation.allFinite() || !translation.allFinite()) return false;
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(rotation.determinant() - 1.0) <= tol;
}

Pose Pose::inverse() const {
    Pose inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(rotation.transpose() * translation);
    return inv;
}

PointCloud transform(const PointCloud& cloud, const Pose& pose) {
    PointCloud out = cloud;
    for (auto& p : out.positions) p = pose.apply(p);
    return out;
}

}  // namespace sck
