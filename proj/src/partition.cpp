#include "sck/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sck {

void PartitionConfig::validate() const {
    if (angular_sectors < 1) throw std::invalid_argument("PartitionConfig: sectors must be >= 1");
    if (radial_shells < 1) throw std::invalid_argument("PartitionConfig: shells must be >= 1");
    if (shell_boundaries.size() != static_cast<std::size_t>(radial_shells - 1))
        throw std::invalid_argument("PartitionConfig: need shells-1 boundaries");
    double prev = 0.0;
    for (double b : shell_boundaries) {
        if (b <= prev) throw std::invalid_argument("PartitionConfig: boundaries must increase from > 0");
        prev = b;
    }
}

PartitionConfig PartitionConfig::from_partition_count(int partitions, double shell_boundary) {
    if (partitions < 1) throw std::invalid_argument("from_partition_count: partitions must be >= 1");
    PartitionConfig cfg;
    if (partitions <= 4 || partitions % 2 != 0) {
        cfg.angular_sectors = partitions;
        cfg.radial_shells = 1;
        cfg.shell_boundaries.clear();
    } else {
        cfg.angular_sectors = partitions / 2;
        cfg.radial_shells = 2;
        cfg.shell_boundaries = {shell_boundary};
    }
    cfg.validate();
    return cfg;
}

double relative_distance(const Eigen::Vector3d& anchor, const Eigen::Vector3d& point) {
    return (point - anchor).norm();
}

double relative_angle(const Eigen::Vector3d& anchor, const Eigen::Vector3d& point) {
    const double dx = point.x() - anchor.x();
    const double dy = point.y() - anchor.y();
    if (dx == 0.0 && dy == 0.0) return 0.0;
    double a = std::atan2(dy, dx);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
}

int partition_index(const PartitionConfig& cfg, const Eigen::Vector3d& anchor,
                    const Eigen::Vector3d& point) {
    const double angle = relative_angle(anchor, point);
    const double width = 2.0 * std::numbers::pi / cfg.angular_sectors;
    int sector = static_cast<int>(std::floor(angle / width));
    sector = std::clamp(sector, 0, cfg.angular_sectors - 1);  // guards fp spill at 2*pi

    const double dist = relative_distance(anchor, point);
    int shell = 0;
    for (double b : cfg.shell_boundaries)
        if (b < dist) ++shell;
    return sector + cfg.angular_sectors * shell;
}

PartitionAssignment assign_partitions(const PartitionConfig& cfg, int anchor_index,
                                      const PointCloud& anchors, const PointCloud& candidates) {
    cfg.validate();
    if (anchor_index < 0 || static_cast<std::size_t>(anchor_index) >= anchors.size())
        throw std::invalid_argument("assign_partitions: anchor_index out of range");
    PartitionAssignment out;
    out.anchor_index = anchor_index;
    out.partition_of.resize(candidates.size());
    const Eigen::Vector3d& anchor = anchors.positions[static_cast<std::size_t>(anchor_index)];
    for (std::size_t k = 0; k < candidates.size(); ++k)
        out.partition_of[k] = partition_index(cfg, anchor, candidates.positions[k]);
    return out;
}

}  // namespace sck
