#pragma once

#include "sck/cloud.hpp"

#include <vector>

namespace sck {

// Anchor-relative partitioning of space into angular sectors x radial
// shells. Sectors divide the azimuth uniformly; shells are separated by
// shell_boundaries (strictly increasing, one fewer than radial_shells).
struct PartitionConfig {
    int angular_sectors = 4;
    int radial_shells = 2;
    std::vector<double> shell_boundaries{1.25};

    int partition_count() const { return angular_sectors * radial_shells; }
    void validate() const;

    // Canonical sector/shell split for a requested partition count:
    // counts up to 4 use sectors only, larger even counts use two shells.
    static PartitionConfig from_partition_count(int partitions, double shell_boundary = 1.25);
};

struct PartitionAssignment {
    int anchor_index = -1;
    std::vector<int> partition_of;  // candidate index -> partition id in [0, P)
};

// Euclidean distance from anchor to point.
double relative_distance(const Eigen::Vector3d& anchor, const Eigen::Vector3d& point);

// Azimuth of the displacement in the horizontal plane, in [0, 2*pi).
// Degenerate displacements (dx = dy = 0) map to angle 0.
double relative_angle(const Eigen::Vector3d& anchor, const Eigen::Vector3d& point);

// sector = floor(angle / sector_width), shell = #boundaries below the
// distance; id = sector + angular_sectors * shell.
int partition_index(const PartitionConfig& cfg, const Eigen::Vector3d& anchor,
                    const Eigen::Vector3d& point);

// Partition id of every candidate relative to anchors[anchor_index].
PartitionAssignment assign_partitions(const PartitionConfig& cfg, int anchor_index,
                                      const PointCloud& anchors, const PointCloud& candidates);

}  // namespace sck
