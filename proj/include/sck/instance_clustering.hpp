#pragma once

#include "sck/cloud.hpp"
#include "sck/features.hpp"

#include <string>
#include <vector>

namespace sck {

struct InstanceInfo {
    int semantic_label = 0;
    double confidence = 0.0;
    std::vector<int> members;  // ascending point indices
};

struct InstancePrediction {
    std::vector<int> instance_of;  // per point; -1 = unassigned
    std::vector<InstanceInfo> instances;
};

// positions moved by their offsets, labels carried through. Throws on
// length mismatch or non-finite offsets.
PointCloud shift_points(const PointCloud& cloud, const std::vector<Eigen::Vector3d>& offsets);

// Connected components of the graph joining points within `radius` that
// share a semantic label; components below min_cluster_size stay unassigned.
// Ids follow discovery order (component containing the lowest unclaimed
// index first).
InstancePrediction bfs_cluster(const PointCloud& shifted, const std::vector<int>& semantic_labels,
                               double radius, int min_cluster_size);

// confidence(instance) = mean over members of class_scores(member, label).
// Scores must lie in [0,1] with one row per point.
void score_instances(InstancePrediction& pred, const FeatureMatrix& class_scores);

// Text dump: "# points <N>" then per-point "index instance_id" lines,
// "# instances <K>" then per-instance "id class confidence" lines.
void write_prediction(const std::string& path, const InstancePrediction& pred);
InstancePrediction read_prediction(const std::string& path);

}  // namespace sck
