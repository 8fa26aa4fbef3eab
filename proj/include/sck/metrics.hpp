#pragma once

#include "sck/cloud.hpp"
#include "sck/instance_clustering.hpp"

#include <utility>
#include <vector>

namespace sck {

struct MiouResult {
    double miou = 0.0;
    std::vector<std::pair<int, double>> per_class;  // (class id, IoU), classes present in gt
};

// IoU_c = TP / (TP + FP + FN) from the confusion matrix; the mean runs over
// classes present in the ground truth. Points whose gt label equals
// ignore_label are excluded everywhere. Throws when lengths differ, labels
// fall outside [0, num_classes), or no valid point remains.
MiouResult miou(const std::vector<int>& pred_labels, const std::vector<int>& gt_labels,
                int num_classes, int ignore_label = 255);

struct Instance {
    std::vector<int> members;  // ascending point indices
    int class_id = 0;
    double confidence = 1.0;
};

// Ground-truth instances of a labeled cloud: one per distinct instance id,
// class by majority vote of member semantic labels (ties to the smaller id),
// confidence 1. Ordered by instance id.
std::vector<Instance> instances_from_cloud(const PointCloud& cloud);

std::vector<Instance> instances_from_prediction(const InstancePrediction& pred);

struct MapResult {
    double map50 = 0.0;
    std::vector<std::pair<int, double>> per_class;  // (class id, AP), classes with >= 1 gt
};

// Per class: predictions sorted by confidence (descending, ties to the
// earlier instance) greedily claim the unmatched gt instance of the same
// class with the highest point-set IoU >= 0.5; AP integrates the all-point
// interpolated precision-recall curve; mAP averages classes that have gt
// instances. No gt instances at all gives 0.
MapResult instance_map50(const std::vector<Instance>& predictions,
                         const std::vector<Instance>& ground_truth);

}  // namespace sck
