#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace sck {

// Seeded sample without replacement of round(percentage/100 * count) ids,
// returned in the input's order. Throws on empty input or a percentage
// outside (0, 100].
std::vector<std::string> subset_scenes(const std::vector<std::string>& scene_ids,
                                       double percentage, std::uint64_t seed);

struct BoxAnnotation {
    Eigen::Vector3d bmin = Eigen::Vector3d::Zero();
    Eigen::Vector3d bmax = Eigen::Vector3d::Zero();
    int class_id = 0;
};

// Per-scene seeded sample of min(k, available) boxes; scenes without boxes
// yield empty subsets. Throws when k < 1.
std::vector<std::vector<BoxAnnotation>> subset_boxes(
    const std::vector<std::vector<BoxAnnotation>>& scenes, int k, std::uint64_t seed);

}  // namespace sck
