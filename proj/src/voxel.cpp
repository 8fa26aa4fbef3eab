#include "sck/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace sck {

namespace {

struct VoxelKey {
    std::int64_t x, y, z;
    bool operator==(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
    std::size_t operator()(const VoxelKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t v : {static_cast<std::uint64_t>(k.x), static_cast<std::uint64_t>(k.y),
                                static_cast<std::uint64_t>(k.z)}) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

int majority_label(const std::vector<int>& labels, const std::vector<int>& members) {
    std::map<int, int> counts;
    for (int m : members) ++counts[labels[m]];
    int best_label = -1, best_count = -1;
    for (const auto& [label, count] : counts) {
        // map iterates labels ascending, so > keeps the smallest on ties
        if (count > best_count) {
            best_count = count;
            best_label = label;
        }
    }
    return best_label;
}

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size) {
    if (voxel_size <= 0.0) throw std::invalid_argument("voxel_downsample: voxel_size must be > 0");
    PointCloud out;
    if (cloud.empty()) return out;

    std::unordered_map<VoxelKey, std::vector<int>, VoxelKeyHash> buckets;
    buckets.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Eigen::Vector3d& p = cloud.positions[i];
        VoxelKey key{static_cast<std::int64_t>(std::floor(p.x() / voxel_size)),
                     static_cast<std::int64_t>(std::floor(p.y() / voxel_size)),
                     static_cast<std::int64_t>(std::floor(p.z() / voxel_size))};
        buckets[key].push_back(static_cast<int>(i));
    }

    std::vector<std::pair<VoxelKey, const std::vector<int>*>> ordered;
    ordered.reserve(buckets.size());
    for (const auto& [key, members] : buckets) ordered.emplace_back(key, &members);
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.x, a.first.y, a.first.z) <
               std::tie(b.first.x, b.first.y, b.first.z);
    });

    out.positions.reserve(ordered.size());
    if (cloud.has_colors()) out.colors.reserve(ordered.size());
    if (cloud.has_semantics()) out.semantic_labels.reserve(ordered.size());
    if (cloud.has_instances()) out.instance_labels.reserve(ordered.size());

    for (const auto& [key, members] : ordered) {
        Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
        for (int m : *members) centroid += cloud.positions[m];
        centroid /= static_cast<double>(members->size());
        out.positions.push_back(centroid);

        if (cloud.has_colors()) {
            Eigen::Vector3d acc = Eigen::Vector3d::Zero();
            for (int m : *members)
                acc += Eigen::Vector3d(cloud.colors[m][0], cloud.colors[m][1], cloud.colors[m][2]);
            acc /= static_cast<double>(members->size());
            out.colors.push_back({static_cast<std::uint8_t>(std::lround(acc.x())),
                                  static_cast<std::uint8_t>(std::lround(acc.y())),
                                  static_cast<std::uint8_t>(std::lround(acc.z()))});
        }
        if (cloud.has_semantics())
            out.semantic_labels.push_back(majority_label(cloud.semantic_labels, *members));
        if (cloud.has_instances())
            out.instance_labels.push_back(majority_label(cloud.instance_labels, *members));
    }
    return out;
}

}  // namespace sck
