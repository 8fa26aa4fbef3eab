#pragma once

#include "sck/cloud.hpp"
#include "sck/features.hpp"
#include "sck/pairs.hpp"
#include "sck/subsets.hpp"
#include "sck/trainer.hpp"

#include <cstdint>
#include <vector>

namespace sck {

struct SyntheticSceneSpec {
    int object_count = 8;
    Eigen::Vector3d extent{6.0, 6.0, 3.0};  // room size in meters
    double noise_stddev = 0.0;
    int points_per_object_min = 256;
    int points_per_object_max = 256;
    int num_classes = 5;
    std::uint64_t seed = 0;
    double min_center_separation = 0.0;
    double view_keep_fraction = 0.7;  // half-space culling quantile per view

    void validate() const;
};

// A room of primitive objects (boxes and spheres, one instance each) plus
// two partial views: each view drops the points beyond a keep-fraction
// quantile along a horizontal direction, the two directions 60-120 degrees
// apart, and is expressed in its own local frame under a random rigid pose.
struct SyntheticScene {
    PointCloud full;                          // world frame, labels + colors
    std::vector<Eigen::Vector3d> gt_offsets;  // instance centroid - point
    std::vector<BoxAnnotation> boxes;         // per-instance AABBs, world frame

    PointCloud view_a;  // local frames
    PointCloud view_b;
    Pose pose_a;        // local -> world
    Pose pose_b;
    std::vector<int> view_a_master;  // view index -> full-cloud index
    std::vector<int> view_b_master;
    CorrespondenceSet gt_matches;  // (a index, b index), same master point
};

SyntheticScene generate_synthetic_scene(const SyntheticSceneSpec& spec);

std::vector<SyntheticScene> make_scene_set(int num_scenes, const SyntheticSceneSpec& base,
                                           std::uint64_t seed);

ScenePair to_scene_pair(const SyntheticScene& scene);
std::vector<ScenePair> make_benchmark_dataset(int num_scenes, const SyntheticSceneSpec& base,
                                              std::uint64_t seed);

// Many objects with strongly uneven point counts; random selection tends to
// land on the big ones, which is what coverage comparisons need.
SyntheticScene make_cluttered_scene(std::uint64_t seed, int object_count = 24);

// Embedding stand-in for coverage tests: every instance gets a random unit
// prototype, each point that prototype plus noise, rows re-normalized.
FeatureMatrix instance_features(const PointCloud& scene, int dim, double noise,
                                std::uint64_t seed);

}  // namespace sck
