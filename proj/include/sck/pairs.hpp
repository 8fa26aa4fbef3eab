#pragma once

#include "sck/cloud.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace sck {

struct FramePair {
    int frame_a = 0;
    int frame_b = 0;
    double overlap_ratio = 0.0;  // max of the two directional ratios
};

// Matched index pairs (i into frame A, j into frame B). Every stored pair
// satisfies |world(a_i) - world(b_j)| <= match_radius, with no duplicates.
struct CorrespondenceSet {
    std::vector<std::pair<int, int>> pairs;
    double match_radius = 0.0;

    std::size_t size() const { return pairs.size(); }
    void validate() const;  // duplicate / negative-index checks
};

// Every stride-th id starting at index 0.
std::vector<int> subsample_frames(const std::vector<int>& frame_ids, int stride);

struct OverlapResult {
    double ratio = 0.0;
    CorrespondenceSet matches;
};

// For each point of world-transformed A, finds its nearest neighbor in
// world-transformed B and records the pair when within `radius`.
// ratio = matched A points / |A|.
OverlapResult compute_overlap(const PointCloud& a, const Pose& pose_a, const PointCloud& b,
                              const Pose& pose_b, double radius);

struct MiningConfig {
    double radius = 0.025;
    double min_overlap = 0.30;
    double voxel_size = 0.02;  // applied per frame before overlap; <= 0 disables
};

struct MinedPair {
    FramePair frames;
    CorrespondenceSet matches;  // A -> B direction, indices into the downsampled frames
};

// Evaluates all unordered frame pairs and keeps those where either
// directional overlap reaches cfg.min_overlap. Pair evaluation may run
// concurrently; output is sorted by (frame_a, frame_b).
std::vector<MinedPair> mine_pairs(const std::vector<std::pair<PointCloud, Pose>>& frames,
                                  const MiningConfig& cfg);

// Uniform sample without replacement of min(n, |pairs|) entries,
// deterministic under seed; result sorted by (i, j).
CorrespondenceSet sample_matches(const CorrespondenceSet& set, int n, std::uint64_t seed);

}  // namespace sck
