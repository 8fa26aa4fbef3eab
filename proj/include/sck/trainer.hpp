#pragma once

#include "sck/cloud.hpp"
#include "sck/features.hpp"
#include "sck/loss.hpp"
#include "sck/pairs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sck {

struct OptimizerConfig {
    double lr = 0.1;
    double lr_decay = 0.99;
    int decay_every_steps = 1000;
    int steps = 2000;
    std::uint64_t seed = 0;
    int dim = 16;

    void validate() const;
};

// A registered view pair: two clouds in their local frames, the poses into
// the shared world frame, and mined matches in local indices.
struct ScenePair {
    PointCloud cloud_a;
    PointCloud cloud_b;
    Pose pose_a;
    Pose pose_b;
    CorrespondenceSet matches;
};

struct TrainedPair {
    FeatureMatrix features_a;  // one unit row per point of cloud_a
    FeatureMatrix features_b;
    CorrespondenceSet sampled_matches;  // the subset the loss ran on
};

struct TrainResult {
    std::vector<TrainedPair> pairs;
    std::vector<double> loss_curve;                     // per step, mean over pairs
    std::vector<std::vector<double>> partition_curve;   // [step][partition id]
};

// Optimizes free per-point embedding tables by projected SGD on the
// partitioned loss: seeded unit-Gaussian init, rows re-normalized after every
// step, learning rate multiplied by lr_decay every decay_every_steps steps.
// Pairs train independently. Throws std::runtime_error if the loss turns
// non-finite, std::invalid_argument on bad config or no pairs.
TrainResult train_embeddings(const std::vector<ScenePair>& scene_pairs,
                             const LossConfig& loss_cfg, const OptimizerConfig& opt);

struct SeparationStats {
    double matched_mean = 0.0;
    double random_mean = 0.0;
    double margin = 0.0;  // matched_mean - random_mean
    std::size_t matched_count = 0;
    std::size_t random_count = 0;
};

// Mean cosine similarity of the matched pairs against seeded uniform random
// non-matched (i, j) draws. Feature rows must be unit length.
SeparationStats separation_margin(const FeatureMatrix& fa, const FeatureMatrix& fb,
                                  const CorrespondenceSet& matches, std::uint64_t seed,
                                  std::size_t random_draws = 4096);

// Pooled margin over every trained pair's sampled matches.
SeparationStats dataset_margin(const TrainResult& result, std::uint64_t seed,
                               std::size_t random_draws_per_pair = 4096);

// CSV: "step,total_loss,per_partition_0,..." one row per step.
void write_loss_curve_csv(const std::string& path, const TrainResult& result);

}  // namespace sck
