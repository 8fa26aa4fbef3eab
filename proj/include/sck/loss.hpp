#pragma once

#include "sck/cloud.hpp"
#include "sck/features.hpp"
#include "sck/pairs.hpp"
#include "sck/partition.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sck {

struct LossConfig {
    double temperature = 0.4;
    PartitionConfig partition;
    // Budget for sample_matches upstream (trainer / CLI); the loss itself
    // consumes the match set it is given.
    int num_sampled_matches = 4096;

    void validate() const;  // temperature > 0, partition valid, budget >= 1
};

struct PartitionLossEntry {
    int partition = 0;
    double value = 0.0;
    int active_anchors = 0;  // matches with >= 1 negative key in this partition
};

struct LossReport {
    std::vector<PartitionLossEntry> per_partition;
    double total = 0.0;  // mean of per-partition values
};

struct LossGradient {
    Eigen::MatrixXd wrt_f1;  // same shape as f1.values
    Eigen::MatrixXd wrt_f2;
};

// Geometry of a fixed match set, reusable across evaluations while features
// change: anchor rows into side A, the ascending unique matched key rows of
// side B, the positive's key column per match, and the partition id of every
// (match, key) cell relative to the match's anchor position.
struct LossInstance {
    std::vector<int> anchor_rows;
    std::vector<int> key_rows;
    std::vector<int> positive_col;
    std::vector<std::int32_t> cell_partition;  // match-major, size M*K
    int partitions = 1;

    std::size_t match_count() const { return anchor_rows.size(); }
    std::size_t key_count() const { return key_rows.size(); }
};

// anchors/candidates are the clouds the match indices refer to, already in a
// common (world) frame; their positions drive the partition assignment.
LossInstance prepare_loss(const CorrespondenceSet& matches, const PointCloud& anchors,
                          const PointCloud& candidates, const PartitionConfig& partition);

// Partitioned InfoNCE over matched points. Feature rows are L2-normalized
// internally before the similarity, so "dot" is cosine; the positive key sits
// in every partition's denominator; negatives of partition p are the other
// matched side-B keys lying in p relative to the anchor. Per-partition value
// is the mean over matches, total the mean over partitions. Empty match sets
// give 0. Throws std::invalid_argument on bad config, out-of-range rows, or a
// zero feature row.
LossReport total_loss(const FeatureMatrix& f1, const FeatureMatrix& f2,
                      const CorrespondenceSet& matches, const PointCloud& anchors,
                      const PointCloud& candidates, const LossConfig& cfg);

// Single-partition value of the same computation.
double partition_loss(const FeatureMatrix& f1, const FeatureMatrix& f2,
                      const CorrespondenceSet& matches, const PointCloud& anchors,
                      const PointCloud& candidates, int partition_id, const LossConfig& cfg);

// Analytic gradient of total_loss with respect to the raw (pre-normalization)
// feature entries; rows not touched by any match have zero gradient.
LossGradient loss_gradient(const FeatureMatrix& f1, const FeatureMatrix& f2,
                           const CorrespondenceSet& matches, const PointCloud& anchors,
                           const PointCloud& candidates, const LossConfig& cfg,
                           LossReport* report = nullptr);

// Prepared-geometry variants used by the trainer; numerically identical to
// the wrappers above.
LossReport total_loss_prepared(const FeatureMatrix& f1, const FeatureMatrix& f2,
                               const LossInstance& inst, double temperature);
LossGradient loss_gradient_prepared(const FeatureMatrix& f1, const FeatureMatrix& f2,
                                    const LossInstance& inst, double temperature,
                                    LossReport* report = nullptr);

}  // namespace sck
