#pragma once

// Brute-force reference implementations the test suite compares the library
// against. Everything here favors the most literal possible computation --
// linear scans, all-pairs loops, per-class recounts -- and stays independent
// of the library's acceleration structures and loop layouts.

#include "sck/cloud.hpp"
#include "sck/metrics.hpp"
#include "sck/pairs.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

// Linear-scan spatial queries.
std::vector<int> radius_scan(const std::vector<Eigen::Vector3d>& points,
                             const Eigen::Vector3d& query, double radius);
std::pair<int, double> nearest_scan(const std::vector<Eigen::Vector3d>& points,
                                    const Eigen::Vector3d& query);

// Hash-by-floor voxel grouping via an ordered map.
sck::PointCloud voxel_group(const sck::PointCloud& cloud, double voxel_size);

// All-pairs overlap: nearest neighbor of every world-frame A point by scan.
sck::OverlapResult overlap_scan(const sck::PointCloud& a, const sck::Pose& pose_a,
                                const sck::PointCloud& b, const sck::Pose& pose_b, double radius);

// Long-double Euclidean distance, for high-precision comparisons.
double distance_highprec(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

// Partition id re-derived from raw atan2/norm values.
int partition_rederive(int sectors, int shells, const std::vector<double>& boundaries,
                       const Eigen::Vector3d& anchor, const Eigen::Vector3d& point);

// Naive partitioned contrastive loss: partition-major loops, similarities
// recomputed per cell, partition ids re-derived from scratch. O(P*M*K*D).
// anchor_positions/key_positions are the clouds the match indices refer to,
// in one common frame. Rows of f1/f2 are raw (unnormalized) features.
double partitioned_loss_naive(const Eigen::MatrixXd& f1, const Eigen::MatrixXd& f2,
                              const std::vector<std::pair<int, int>>& matches,
                              const std::vector<Eigen::Vector3d>& anchor_positions,
                              const std::vector<Eigen::Vector3d>& key_positions, int sectors,
                              int shells, const std::vector<double>& boundaries, double tau,
                              std::vector<double>* per_partition = nullptr);

// Plain (unpartitioned) InfoNCE over matched points: every other matched key
// is a negative. No partition logic anywhere.
double infonce_plain(const Eigen::MatrixXd& f1, const Eigen::MatrixXd& f2,
                     const std::vector<std::pair<int, int>>& matches, double tau);

// Central finite differences of a scalar function of two feature matrices.
struct FdGradient {
    Eigen::MatrixXd wrt_f1;
    Eigen::MatrixXd wrt_f2;
};
FdGradient fd_gradient(
    const std::function<double(const Eigen::MatrixXd&, const Eigen::MatrixXd&)>& f,
    const Eigen::MatrixXd& f1, const Eigen::MatrixXd& f2, double h);

// Normalized infinity-norm deviation between two same-shape matrices:
// max|a-b| / max(max|a|, max|b|, floor).
double matrix_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        double floor = 1e-12);

// Label-gated connected components by union-find over all point pairs.
// Components with >= min_size members get ids in order of their smallest
// member index; smaller components and their points stay at -1.
struct Components {
    std::vector<int> component_of;
    std::vector<std::vector<int>> members;  // per kept component, ascending
};
Components components_scan(const std::vector<Eigen::Vector3d>& points,
                           const std::vector<int>& labels, double radius, int min_size);

// Mean IoU by direct per-class TP/FP/FN counting (no confusion matrix).
double miou_count(const std::vector<int>& pred, const std::vector<int>& gt, int num_classes,
                  int ignore_label, std::vector<std::pair<int, double>>* per_class = nullptr);

// mAP@0.5 by exhaustive candidate scans: confidence ranking by repeated
// max-scan, per-prediction gt search over every gt instance, membership
// counted by double loop, interpolated precision recomputed per recall level.
double map50_exhaustive(const std::vector<sck::Instance>& predictions,
                        const std::vector<sck::Instance>& ground_truth,
                        std::vector<std::pair<int, double>>* per_class = nullptr);

// Instance coverage recount: distinct ids hit / distinct ids present.
double coverage_recount(const sck::PointCloud& scene, const std::vector<int>& selected);

}  // namespace oracle
