#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sck {

struct KMeansResult {
    Eigen::MatrixXd centroids;           // k x D
    std::vector<int> assignment;         // row -> centroid id, consistent with centroids
    std::vector<double> objective_curve;  // sum of squared distances, one entry per iteration
};

// Lloyd's algorithm. Initial centroids are k distinct data rows drawn with
// the seeded generator; each iteration assigns (ties to the lowest centroid
// id) then recomputes means; a cluster left empty is re-seeded to the point
// farthest from its assigned centroid. The objective is recorded after each
// assignment, so the curve is non-increasing. A final assignment pass keeps
// the returned labels consistent with the returned centroids.
// Throws std::invalid_argument when k < 1, k > rows, or iterations < 1.
KMeansResult kmeans(const Eigen::MatrixXd& data, int k, int iterations, std::uint64_t seed);

}  // namespace sck
