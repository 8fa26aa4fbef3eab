#pragma once

#include <Eigen/Dense>

namespace sck {

// Per-point embedding rows (N x D). `normalized` asserts unit L2 rows.
struct FeatureMatrix {
    Eigen::MatrixXd values;
    bool normalized = false;

    int rows() const { return static_cast<int>(values.rows()); }
    int dim() const { return static_cast<int>(values.cols()); }

    void l2_normalize_rows();

    // Throws std::invalid_argument on non-finite entries, or rows off the
    // unit sphere by more than 1e-6 when `normalized` is set.
    void validate() const;
};

}  // namespace sck
