#include "sck/features.hpp"

#include <cmath>
#include <stdexcept>

namespace sck {

void FeatureMatrix::l2_normalize_rows() {
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        const double n = values.row(r).norm();
        if (n < 1e-300) throw std::invalid_argument("FeatureMatrix: cannot normalize zero row");
        values.row(r) /= n;
    }
    normalized = true;
}

void FeatureMatrix::validate() const {
    if (!values.allFinite()) throw std::invalid_argument("FeatureMatrix: non-finite entry");
    if (normalized) {
        for (Eigen::Index r = 0; r < values.rows(); ++r) {
            if (std::abs(values.row(r).norm() - 1.0) > 1e-6)
                throw std::invalid_argument("FeatureMatrix: row not unit-norm");
        }
    }
}

}  // namespace sck
