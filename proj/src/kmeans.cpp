#include "sck/kmeans.hpp"

#include "sck/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sck {

KMeansResult kmeans(const Eigen::MatrixXd& data, int k, int iterations, std::uint64_t seed) {
    const Eigen::Index rows = data.rows();
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (static_cast<Eigen::Index>(k) > rows)
        throw std::invalid_argument("kmeans: k exceeds the number of rows");
    if (iterations < 1) throw std::invalid_argument("kmeans: iterations must be >= 1");

    KMeansResult res;
    res.centroids.resize(k, data.cols());
    {
        // k distinct seeded rows (partial Fisher-Yates)
        std::vector<Eigen::Index> pool(static_cast<std::size_t>(rows));
        std::iota(pool.begin(), pool.end(), Eigen::Index{0});
        std::mt19937_64 rng(seed);
        for (int c = 0; c < k; ++c) {
            std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(c),
                                                            pool.size() - 1);
            std::swap(pool[static_cast<std::size_t>(c)], pool[pick(rng)]);
            res.centroids.row(c) = data.row(pool[static_cast<std::size_t>(c)]);
        }
    }

    res.assignment.assign(static_cast<std::size_t>(rows), 0);
    std::vector<double> dist2(static_cast<std::size_t>(rows), 0.0);
    const Eigen::VectorXd xnorm = data.rowwise().squaredNorm();

    // distance via |x|^2 - 2 x.c + |c|^2; the dot block is one GEMM
    const auto assign_pass = [&] {
        const Eigen::VectorXd cnorm = res.centroids.rowwise().squaredNorm();
        const Eigen::MatrixXd dots = data * res.centroids.transpose();
        parallel_for(static_cast<std::size_t>(rows), [&](std::size_t begin, std::size_t end) {
            for (std::size_t m = begin; m < end; ++m) {
                const auto mi = static_cast<Eigen::Index>(m);
                int arg = 0;
                double score = cnorm[0] - 2.0 * dots(mi, 0);
                for (int c = 1; c < k; ++c) {
                    const double s = cnorm[c] - 2.0 * dots(mi, c);
                    if (s < score) {
                        score = s;
                        arg = c;
                    }
                }
                res.assignment[m] = arg;
                dist2[m] = std::max(0.0, xnorm[mi] + score);
            }
        });
    };

    for (int it = 0; it < iterations; ++it) {
        assign_pass();
        double objective = 0.0;
        for (std::size_t m = 0; m < static_cast<std::size_t>(rows); ++m) objective += dist2[m];
        res.objective_curve.push_back(objective);

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.cols());
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index m = 0; m < rows; ++m) {
            sums.row(res.assignment[static_cast<std::size_t>(m)]) += data.row(m);
            ++counts[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(m)])];
        }
        for (int c = 0; c < k; ++c)
            if (counts[static_cast<std::size_t>(c)] > 0)
                res.centroids.row(c) =
                    sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        // an empty cluster jumps to the point farthest from its assigned
        // centroid (last-assignment distances; each point claimed once)
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t m = 0; m < static_cast<std::size_t>(rows); ++m) {
                if (dist2[m] > far_d) {
                    far_d = dist2[m];
                    far = m;
                }
            }
            res.centroids.row(c) = data.row(static_cast<Eigen::Index>(far));
            dist2[far] = -1.0;
        }
    }
    assign_pass();
    return res;
}

}  // namespace sck
