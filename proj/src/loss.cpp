#include "sck/loss.hpp"

#include "sck/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sck {

namespace {

using RowMajorXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// The evaluation sticks to plain ascending-index loops for dots, norms and
// reductions so values never depend on vectorized summation order.
double dot_rows(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) s += a[c] * b[c];
    return s;
}

RowMajorXd normalize_rows(const Eigen::MatrixXd& values, std::vector<double>& norms) {
    RowMajorXd out(values.rows(), values.cols());
    norms.assign(static_cast<std::size_t>(values.rows()), 1.0);
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        double sq = 0.0;
        for (Eigen::Index c = 0; c < values.cols(); ++c) sq += values(r, c) * values(r, c);
        if (sq <= 0.0)
            throw std::invalid_argument("loss: zero feature row " + std::to_string(r));
        const double norm = std::sqrt(sq);
        for (Eigen::Index c = 0; c < values.cols(); ++c) out(r, c) = values(r, c) / norm;
        norms[static_cast<std::size_t>(r)] = norm;
    }
    return out;
}

void check_inputs(const FeatureMatrix& f1, const FeatureMatrix& f2, const LossInstance& inst,
                  double temperature) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("loss: temperature must be positive");
    if (inst.partitions < 1) throw std::invalid_argument("loss: partition count must be >= 1");
    if (f1.dim() != f2.dim())
        throw std::invalid_argument("loss: feature dimensions differ");
    f1.validate();
    f2.validate();
    for (int a : inst.anchor_rows)
        if (a < 0 || a >= f1.rows())
            throw std::invalid_argument("loss: anchor row out of range");
    for (int k : inst.key_rows)
        if (k < 0 || k >= f2.rows())
            throw std::invalid_argument("loss: key row out of range");
}

// Shared core: per-match terms and (optionally) the d(loss)/d(dot) matrix are
// produced in per-index slots, then reduced serially in ascending order.
LossReport evaluate(const FeatureMatrix& f1, const FeatureMatrix& f2, const LossInstance& inst,
                    double temperature, LossGradient* grad) {
    check_inputs(f1, f2, inst, temperature);
    const std::size_t m_count = inst.match_count();
    const std::size_t k_count = inst.key_count();
    const int partitions = inst.partitions;
    const int dim = f1.dim();

    std::vector<double> norms1, norms2;
    const RowMajorXd u1 = normalize_rows(f1.values, norms1);
    const RowMajorXd u2 = normalize_rows(f2.values, norms2);

    RowMajorXd u1a(m_count, dim);
    for (std::size_t m = 0; m < m_count; ++m) u1a.row(m) = u1.row(inst.anchor_rows[m]);
    RowMajorXd u2k(k_count, dim);
    for (std::size_t k = 0; k < k_count; ++k) u2k.row(k) = u2.row(inst.key_rows[k]);

    RowMajorXd terms(m_count, partitions);
    std::vector<std::uint8_t> has_negative(m_count * partitions, 0);
    RowMajorXd cmat;
    if (grad && m_count > 0) cmat.resize(m_count, k_count);

    parallel_for(m_count, [&](std::size_t begin, std::size_t end) {
        std::vector<double> e(k_count);
        std::vector<double> z(static_cast<std::size_t>(partitions));
        for (std::size_t m = begin; m < end; ++m) {
            const double* anchor = u1a.row(m).data();
            for (std::size_t k = 0; k < k_count; ++k)
                e[k] = std::exp(dot_rows(anchor, u2k.row(k).data(), dim) / temperature);
            const std::size_t pos_col = static_cast<std::size_t>(inst.positive_col[m]);
            const double pos = e[pos_col];
            for (int p = 0; p < partitions; ++p) z[static_cast<std::size_t>(p)] = pos;
            const std::int32_t* cells = inst.cell_partition.data() + m * k_count;
            for (std::size_t k = 0; k < k_count; ++k) {
                if (k == pos_col) continue;
                const auto p = static_cast<std::size_t>(cells[k]);
                z[p] += e[k];
                has_negative[m * partitions + p] = 1;
            }
            for (int p = 0; p < partitions; ++p)
                terms(m, p) = -std::log(pos / z[static_cast<std::size_t>(p)]);
            if (grad) {
                // d(loss)/d(dot): scale * e/Z(partition) off the positive,
                // scale * (sum_p pos/Z_p - P) at the positive column.
                const double scale =
                    1.0 / (static_cast<double>(partitions) * static_cast<double>(m_count) *
                           temperature);
                double pos_over_z = 0.0;
                for (int p = 0; p < partitions; ++p)
                    pos_over_z += pos / z[static_cast<std::size_t>(p)];
                for (std::size_t k = 0; k < k_count; ++k) {
                    if (k == pos_col)
                        cmat(m, k) = scale * (pos_over_z - partitions);
                    else
                        cmat(m, k) = scale * e[k] / z[static_cast<std::size_t>(cells[k])];
                }
            }
        }
    });

    LossReport report;
    report.per_partition.resize(static_cast<std::size_t>(partitions));
    for (int p = 0; p < partitions; ++p) {
        auto& entry = report.per_partition[static_cast<std::size_t>(p)];
        entry.partition = p;
        double sum = 0.0;
        int active = 0;
        for (std::size_t m = 0; m < m_count; ++m) {
            sum += terms(m, p);
            active += has_negative[m * partitions + static_cast<std::size_t>(p)];
        }
        entry.value = m_count == 0 ? 0.0 : sum / static_cast<double>(m_count);
        entry.active_anchors = active;
    }
    double total = 0.0;
    for (int p = 0; p < partitions; ++p)
        total += report.per_partition[static_cast<std::size_t>(p)].value;
    report.total = total / static_cast<double>(partitions);

    if (grad) {
        grad->wrt_f1 = Eigen::MatrixXd::Zero(f1.rows(), dim);
        grad->wrt_f2 = Eigen::MatrixXd::Zero(f2.rows(), dim);
        if (m_count > 0) {
            const RowMajorXd g1a = cmat * u2k;              // M x D, grads wrt u1 anchor rows
            const RowMajorXd g2k = cmat.transpose() * u1a;  // K x D, grads wrt u2 key rows

            // Accumulate in normalized space first (anchor rows repeat), then
            // chain through the row normalization once per touched row:
            // grad_g = (grad_u - (grad_u . u) u) / |g|.
            RowMajorXd gu1 = RowMajorXd::Zero(f1.rows(), dim);
            for (std::size_t m = 0; m < m_count; ++m)
                gu1.row(inst.anchor_rows[m]) += g1a.row(m);
            std::vector<int> touched = inst.anchor_rows;
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
            for (int r : touched) {
                double along = 0.0;
                for (int c = 0; c < dim; ++c) along += gu1(r, c) * u1(r, c);
                for (int c = 0; c < dim; ++c)
                    grad->wrt_f1(r, c) =
                        (gu1(r, c) - along * u1(r, c)) / norms1[static_cast<std::size_t>(r)];
            }
            for (std::size_t k = 0; k < k_count; ++k) {
                const int r = inst.key_rows[k];
                double along = 0.0;
                for (int c = 0; c < dim; ++c) along += g2k(k, c) * u2(r, c);
                for (int c = 0; c < dim; ++c)
                    grad->wrt_f2(r, c) =
                        (g2k(k, c) - along * u2(r, c)) / norms2[static_cast<std::size_t>(r)];
            }
        }
    }
    return report;
}

}  // namespace

void LossConfig::validate() const {
    if (!(temperature > 0.0))
        throw std::invalid_argument("loss: temperature must be positive");
    if (num_sampled_matches < 1)
        throw std::invalid_argument("loss: num_sampled_matches must be >= 1");
    partition.validate();
}

LossInstance prepare_loss(const CorrespondenceSet& matches, const PointCloud& anchors,
                          const PointCloud& candidates, const PartitionConfig& partition) {
    partition.validate();
    matches.validate();
    const std::size_t m_count = matches.size();
    LossInstance inst;
    inst.partitions = partition.partition_count();
    inst.anchor_rows.resize(m_count);
    inst.positive_col.resize(m_count);

    std::vector<int> keys;
    keys.reserve(m_count);
    for (const auto& [i, j] : matches.pairs) {
        if (static_cast<std::size_t>(i) >= anchors.size() ||
            static_cast<std::size_t>(j) >= candidates.size())
            throw std::invalid_argument("loss: match index outside the given clouds");
        keys.push_back(j);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    inst.key_rows = std::move(keys);

    const std::size_t k_count = inst.key_rows.size();
    for (std::size_t m = 0; m < m_count; ++m) {
        inst.anchor_rows[m] = matches.pairs[m].first;
        const auto it = std::lower_bound(inst.key_rows.begin(), inst.key_rows.end(),
                                         matches.pairs[m].second);
        inst.positive_col[m] = static_cast<int>(it - inst.key_rows.begin());
    }

    inst.cell_partition.resize(m_count * k_count);
    parallel_for(m_count, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            const Eigen::Vector3d& anchor =
                anchors.positions[static_cast<std::size_t>(inst.anchor_rows[m])];
            for (std::size_t k = 0; k < k_count; ++k)
                inst.cell_partition[m * k_count + k] = partition_index(
                    partition, anchor,
                    candidates.positions[static_cast<std::size_t>(inst.key_rows[k])]);
        }
    });
    return inst;
}

LossReport total_loss_prepared(const FeatureMatrix& f1, const FeatureMatrix& f2,
                               const LossInstance& inst, double temperature) {
    return evaluate(f1, f2, inst, temperature, nullptr);
}

LossGradient loss_gradient_prepared(const FeatureMatrix& f1, const FeatureMatrix& f2,
                                    const LossInstance& inst, double temperature,
                                    LossReport* report) {
    LossGradient grad;
    LossReport local = evaluate(f1, f2, inst, temperature, &grad);
    if (report) *report = std::move(local);
    return grad;
}

LossReport total_loss(const FeatureMatrix& f1, const FeatureMatrix& f2,
                      const CorrespondenceSet& matches, const PointCloud& anchors,
                      const PointCloud& candidates, const LossConfig& cfg) {
    cfg.validate();
    const LossInstance inst = prepare_loss(matches, anchors, candidates, cfg.partition);
    return total_loss_prepared(f1, f2, inst, cfg.temperature);
}

double partition_loss(const FeatureMatrix& f1, const FeatureMatrix& f2,
                      const CorrespondenceSet& matches, const PointCloud& anchors,
                      const PointCloud& candidates, int partition_id, const LossConfig& cfg) {
    cfg.validate();
    if (partition_id < 0 || partition_id >= cfg.partition.partition_count())
        throw std::invalid_argument("loss: partition id out of range");
    const LossInstance inst = prepare_loss(matches, anchors, candidates, cfg.partition);
    const LossReport report = total_loss_prepared(f1, f2, inst, cfg.temperature);
    return report.per_partition[static_cast<std::size_t>(partition_id)].value;
}

LossGradient loss_gradient(const FeatureMatrix& f1, const FeatureMatrix& f2,
                           const CorrespondenceSet& matches, const PointCloud& anchors,
                           const PointCloud& candidates, const LossConfig& cfg,
                           LossReport* report) {
    cfg.validate();
    const LossInstance inst = prepare_loss(matches, anchors, candidates, cfg.partition);
    return loss_gradient_prepared(f1, f2, inst, cfg.temperature, report);
}

}  // namespace sck
