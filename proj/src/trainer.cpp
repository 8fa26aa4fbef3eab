#include "sck/trainer.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace sck {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t pair_seed(std::uint64_t base, std::size_t pair_index, std::uint64_t stream) {
    return splitmix64(base + 0x9e3779b97f4a7c15ULL * (pair_index + 1) + stream);
}

FeatureMatrix gaussian_init(std::size_t rows, int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    FeatureMatrix f;
    f.values.resize(static_cast<Eigen::Index>(rows), dim);
    for (Eigen::Index r = 0; r < f.values.rows(); ++r)
        for (int c = 0; c < dim; ++c) f.values(r, c) = gauss(rng);
    f.l2_normalize_rows();
    return f;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (!(lr > 0.0)) throw std::invalid_argument("optimizer: lr must be positive");
    if (!(lr_decay > 0.0) || lr_decay > 1.0)
        throw std::invalid_argument("optimizer: lr_decay must be in (0, 1]");
    if (decay_every_steps < 1)
        throw std::invalid_argument("optimizer: decay_every_steps must be >= 1");
    if (steps < 0) throw std::invalid_argument("optimizer: steps must be >= 0");
    if (dim < 2) throw std::invalid_argument("optimizer: embedding dim must be >= 2");
}

TrainResult train_embeddings(const std::vector<ScenePair>& scene_pairs,
                             const LossConfig& loss_cfg, const OptimizerConfig& opt) {
    loss_cfg.validate();
    opt.validate();
    if (scene_pairs.empty())
        throw std::invalid_argument("train_embeddings: need at least one scene pair");

    const int partitions = loss_cfg.partition.partition_count();
    const auto steps = static_cast<std::size_t>(opt.steps);

    TrainResult result;
    result.pairs.resize(scene_pairs.size());
    result.loss_curve.assign(steps, 0.0);
    result.partition_curve.assign(steps, std::vector<double>(partitions, 0.0));

    for (std::size_t idx = 0; idx < scene_pairs.size(); ++idx) {
        const ScenePair& sp = scene_pairs[idx];
        const PointCloud world_a = transform(sp.cloud_a, sp.pose_a);
        const PointCloud world_b = transform(sp.cloud_b, sp.pose_b);

        CorrespondenceSet sampled =
            sample_matches(sp.matches, loss_cfg.num_sampled_matches, pair_seed(opt.seed, idx, 1));
        const LossInstance inst =
            prepare_loss(sampled, world_a, world_b, loss_cfg.partition);

        TrainedPair& trained = result.pairs[idx];
        trained.features_a = gaussian_init(sp.cloud_a.size(), opt.dim, pair_seed(opt.seed, idx, 2));
        trained.features_b = gaussian_init(sp.cloud_b.size(), opt.dim, pair_seed(opt.seed, idx, 3));
        trained.sampled_matches = std::move(sampled);

        double lr = opt.lr;
        for (std::size_t step = 0; step < steps; ++step) {
            if (step > 0 && step % static_cast<std::size_t>(opt.decay_every_steps) == 0)
                lr *= opt.lr_decay;
            LossReport report;
            const LossGradient grad = loss_gradient_prepared(
                trained.features_a, trained.features_b, inst, loss_cfg.temperature, &report);
            if (!std::isfinite(report.total))
                throw std::runtime_error("train_embeddings: loss diverged at pair " +
                                         std::to_string(idx) + " step " + std::to_string(step));
            result.loss_curve[step] += report.total;
            for (int p = 0; p < partitions; ++p)
                result.partition_curve[step][static_cast<std::size_t>(p)] +=
                    report.per_partition[static_cast<std::size_t>(p)].value;

            trained.features_a.values -= lr * grad.wrt_f1;
            trained.features_b.values -= lr * grad.wrt_f2;
            trained.features_a.normalized = false;
            trained.features_b.normalized = false;
            trained.features_a.l2_normalize_rows();
            trained.features_b.l2_normalize_rows();
        }
    }

    const auto n = static_cast<double>(scene_pairs.size());
    for (std::size_t step = 0; step < steps; ++step) {
        result.loss_curve[step] /= n;
        for (double& v : result.partition_curve[step]) v /= n;
    }
    return result;
}

SeparationStats separation_margin(const FeatureMatrix& fa, const FeatureMatrix& fb,
                                  const CorrespondenceSet& matches, std::uint64_t seed,
                                  std::size_t random_draws) {
    fa.validate();
    fb.validate();
    if (fa.dim() != fb.dim())
        throw std::invalid_argument("separation_margin: feature dimensions differ");
    SeparationStats stats;
    if (fa.rows() == 0 || fb.rows() == 0) return stats;

    double matched_sum = 0.0;
    std::unordered_set<std::uint64_t> matched_keys;
    matched_keys.reserve(matches.size() * 2);
    for (const auto& [i, j] : matches.pairs) {
        if (i >= fa.rows() || j >= fb.rows())
            throw std::invalid_argument("separation_margin: match index out of range");
        matched_sum += fa.values.row(i).dot(fb.values.row(j));
        matched_keys.insert((static_cast<std::uint64_t>(i) << 32) |
                            static_cast<std::uint32_t>(j));
    }
    stats.matched_count = matches.size();
    if (stats.matched_count > 0)
        stats.matched_mean = matched_sum / static_cast<double>(stats.matched_count);

    // Random baseline: uniform (i, j) draws, rejecting exact matched pairs.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_a(0, fa.rows() - 1);
    std::uniform_int_distribution<int> pick_b(0, fb.rows() - 1);
    const std::size_t total_pairs =
        static_cast<std::size_t>(fa.rows()) * static_cast<std::size_t>(fb.rows());
    double random_sum = 0.0;
    if (matched_keys.size() < total_pairs) {
        for (std::size_t d = 0; d < random_draws; ++d) {
            int i = pick_a(rng);
            int j = pick_b(rng);
            while (matched_keys.count((static_cast<std::uint64_t>(i) << 32) |
                                      static_cast<std::uint32_t>(j))) {
                i = pick_a(rng);
                j = pick_b(rng);
            }
            random_sum += fa.values.row(i).dot(fb.values.row(j));
        }
        stats.random_count = random_draws;
    }
    if (stats.random_count > 0)
        stats.random_mean = random_sum / static_cast<double>(stats.random_count);
    stats.margin = stats.matched_mean - stats.random_mean;
    return stats;
}

SeparationStats dataset_margin(const TrainResult& result, std::uint64_t seed,
                               std::size_t random_draws_per_pair) {
    double matched_sum = 0.0;
    double random_sum = 0.0;
    SeparationStats pooled;
    for (std::size_t idx = 0; idx < result.pairs.size(); ++idx) {
        const TrainedPair& tp = result.pairs[idx];
        const SeparationStats s =
            separation_margin(tp.features_a, tp.features_b, tp.sampled_matches,
                              pair_seed(seed, idx, 4), random_draws_per_pair);
        matched_sum += s.matched_mean * static_cast<double>(s.matched_count);
        random_sum += s.random_mean * static_cast<double>(s.random_count);
        pooled.matched_count += s.matched_count;
        pooled.random_count += s.random_count;
    }
    if (pooled.matched_count > 0)
        pooled.matched_mean = matched_sum / static_cast<double>(pooled.matched_count);
    if (pooled.random_count > 0)
        pooled.random_mean = random_sum / static_cast<double>(pooled.random_count);
    pooled.margin = pooled.matched_mean - pooled.random_mean;
    return pooled;
}

void write_loss_curve_csv(const std::string& path, const TrainResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.precision(17);
    const std::size_t partitions =
        result.partition_curve.empty() ? 0 : result.partition_curve.front().size();
    out << "step,total_loss";
    for (std::size_t p = 0; p < partitions; ++p) out << ",per_partition_" << p;
    out << "\n";
    for (std::size_t step = 0; step < result.loss_curve.size(); ++step) {
        out << step << "," << result.loss_curve[step];
        for (std::size_t p = 0; p < partitions; ++p)
            out << "," << result.partition_curve[step][p];
        out << "\n";
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace sck
