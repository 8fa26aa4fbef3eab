#include "sck/sweep.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace sck {

namespace {

std::uint64_t cell_probe_seed(std::uint64_t base, std::size_t pair_index) {
    std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (pair_index + 1) + 5;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Response variable: margin pooled over every pair's FULL correspondence set,
// not just the sampled subset the loss ran on. Matches left untrained by a
// small budget stay near their random init, so the budget axis is reflected
// in the response rather than hidden by measuring only what was trained.
double full_match_margin(const std::vector<ScenePair>& dataset, const TrainResult& trained,
                         std::uint64_t seed) {
    double matched_sum = 0.0;
    double random_sum = 0.0;
    std::size_t matched_count = 0;
    std::size_t random_count = 0;
    for (std::size_t idx = 0; idx < dataset.size(); ++idx) {
        const TrainedPair& tp = trained.pairs[idx];
        const SeparationStats s = separation_margin(tp.features_a, tp.features_b,
                                                    dataset[idx].matches,
                                                    cell_probe_seed(seed, idx));
        matched_sum += s.matched_mean * static_cast<double>(s.matched_count);
        random_sum += s.random_mean * static_cast<double>(s.random_count);
        matched_count += s.matched_count;
        random_count += s.random_count;
    }
    const double matched_mean =
        matched_count > 0 ? matched_sum / static_cast<double>(matched_count) : 0.0;
    const double random_mean =
        random_count > 0 ? random_sum / static_cast<double>(random_count) : 0.0;
    return matched_mean - random_mean;
}

}  // namespace

const SweepCell& SweepResult::at(int points, int partitions) const {
    for (const auto& cell : cells)
        if (cell.points == points && cell.partitions == partitions) return cell;
    throw std::invalid_argument("sweep: no such cell");
}

SweepResult sweep_partitions(const std::vector<ScenePair>& dataset, const SweepConfig& cfg) {
    if (cfg.points_grid.empty() || cfg.partitions_grid.empty())
        throw std::invalid_argument("sweep: empty grid");
    SweepResult result;
    result.points_grid = cfg.points_grid;
    result.partitions_grid = cfg.partitions_grid;
    for (int points : cfg.points_grid) {
        for (int partitions : cfg.partitions_grid) {
            LossConfig loss = cfg.loss;
            loss.num_sampled_matches = points;
            loss.partition = PartitionConfig::from_partition_count(partitions, cfg.shell_boundary);
            const TrainResult trained = train_embeddings(dataset, loss, cfg.opt);
            SweepCell cell;
            cell.points = points;
            cell.partitions = partitions;
            cell.margin = full_match_margin(dataset, trained, cfg.opt.seed);
            cell.final_loss = trained.loss_curve.empty() ? 0.0 : trained.loss_curve.back();
            result.cells.push_back(cell);
        }
    }
    return result;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.precision(17);
    out << "points\\partitions";
    for (int p : result.partitions_grid) out << "," << p;
    out << "\n";
    for (int n : result.points_grid) {
        out << n;
        for (int p : result.partitions_grid) out << "," << result.at(n, p).margin;
        out << "\n";
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace sck
