#pragma once

#include "sck/loss.hpp"
#include "sck/trainer.hpp"

#include <string>
#include <vector>

namespace sck {

struct SweepConfig {
    std::vector<int> points_grid;      // sampled-match budgets (rows)
    std::vector<int> partitions_grid;  // partition counts (columns)
    LossConfig loss;                   // base; partition and budget set per cell
    OptimizerConfig opt;
    double shell_boundary = 1.25;
};

struct SweepCell {
    int points = 0;
    int partitions = 0;
    // Matched-vs-random separation after training, pooled over every pair's
    // full correspondence set (not just the sampled subset), so a budget too
    // small to cover the matches shows up as a lower margin.
    double margin = 0.0;
    double final_loss = 0.0;
};

struct SweepResult {
    std::vector<int> points_grid;
    std::vector<int> partitions_grid;
    std::vector<SweepCell> cells;  // row-major: points x partitions

    const SweepCell& at(int points, int partitions) const;
};

// Trains the dataset once per (points, partitions) cell and records the
// separation margin. Cells run in grid order with the same optimizer seed,
// so the result is a pure function of (dataset, cfg).
SweepResult sweep_partitions(const std::vector<ScenePair>& dataset, const SweepConfig& cfg);

// CSV grid, rows = points, columns = partitions.
void write_sweep_csv(const std::string& path, const SweepResult& result);

}  // namespace sck
