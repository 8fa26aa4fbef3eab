#pragma once

#include "sck/cloud.hpp"
#include "sck/features.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sck {

enum class SelectionStrategy { random, kmeans_raw, kmeans_features };

SelectionStrategy selection_strategy_from_string(const std::string& name);
std::string to_string(SelectionStrategy strategy);

struct LabelBudget {
    int points_per_scene = 20;
};

struct SelectionResult {
    std::vector<int> selected_indices;  // unique, ascending
    SelectionStrategy strategy = SelectionStrategy::random;
    int budget = 0;
    std::uint64_t seed = 0;
};

struct SelectionConfig {
    int kmeans_iterations = 50;
    double xyz_weight = 1.0;  // scale of the coordinate block next to features
};

// Picks min(budget, scene size) annotation points. random draws uniformly;
// kmeans_raw clusters [rgb/255, xyz] (colors required); kmeans_features
// clusters [row-normalized features, xyz_weight * xyz] and needs one feature
// row per point. k-means strategies return the member nearest each centroid;
// a budget >= scene size returns every index.
SelectionResult select_points(const PointCloud& scene, const FeatureMatrix* features,
                              const LabelBudget& budget, SelectionStrategy strategy,
                              std::uint64_t seed, const SelectionConfig& cfg = {});

// Fraction of the scene's distinct instance ids hit by >= 1 selected point.
// Throws std::invalid_argument when the scene has no instance labels.
double object_coverage(const PointCloud& scene, const SelectionResult& selection);

// Per-point label mask: the scene's semantic label at selected points, 255
// (ignore) everywhere else. Labels must fit below the sentinel.
std::vector<std::uint8_t> expand_labels(const PointCloud& scene,
                                        const SelectionResult& selection);

// Text: "# strategy=<s> budget=<k> seed=<n>" then one index per line.
void write_selection(const std::string& path, const SelectionResult& selection);
SelectionResult read_selection(const std::string& path);

}  // namespace sck
