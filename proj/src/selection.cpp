#include "sck/selection.hpp"

#include "sck/kmeans.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace sck {

SelectionStrategy selection_strategy_from_string(const std::string& name) {
    if (name == "random") return SelectionStrategy::random;
    if (name == "kmeans_raw") return SelectionStrategy::kmeans_raw;
    if (name == "kmeans_features") return SelectionStrategy::kmeans_features;
    throw std::invalid_argument("unknown selection strategy: " + name);
}

std::string to_string(SelectionStrategy strategy) {
    switch (strategy) {
        case SelectionStrategy::random: return "random";
        case SelectionStrategy::kmeans_raw: return "kmeans_raw";
        case SelectionStrategy::kmeans_features: return "kmeans_features";
    }
    return "random";
}

namespace {

std::vector<int> all_indices(std::size_t n) {
    std::vector<int> out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::vector<int> random_sample(std::size_t n, int k, std::uint64_t seed) {
    std::vector<int> pool = all_indices(n);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                        pool.size() - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

// one index per cluster: the member nearest its centroid, ties to the
// lowest index; clusters that end up memberless are backfilled with the
// smallest unselected indices so the budget is always met
std::vector<int> centroid_representatives(const Eigen::MatrixXd& data, const KMeansResult& km,
                                          int k) {
    std::vector<int> rep(static_cast<std::size_t>(k), -1);
    std::vector<double> rep_d(static_cast<std::size_t>(k),
                              std::numeric_limits<double>::infinity());
    for (Eigen::Index m = 0; m < data.rows(); ++m) {
        const auto c = static_cast<std::size_t>(km.assignment[static_cast<std::size_t>(m)]);
        const double d = (data.row(m) - km.centroids.row(static_cast<Eigen::Index>(c)))
                             .squaredNorm();
        if (d < rep_d[c]) {
            rep_d[c] = d;
            rep[c] = static_cast<int>(m);
        }
    }
    std::set<int> chosen;
    for (int r : rep)
        if (r >= 0) chosen.insert(r);
    for (int m = 0; static_cast<int>(chosen.size()) < k; ++m) chosen.insert(m);
    return {chosen.begin(), chosen.end()};
}

Eigen::MatrixXd raw_data(const PointCloud& scene) {
    if (!scene.has_colors())
        throw std::invalid_argument("select_points: kmeans_raw needs point colors");
    Eigen::MatrixXd data(static_cast<Eigen::Index>(scene.size()), 6);
    for (std::size_t i = 0; i < scene.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        for (int c = 0; c < 3; ++c) data(r, c) = scene.colors[i][static_cast<std::size_t>(c)] / 255.0;
        data.row(r).tail<3>() = scene.positions[i].transpose();
    }
    return data;
}

Eigen::MatrixXd feature_data(const PointCloud& scene, const FeatureMatrix* features,
                             double xyz_weight) {
    if (!features)
        throw std::invalid_argument("select_points: kmeans_features needs a feature matrix");
    if (static_cast<std::size_t>(features->rows()) != scene.size())
        throw std::invalid_argument("select_points: feature rows must match the scene size");
    FeatureMatrix unit = *features;
    unit.normalized = false;
    unit.l2_normalize_rows();
    Eigen::MatrixXd data(static_cast<Eigen::Index>(scene.size()), unit.dim() + 3);
    data.leftCols(unit.dim()) = unit.values;
    for (std::size_t i = 0; i < scene.size(); ++i)
        data.row(static_cast<Eigen::Index>(i)).tail<3>() =
            xyz_weight * scene.positions[i].transpose();
    return data;
}

}  // namespace

SelectionResult select_points(const PointCloud& scene, const FeatureMatrix* features,
                              const LabelBudget& budget, SelectionStrategy strategy,
                              std::uint64_t seed, const SelectionConfig& cfg) {
    if (budget.points_per_scene < 1)
        throw std::invalid_argument("select_points: budget must be >= 1");
    if (scene.empty()) throw std::invalid_argument("select_points: empty scene");
    SelectionResult result;
    result.strategy = strategy;
    result.budget = budget.points_per_scene;
    result.seed = seed;

    const int k = budget.points_per_scene;
    if (static_cast<std::size_t>(k) >= scene.size()) {
        result.selected_indices = all_indices(scene.size());
        return result;
    }

    switch (strategy) {
        case SelectionStrategy::random:
            result.selected_indices = random_sample(scene.size(), k, seed);
            break;
        case SelectionStrategy::kmeans_raw: {
            const Eigen::MatrixXd data = raw_data(scene);
            const KMeansResult km = kmeans(data, k, cfg.kmeans_iterations, seed);
            result.selected_indices = centroid_representatives(data, km, k);
            break;
        }
        case SelectionStrategy::kmeans_features: {
            const Eigen::MatrixXd data = feature_data(scene, features, cfg.xyz_weight);
            const KMeansResult km = kmeans(data, k, cfg.kmeans_iterations, seed);
            result.selected_indices = centroid_representatives(data, km, k);
            break;
        }
    }
    return result;
}

double object_coverage(const PointCloud& scene, const SelectionResult& selection) {
    if (!scene.has_instances())
        throw std::invalid_argument("object_coverage: scene has no instance labels");
    std::set<int> all_ids(scene.instance_labels.begin(), scene.instance_labels.end());
    std::set<int> hit;
    for (int idx : selection.selected_indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= scene.size())
            throw std::invalid_argument("object_coverage: selection index out of range");
        hit.insert(scene.instance_labels[static_cast<std::size_t>(idx)]);
    }
    return static_cast<double>(hit.size()) / static_cast<double>(all_ids.size());
}

std::vector<std::uint8_t> expand_labels(const PointCloud& scene,
                                        const SelectionResult& selection) {
    if (!scene.has_semantics())
        throw std::invalid_argument("expand_labels: scene has no semantic labels");
    std::vector<std::uint8_t> mask(scene.size(), 255);
    for (int idx : selection.selected_indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= scene.size())
            throw std::invalid_argument("expand_labels: selection index out of range");
        const int label = scene.semantic_labels[static_cast<std::size_t>(idx)];
        if (label >= 255)
            throw std::invalid_argument("expand_labels: label collides with the ignore value");
        mask[static_cast<std::size_t>(idx)] = static_cast<std::uint8_t>(label);
    }
    return mask;
}

void write_selection(const std::string& path, const SelectionResult& selection) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "# strategy=" << to_string(selection.strategy) << " budget=" << selection.budget
        << " seed=" << selection.seed << "\n";
    for (int idx : selection.selected_indices) out << idx << "\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

SelectionResult read_selection(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error(path + ": empty file");
    char strategy[64] = {0};
    int budget = 0;
    unsigned long long seed = 0;
    if (std::sscanf(header.c_str(), "# strategy=%63s budget=%d seed=%llu", strategy, &budget,
                    &seed) != 3)
        throw std::runtime_error(path + ": bad header line");
    SelectionResult result;
    result.strategy = selection_strategy_from_string(strategy);
    result.budget = budget;
    result.seed = seed;
    int idx = 0;
    while (in >> idx) result.selected_indices.push_back(idx);
    return result;
}

}  // namespace sck
