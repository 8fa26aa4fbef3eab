#include "sck/instance_clustering.hpp"

#include "sck/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sck {

PointCloud shift_points(const PointCloud& cloud, const std::vector<Eigen::Vector3d>& offsets) {
    if (offsets.size() != cloud.size())
        throw std::invalid_argument("shift_points: offset count does not match the cloud");
    PointCloud out = cloud;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!offsets[i].allFinite())
            throw std::invalid_argument("shift_points: non-finite offset at " + std::to_string(i));
        out.positions[i] += offsets[i];
    }
    return out;
}

InstancePrediction bfs_cluster(const PointCloud& shifted, const std::vector<int>& semantic_labels,
                               double radius, int min_cluster_size) {
    if (!(radius > 0.0)) throw std::invalid_argument("bfs_cluster: radius must be positive");
    if (min_cluster_size < 1)
        throw std::invalid_argument("bfs_cluster: min_cluster_size must be >= 1");
    if (semantic_labels.size() != shifted.size())
        throw std::invalid_argument("bfs_cluster: label count does not match the cloud");

    InstancePrediction pred;
    pred.instance_of.assign(shifted.size(), -1);
    if (shifted.empty()) return pred;

    const SpatialIndex index(shifted.positions);
    std::vector<char> visited(shifted.size(), 0);
    std::deque<int> queue;
    for (std::size_t seed = 0; seed < shifted.size(); ++seed) {
        if (visited[seed]) continue;
        visited[seed] = 1;
        queue.clear();
        queue.push_back(static_cast<int>(seed));
        std::vector<int> component;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            component.push_back(u);
            const auto neighbors =
                index.radius_query(shifted.positions[static_cast<std::size_t>(u)], radius);
            for (int v : neighbors) {
                if (visited[static_cast<std::size_t>(v)]) continue;
                if (semantic_labels[static_cast<std::size_t>(v)] !=
                    semantic_labels[static_cast<std::size_t>(u)])
                    continue;
                visited[static_cast<std::size_t>(v)] = 1;
                queue.push_back(v);
            }
        }
        if (static_cast<int>(component.size()) < min_cluster_size) continue;
        std::sort(component.begin(), component.end());
        const int id = static_cast<int>(pred.instances.size());
        for (int m : component) pred.instance_of[static_cast<std::size_t>(m)] = id;
        InstanceInfo info;
        info.semantic_label = semantic_labels[static_cast<std::size_t>(component.front())];
        info.members = std::move(component);
        pred.instances.push_back(std::move(info));
    }
    return pred;
}

void score_instances(InstancePrediction& pred, const FeatureMatrix& class_scores) {
    class_scores.validate();
    if (static_cast<std::size_t>(class_scores.rows()) != pred.instance_of.size())
        throw std::invalid_argument("score_instances: score rows must match the point count");
    if ((class_scores.values.array() < 0.0).any() || (class_scores.values.array() > 1.0).any())
        throw std::invalid_argument("score_instances: scores must lie in [0, 1]");
    for (auto& inst : pred.instances) {
        if (inst.semantic_label >= class_scores.dim())
            throw std::invalid_argument("score_instances: semantic label outside score columns");
        double sum = 0.0;
        for (int m : inst.members) sum += class_scores.values(m, inst.semantic_label);
        inst.confidence = inst.members.empty()
                              ? 0.0
                              : sum / static_cast<double>(inst.members.size());
    }
}

void write_prediction(const std::string& path, const InstancePrediction& pred) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.precision(17);
    out << "# points " << pred.instance_of.size() << "\n";
    for (std::size_t i = 0; i < pred.instance_of.size(); ++i)
        out << i << " " << pred.instance_of[i] << "\n";
    out << "# instances " << pred.instances.size() << "\n";
    for (std::size_t k = 0; k < pred.instances.size(); ++k)
        out << k << " " << pred.instances[k].semantic_label << " "
            << pred.instances[k].confidence << "\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

InstancePrediction read_prediction(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::string word;
    std::size_t n_points = 0;
    if (!(in >> word >> word >> n_points) || word != "points")
        throw std::runtime_error(path + ": bad point header");
    InstancePrediction pred;
    pred.instance_of.assign(n_points, -1);
    for (std::size_t i = 0; i < n_points; ++i) {
        std::size_t idx = 0;
        int id = 0;
        if (!(in >> idx >> id) || idx >= n_points)
            throw std::runtime_error(path + ": bad point line");
        pred.instance_of[idx] = id;
    }
    std::size_t n_instances = 0;
    if (!(in >> word >> word >> n_instances) || word != "instances")
        throw std::runtime_error(path + ": bad instance header");
    pred.instances.resize(n_instances);
    for (std::size_t k = 0; k < n_instances; ++k) {
        std::size_t id = 0;
        if (!(in >> id >> pred.instances[k].semantic_label >> pred.instances[k].confidence) ||
            id != k)
            throw std::runtime_error(path + ": bad instance line");
    }
    for (std::size_t i = 0; i < n_points; ++i) {
        const int id = pred.instance_of[i];
        if (id < 0) continue;
        if (static_cast<std::size_t>(id) >= n_instances)
            throw std::runtime_error(path + ": instance id out of range");
        pred.instances[static_cast<std::size_t>(id)].members.push_back(static_cast<int>(i));
    }
    return pred;
}

}  // namespace sck
