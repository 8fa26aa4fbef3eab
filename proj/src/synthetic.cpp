#include "sck/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sck {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Pose random_pose(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Quaterniond q;
    do {
        q = Eigen::Quaterniond(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    } while (q.norm() < 1e-6);
    q.normalize();
    std::uniform_real_distribution<double> shift(-2.0, 2.0);
    Pose pose;
    pose.rotation = q.toRotationMatrix();
    pose.translation = Eigen::Vector3d(shift(rng), shift(rng), shift(rng));
    return pose;
}

// keeps the points whose projection along `dir` is at or below the
// keep-fraction quantile
std::vector<int> cull_half_space(const PointCloud& cloud, const Eigen::Vector3d& dir,
                                 double keep_fraction) {
    std::vector<double> proj(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) proj[i] = dir.dot(cloud.positions[i]);
    std::vector<double> sorted = proj;
    std::sort(sorted.begin(), sorted.end());
    const auto q_index = static_cast<std::size_t>(
        std::floor(keep_fraction * static_cast<double>(cloud.size() - 1)));
    const double threshold = sorted[q_index];
    std::vector<int> kept;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (proj[i] <= threshold) kept.push_back(static_cast<int>(i));
    return kept;
}

PointCloud gather(const PointCloud& cloud, const std::vector<int>& indices) {
    PointCloud out;
    out.positions.reserve(indices.size());
    for (int i : indices) {
        const auto u = static_cast<std::size_t>(i);
        out.positions.push_back(cloud.positions[u]);
        if (cloud.has_colors()) out.colors.push_back(cloud.colors[u]);
        if (cloud.has_semantics()) out.semantic_labels.push_back(cloud.semantic_labels[u]);
        if (cloud.has_instances()) out.instance_labels.push_back(cloud.instance_labels[u]);
    }
    return out;
}

}  // namespace

void SyntheticSceneSpec::validate() const {
    if (object_count < 1)
        throw std::invalid_argument("synthetic: object_count must be >= 1");
    if (!(extent.array() > 0.0).all())
        throw std::invalid_argument("synthetic: degenerate extent");
    if (noise_stddev < 0.0) throw std::invalid_argument("synthetic: negative noise");
    if (points_per_object_min < 1 || points_per_object_max < points_per_object_min)
        throw std::invalid_argument("synthetic: bad points_per_object range");
    if (num_classes < 1) throw std::invalid_argument("synthetic: num_classes must be >= 1");
    if (!(view_keep_fraction > 0.0) || view_keep_fraction > 1.0)
        throw std::invalid_argument("synthetic: view_keep_fraction must be in (0, 1]");
}

SyntheticScene generate_synthetic_scene(const SyntheticSceneSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SyntheticScene scene;
    std::vector<Eigen::Vector3d> centers;
    for (int o = 0; o < spec.object_count; ++o) {
        const int class_id =
            std::uniform_int_distribution<int>(0, spec.num_classes - 1)(rng);
        const bool is_box = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
        const double half = 0.15 + 0.3 * unit(rng);

        Eigen::Vector3d center;
        for (int attempt = 0; attempt < 64; ++attempt) {
            for (int c = 0; c < 3; ++c) {
                const double margin = std::min(half, spec.extent[c] / 2.0);
                center[c] = margin + unit(rng) * (spec.extent[c] - 2.0 * margin);
            }
            bool ok = true;
            for (const auto& prev : centers)
                if ((prev - center).norm() < spec.min_center_separation) ok = false;
            if (ok) break;
        }
        centers.push_back(center);

        std::array<std::uint8_t, 3> color;
        for (auto& ch : color)
            ch = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 255)(rng));

        const int count = std::uniform_int_distribution<int>(spec.points_per_object_min,
                                                             spec.points_per_object_max)(rng);
        for (int i = 0; i < count; ++i) {
            Eigen::Vector3d p;
            if (is_box) {
                for (int c = 0; c < 3; ++c) p[c] = center[c] + (2.0 * unit(rng) - 1.0) * half;
            } else {
                Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
                while (d.norm() < 1e-9) d = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
                p = center + d.normalized() * half * std::cbrt(unit(rng));
            }
            if (spec.noise_stddev > 0.0)
                for (int c = 0; c < 3; ++c) p[c] += spec.noise_stddev * gauss(rng);
            scene.full.positions.push_back(p);
            scene.full.colors.push_back(color);
            scene.full.semantic_labels.push_back(class_id);
            scene.full.instance_labels.push_back(o);
        }
    }

    // offsets point at the (post-noise) instance centroids
    std::map<int, Eigen::Vector3d> sums;
    std::map<int, int> counts;
    for (std::size_t i = 0; i < scene.full.size(); ++i) {
        const int inst = scene.full.instance_labels[i];
        auto [it, fresh] = sums.try_emplace(inst, Eigen::Vector3d::Zero());
        it->second += scene.full.positions[i];
        ++counts[inst];
    }
    scene.gt_offsets.resize(scene.full.size());
    for (std::size_t i = 0; i < scene.full.size(); ++i) {
        const int inst = scene.full.instance_labels[i];
        scene.gt_offsets[i] =
            sums[inst] / static_cast<double>(counts[inst]) - scene.full.positions[i];
    }

    // per-instance world boxes
    std::map<int, BoxAnnotation> box_map;
    for (std::size_t i = 0; i < scene.full.size(); ++i) {
        const int inst = scene.full.instance_labels[i];
        auto [it, fresh] = box_map.try_emplace(inst);
        if (fresh) {
            it->second.bmin = it->second.bmax = scene.full.positions[i];
            it->second.class_id = scene.full.semantic_labels[i];
        } else {
            it->second.bmin = it->second.bmin.cwiseMin(scene.full.positions[i]);
            it->second.bmax = it->second.bmax.cwiseMax(scene.full.positions[i]);
        }
    }
    for (const auto& [inst, box] : box_map) scene.boxes.push_back(box);

    // two horizontal culling directions 60-120 degrees apart
    const double theta_a = 2.0 * kPi * unit(rng);
    const double delta = kPi / 3.0 + (kPi / 3.0) * unit(rng);
    const double sign = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? 1.0 : -1.0;
    const double theta_b = theta_a + sign * delta;
    const Eigen::Vector3d dir_a(std::cos(theta_a), std::sin(theta_a), 0.0);
    const Eigen::Vector3d dir_b(std::cos(theta_b), std::sin(theta_b), 0.0);

    scene.view_a_master = cull_half_space(scene.full, dir_a, spec.view_keep_fraction);
    scene.view_b_master = cull_half_space(scene.full, dir_b, spec.view_keep_fraction);

    const PointCloud world_a = gather(scene.full, scene.view_a_master);
    const PointCloud world_b = gather(scene.full, scene.view_b_master);
    scene.pose_a = random_pose(rng);
    scene.pose_b = random_pose(rng);
    scene.view_a = transform(world_a, scene.pose_a.inverse());
    scene.view_b = transform(world_b, scene.pose_b.inverse());

    // shared master points give exact correspondences
    std::vector<int> pos_in_b(scene.full.size(), -1);
    for (std::size_t k = 0; k < scene.view_b_master.size(); ++k)
        pos_in_b[static_cast<std::size_t>(scene.view_b_master[k])] = static_cast<int>(k);
    scene.gt_matches.match_radius = 1e-6;
    for (std::size_t k = 0; k < scene.view_a_master.size(); ++k) {
        const int master = scene.view_a_master[k];
        if (pos_in_b[static_cast<std::size_t>(master)] >= 0)
            scene.gt_matches.pairs.emplace_back(static_cast<int>(k),
                                                pos_in_b[static_cast<std::size_t>(master)]);
    }
    return scene;
}

std::vector<SyntheticScene> make_scene_set(int num_scenes, const SyntheticSceneSpec& base,
                                           std::uint64_t seed) {
    if (num_scenes < 1) throw std::invalid_argument("make_scene_set: need >= 1 scene");
    std::vector<SyntheticScene> scenes;
    scenes.reserve(static_cast<std::size_t>(num_scenes));
    for (int i = 0; i < num_scenes; ++i) {
        SyntheticSceneSpec spec = base;
        spec.seed = mix_seed(seed + static_cast<std::uint64_t>(i));
        scenes.push_back(generate_synthetic_scene(spec));
    }
    return scenes;
}

ScenePair to_scene_pair(const SyntheticScene& scene) {
    ScenePair pair;
    pair.cloud_a = scene.view_a;
    pair.cloud_b = scene.view_b;
    pair.pose_a = scene.pose_a;
    pair.pose_b = scene.pose_b;
    pair.matches = scene.gt_matches;
    return pair;
}

std::vector<ScenePair> make_benchmark_dataset(int num_scenes, const SyntheticSceneSpec& base,
                                              std::uint64_t seed) {
    std::vector<ScenePair> pairs;
    const auto scenes = make_scene_set(num_scenes, base, seed);
    pairs.reserve(scenes.size());
    for (const auto& s : scenes) pairs.push_back(to_scene_pair(s));
    return pairs;
}

SyntheticScene make_cluttered_scene(std::uint64_t seed, int object_count) {
    SyntheticSceneSpec spec;
    spec.object_count = object_count;
    spec.extent = Eigen::Vector3d(8.0, 8.0, 3.0);
    spec.points_per_object_min = 40;
    spec.points_per_object_max = 2500;  // a few dominant objects soak up random picks
    spec.num_classes = 6;
    spec.seed = seed;
    spec.min_center_separation = 0.8;
    return generate_synthetic_scene(spec);
}

FeatureMatrix instance_features(const PointCloud& scene, int dim, double noise,
                                std::uint64_t seed) {
    if (!scene.has_instances())
        throw std::invalid_argument("instance_features: scene has no instance labels");
    if (dim < 2) throw std::invalid_argument("instance_features: dim must be >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::map<int, Eigen::VectorXd> prototypes;
    for (std::size_t i = 0; i < scene.size(); ++i) prototypes.try_emplace(scene.instance_labels[i]);
    for (auto& [inst, proto] : prototypes) {  // map order keeps draws deterministic
        proto.resize(dim);
        for (int c = 0; c < dim; ++c) proto[c] = gauss(rng);
        proto.normalize();
    }

    FeatureMatrix f;
    f.values.resize(static_cast<Eigen::Index>(scene.size()), dim);
    for (std::size_t i = 0; i < scene.size(); ++i) {
        const Eigen::VectorXd& proto = prototypes[scene.instance_labels[i]];
        for (int c = 0; c < dim; ++c) f.values(static_cast<Eigen::Index>(i), c) =
            proto[c] + noise * gauss(rng);
    }
    f.l2_normalize_rows();
    return f;
}

}  // namespace sck
