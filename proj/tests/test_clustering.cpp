#include "sck/instance_clustering.hpp"
#include "sck/synthetic.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace {

// two tight groups of four, 10 meters apart
sck::PointCloud two_blobs() {
    sck::PointCloud cloud;
    for (int i = 0; i < 4; ++i) cloud.positions.emplace_back(0.001 * i, 0.0, 0.0);
    for (int i = 0; i < 4; ++i) cloud.positions.emplace_back(10.0 + 0.001 * i, 0.0, 0.0);
    return cloud;
}

}  // namespace

TEST_CASE("point shifting") {
    sck::PointCloud cloud;
    cloud.positions = {{1, 2, 3}, {4, 5, 6}};
    cloud.semantic_labels = {3, 8};
    const std::vector<Eigen::Vector3d> offsets = {{0.5, 0, 0}, {0, -1, 0}};

    const auto shifted = sck::shift_points(cloud, offsets);
    CHECK(shifted.positions[0] == Eigen::Vector3d(1.5, 2, 3));
    CHECK(shifted.positions[1] == Eigen::Vector3d(4, 4, 6));
    CHECK(shifted.semantic_labels == cloud.semantic_labels);

    CHECK_THROWS_AS(sck::shift_points(cloud, {{0, 0, 0}}), std::invalid_argument);
    const std::vector<Eigen::Vector3d> bad = {{0, 0, 0},
                                              {std::numeric_limits<double>::quiet_NaN(), 0, 0}};
    CHECK_THROWS_AS(sck::shift_points(cloud, bad), std::invalid_argument);
}

TEST_CASE("bfs clustering forced examples") {
    SUBCASE("two far blobs, two instances, discovery order") {
        const auto cloud = two_blobs();
        const std::vector<int> labels(8, 1);
        const auto pred = sck::bfs_cluster(cloud, labels, 0.01, 2);
        REQUIRE(pred.instances.size() == 2);
        CHECK(pred.instance_of == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1});
        CHECK(pred.instances[0].members == std::vector<int>{0, 1, 2, 3});
        CHECK(pred.instances[1].members == std::vector<int>{4, 5, 6, 7});
        CHECK(pred.instances[0].semantic_label == 1);
    }
    SUBCASE("a chain connects transitively") {
        // consecutive gaps 0.02 < radius, total span 0.08 >> radius
        sck::PointCloud chain;
        for (int i = 0; i < 5; ++i) chain.positions.emplace_back(0.02 * i, 0.0, 0.0);
        const auto pred = sck::bfs_cluster(chain, std::vector<int>(5, 0), 0.025, 2);
        REQUIRE(pred.instances.size() == 1);
        CHECK(pred.instances[0].members == std::vector<int>{0, 1, 2, 3, 4});
    }
    SUBCASE("labels gate the expansion") {
        // alternating classes along a tight line: proximity alone would merge
        // everything, the label gate splits it into the two interleaved combs
        sck::PointCloud comb;
        std::vector<int> labels;
        for (int i = 0; i < 20; ++i) {
            comb.positions.emplace_back(0.01 * i, 0.0, 0.0);
            labels.push_back(i % 2);
        }
        const auto pred = sck::bfs_cluster(comb, labels, 0.03, 2);
        REQUIRE(pred.instances.size() == 2);
        for (int i = 0; i < 20; ++i) CHECK(pred.instance_of[static_cast<std::size_t>(i)] == i % 2);
        CHECK(pred.instances[0].semantic_label == 0);
        CHECK(pred.instances[1].semantic_label == 1);
    }
    SUBCASE("small components stay unassigned") {
        const auto cloud = two_blobs();
        std::vector<int> labels(8, 1);
        labels[7] = 2;  // strands the last point alone in its class
        const auto pred = sck::bfs_cluster(cloud, labels, 0.01, 2);
        REQUIRE(pred.instances.size() == 2);
        CHECK(pred.instance_of[7] == -1);
        CHECK(pred.instances[1].members == std::vector<int>{4, 5, 6});
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(sck::bfs_cluster(two_blobs(), std::vector<int>(3, 0), 0.01, 2),
                        std::invalid_argument);
        CHECK_THROWS_AS(sck::bfs_cluster(two_blobs(), std::vector<int>(8, 0), -1.0, 2),
                        std::invalid_argument);
    }
}

TEST_CASE("bfs clustering equals the union-find scan") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::uniform_int_distribution<int> label_pick(0, 2);
    std::uniform_int_distribution<int> count_pick(50, 400);
    for (int t = 0; t < 50; ++t) {
        const int n = count_pick(rng);
        sck::PointCloud cloud;
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) {
            cloud.positions.emplace_back(coord(rng), coord(rng), coord(rng));
            labels.push_back(label_pick(rng));
        }
        const int min_size = 1 + t % 4;
        const auto pred = sck::bfs_cluster(cloud, labels, 0.08, min_size);
        const auto slow = oracle::components_scan(cloud.positions, labels, 0.08, min_size);

        REQUIRE(pred.instance_of == slow.component_of);
        REQUIRE(pred.instances.size() == slow.members.size());
        for (std::size_t k = 0; k < slow.members.size(); ++k)
            REQUIRE(pred.instances[k].members == slow.members[k]);
    }
}

TEST_CASE("instance recovery from exact offsets") {
    sck::SyntheticSceneSpec spec;
    spec.object_count = 6;
    spec.num_classes = 3;
    spec.min_center_separation = 1.0;
    spec.points_per_object_min = 64;
    spec.points_per_object_max = 200;
    spec.seed = 51;
    const auto scene = sck::generate_synthetic_scene(spec);

    const auto shifted = sck::shift_points(scene.full, scene.gt_offsets);
    const auto pred =
        sck::bfs_cluster(shifted, scene.full.semantic_labels, 0.03, 10);

    // every point collapses onto its instance centroid, so predicted
    // components must reproduce the ground-truth instance partition
    REQUIRE(pred.instances.size() ==
            static_cast<std::size_t>(*std::max_element(scene.full.instance_labels.begin(),
                                                       scene.full.instance_labels.end()) +
                                     1));
    for (std::size_t i = 0; i < scene.full.size(); ++i) {
        REQUIRE(pred.instance_of[i] >= 0);
        // same component exactly when same gt instance
        for (std::size_t j = i + 1; j < std::min(scene.full.size(), i + 40); ++j)
            REQUIRE((pred.instance_of[i] == pred.instance_of[j]) ==
                    (scene.full.instance_labels[i] == scene.full.instance_labels[j]));
    }
}

TEST_CASE("instance scoring") {
    sck::PointCloud cloud;
    for (int i = 0; i < 4; ++i) cloud.positions.emplace_back(0.001 * i, 0.0, 0.0);
    sck::InstancePrediction pred = sck::bfs_cluster(cloud, {2, 2, 2, 2}, 0.01, 2);
    REQUIRE(pred.instances.size() == 1);

    sck::FeatureMatrix scores;
    scores.values.resize(4, 3);
    scores.values << 0.1, 0.1, 0.8,  //
        0.2, 0.2, 0.6,               //
        0.3, 0.3, 0.4,               //
        0.0, 0.0, 1.0;
    sck::score_instances(pred, scores);
    CHECK(pred.instances[0].confidence == doctest::Approx(0.7).epsilon(1e-15));

    SUBCASE("row count must match") {
        sck::FeatureMatrix bad;
        bad.values = Eigen::MatrixXd::Constant(3, 3, 0.5);
        CHECK_THROWS_AS(sck::score_instances(pred, bad), std::invalid_argument);
    }
    SUBCASE("scores live in the unit interval") {
        sck::FeatureMatrix bad;
        bad.values = Eigen::MatrixXd::Constant(4, 3, 1.5);
        CHECK_THROWS_AS(sck::score_instances(pred, bad), std::invalid_argument);
    }
    SUBCASE("class column must exist") {
        sck::FeatureMatrix narrow;
        narrow.values = Eigen::MatrixXd::Constant(4, 2, 0.5);  // class id 2 out of range
        CHECK_THROWS_AS(sck::score_instances(pred, narrow), std::invalid_argument);
    }
}

TEST_CASE("prediction files round trip") {
    const auto cloud = two_blobs();
    auto pred = sck::bfs_cluster(cloud, std::vector<int>(8, 3), 0.01, 2);
    sck::FeatureMatrix scores;
    scores.values = Eigen::MatrixXd::Constant(8, 4, 0.25);
    sck::score_instances(pred, scores);

    const auto dir = std::filesystem::temp_directory_path() / "sck_tests";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "prediction.txt").string();
    sck::write_prediction(path, pred);
    const auto loaded = sck::read_prediction(path);

    CHECK(loaded.instance_of == pred.instance_of);
    REQUIRE(loaded.instances.size() == pred.instances.size());
    for (std::size_t k = 0; k < pred.instances.size(); ++k) {
        CHECK(loaded.instances[k].semantic_label == pred.instances[k].semantic_label);
        CHECK(loaded.instances[k].confidence ==
              doctest::Approx(pred.instances[k].confidence).epsilon(1e-15));
        CHECK(loaded.instances[k].members == pred.instances[k].members);
    }
    CHECK_THROWS_AS(sck::read_prediction((dir / "missing.txt").string()), std::runtime_error);
}
