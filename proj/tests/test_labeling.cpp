#include "sck/kmeans.hpp"
#include "sck/selection.hpp"
#include "sck/synthetic.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace {

Eigen::MatrixXd blob_data(std::uint64_t seed, const std::vector<Eigen::Vector2d>& centers,
                          int per_blob, double spread) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, spread);
    Eigen::MatrixXd data(static_cast<Eigen::Index>(centers.size()) * per_blob, 2);
    Eigen::Index row = 0;
    for (const auto& c : centers)
        for (int i = 0; i < per_blob; ++i, ++row)
            data.row(row) << c.x() + gauss(rng), c.y() + gauss(rng);
    return data;
}

// brute-force nearest centroid, ties to the lowest id
int nearest_centroid(const Eigen::MatrixXd& centroids, const Eigen::RowVectorXd& point) {
    int best = 0;
    double best_d2 = (centroids.row(0) - point).squaredNorm();
    for (int c = 1; c < centroids.rows(); ++c) {
        const double d2 = (centroids.row(c) - point).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("kmeans") {
    SUBCASE("one cluster is the mean") {
        Eigen::MatrixXd data(4, 2);
        data << 0, 0, 2, 0, 0, 2, 2, 2;
        const auto result = sck::kmeans(data, 1, 10, 0);
        REQUIRE(result.centroids.rows() == 1);
        CHECK(result.centroids(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(result.centroids(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(result.assignment == std::vector<int>{0, 0, 0, 0});
    }
    SUBCASE("well separated blobs are recovered under restarts") {
        // a single unlucky init may stall in a local optimum, so scan seeds
        // and demand that restarts find the true clustering
        const std::vector<Eigen::Vector2d> centers = {{0, 0}, {10, 0}, {0, 10}};
        const auto data = blob_data(11, centers, 50, 0.2);
        bool recovered = false;
        for (std::uint64_t seed = 0; seed < 8 && !recovered; ++seed) {
            const auto result = sck::kmeans(data, 3, 50, seed);
            bool ok = true;
            for (int b = 0; b < 3 && ok; ++b) {
                const int label = result.assignment[static_cast<std::size_t>(b) * 50];
                for (int i = 0; i < 50 && ok; ++i)
                    ok = result.assignment[static_cast<std::size_t>(b * 50 + i)] == label;
                ok = ok && (result.centroids.row(label).transpose() -
                            Eigen::Vector2d(centers[static_cast<std::size_t>(b)]))
                                   .norm() < 0.2;
            }
            recovered = ok;
        }
        CHECK(recovered);
    }
    SUBCASE("objective never increases") {
        const auto data = blob_data(13, {{0, 0}, {3, 1}, {1, 4}, {5, 5}}, 40, 1.0);
        const auto result = sck::kmeans(data, 6, 40, 7);
        REQUIRE(!result.objective_curve.empty());
        for (std::size_t i = 1; i < result.objective_curve.size(); ++i)
            CHECK(result.objective_curve[i] <= result.objective_curve[i - 1] + 1e-9);
    }
    SUBCASE("returned labels are the nearest returned centroid") {
        const auto data = blob_data(17, {{0, 0}, {4, 2}, {2, 6}}, 60, 1.5);
        const auto result = sck::kmeans(data, 5, 30, 9);
        for (Eigen::Index r = 0; r < data.rows(); ++r)
            REQUIRE(result.assignment[static_cast<std::size_t>(r)] ==
                    nearest_centroid(result.centroids, data.row(r)));
    }
    SUBCASE("same seed, same clustering") {
        const auto data = blob_data(19, {{0, 0}, {5, 5}}, 100, 1.0);
        const auto a = sck::kmeans(data, 4, 25, 21);
        const auto b = sck::kmeans(data, 4, 25, 21);
        CHECK(a.assignment == b.assignment);
        CHECK((a.centroids - b.centroids).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.objective_curve == b.objective_curve);
    }
    SUBCASE("argument validation") {
        const auto data = blob_data(23, {{0, 0}}, 10, 1.0);
        CHECK_THROWS_AS(sck::kmeans(data, 0, 10, 0), std::invalid_argument);
        CHECK_THROWS_AS(sck::kmeans(data, 11, 10, 0), std::invalid_argument);
        CHECK_THROWS_AS(sck::kmeans(data, 2, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("selection strategies") {
    const auto scene = sck::make_cluttered_scene(31, 12);
    const auto features = sck::instance_features(scene.full, 8, 0.05, 32);
    sck::LabelBudget budget;
    budget.points_per_scene = 20;

    SUBCASE("random selection meets the budget exactly") {
        const auto sel = sck::select_points(scene.full, nullptr, budget,
                                            sck::SelectionStrategy::random, 5);
        REQUIRE(sel.selected_indices.size() == 20);
        CHECK(std::is_sorted(sel.selected_indices.begin(), sel.selected_indices.end()));
        const std::set<int> unique(sel.selected_indices.begin(), sel.selected_indices.end());
        CHECK(unique.size() == 20);
        for (int idx : sel.selected_indices) {
            CHECK(idx >= 0);
            CHECK(idx < static_cast<int>(scene.full.size()));
        }
        const auto again = sck::select_points(scene.full, nullptr, budget,
                                              sck::SelectionStrategy::random, 5);
        CHECK(again.selected_indices == sel.selected_indices);
    }
    SUBCASE("a budget covering the scene returns every point") {
        sck::PointCloud tiny;
        tiny.positions = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
        const auto sel =
            sck::select_points(tiny, nullptr, budget, sck::SelectionStrategy::random, 0);
        CHECK(sel.selected_indices == std::vector<int>{0, 1, 2});
    }
    SUBCASE("feature clustering needs features") {
        CHECK_THROWS_AS(sck::select_points(scene.full, nullptr, budget,
                                           sck::SelectionStrategy::kmeans_features, 0),
                        std::invalid_argument);
        sck::FeatureMatrix short_features;
        short_features.values = Eigen::MatrixXd::Ones(3, 4);
        CHECK_THROWS_AS(sck::select_points(scene.full, &short_features, budget,
                                           sck::SelectionStrategy::kmeans_features, 0),
                        std::invalid_argument);
    }
    SUBCASE("color clustering needs colors") {
        sck::PointCloud bare;
        for (int i = 0; i < 50; ++i) bare.positions.emplace_back(i, 0.0, 0.0);
        CHECK_THROWS_AS(
            sck::select_points(bare, nullptr, budget, sck::SelectionStrategy::kmeans_raw, 0),
            std::invalid_argument);
        CHECK(sck::select_points(scene.full, nullptr, budget, sck::SelectionStrategy::kmeans_raw,
                                 3)
                  .selected_indices.size() == 20);
    }
    SUBCASE("feature clustering with one cluster per instance covers everything") {
        const auto instances = oracle::coverage_recount(scene.full, {});  // 0 hits
        CHECK(instances == 0.0);
        std::set<int> distinct(scene.full.instance_labels.begin(),
                               scene.full.instance_labels.end());
        sck::LabelBudget exact;
        exact.points_per_scene = static_cast<int>(distinct.size());
        const auto sel = sck::select_points(scene.full, &features, exact,
                                            sck::SelectionStrategy::kmeans_features, 7);
        // clustering may occasionally double up on a large object, but with
        // one centroid per instance it must stay close to full coverage
        CHECK(sck::object_coverage(scene.full, sel) >= 0.75);
    }
    SUBCASE("strategies are deterministic under a fixed seed") {
        const auto a = sck::select_points(scene.full, &features, budget,
                                          sck::SelectionStrategy::kmeans_features, 11);
        const auto b = sck::select_points(scene.full, &features, budget,
                                          sck::SelectionStrategy::kmeans_features, 11);
        CHECK(a.selected_indices == b.selected_indices);
    }
}

TEST_CASE("object coverage") {
    sck::PointCloud scene;
    scene.positions = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
    scene.instance_labels = {0, 0, 1, 2};

    sck::SelectionResult sel;
    sel.selected_indices = {0, 1};
    CHECK(sck::object_coverage(scene, sel) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    sel.selected_indices = {0, 2, 3};
    CHECK(sck::object_coverage(scene, sel) == 1.0);
    CHECK(sck::object_coverage(scene, sel) == oracle::coverage_recount(scene, sel.selected_indices));

    sck::PointCloud unlabeled;
    unlabeled.positions = {{0, 0, 0}};
    CHECK_THROWS_AS(sck::object_coverage(unlabeled, sel), std::invalid_argument);
}

TEST_CASE("coverage equals the recount on random selections") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 20; ++t) {
        const auto scene = sck::make_cluttered_scene(100 + static_cast<std::uint64_t>(t), 10);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(scene.full.size()) - 1);
        sck::SelectionResult sel;
        std::set<int> chosen;
        for (int i = 0; i < 40; ++i) chosen.insert(pick(rng));
        sel.selected_indices.assign(chosen.begin(), chosen.end());
        REQUIRE(sck::object_coverage(scene.full, sel) ==
                oracle::coverage_recount(scene.full, sel.selected_indices));
    }
}

TEST_CASE("label expansion") {
    sck::PointCloud scene;
    scene.positions = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    scene.semantic_labels = {4, 9, 2};

    sck::SelectionResult sel;
    sel.selected_indices = {0, 2};
    const auto mask = sck::expand_labels(scene, sel);
    REQUIRE(mask.size() == 3);
    CHECK(mask[0] == 4);
    CHECK(mask[1] == 255);
    CHECK(mask[2] == 2);

    scene.semantic_labels[1] = 255;  // collides with the ignore sentinel
    sel.selected_indices = {1};
    CHECK_THROWS_AS(sck::expand_labels(scene, sel), std::invalid_argument);
}

TEST_CASE("selection files round trip") {
    sck::SelectionResult sel;
    sel.selected_indices = {3, 17, 140};
    sel.strategy = sck::SelectionStrategy::kmeans_features;
    sel.budget = 3;
    sel.seed = 99;

    const auto dir = std::filesystem::temp_directory_path() / "sck_tests";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "selection.txt").string();
    sck::write_selection(path, sel);
    const auto loaded = sck::read_selection(path);
    CHECK(loaded.selected_indices == sel.selected_indices);
    CHECK(loaded.strategy == sel.strategy);
    CHECK(loaded.budget == sel.budget);
    CHECK(loaded.seed == sel.seed);
}

TEST_CASE("strategy names") {
    using S = sck::SelectionStrategy;
    for (S s : {S::random, S::kmeans_raw, S::kmeans_features})
        CHECK(sck::selection_strategy_from_string(sck::to_string(s)) == s);
    CHECK_THROWS_AS(sck::selection_strategy_from_string("voronoi"), std::invalid_argument);
}
