#include "sck/instance_clustering.hpp"
#include "sck/loss.hpp"
#include "sck/metrics.hpp"
#include "sck/pairs.hpp"
#include "sck/selection.hpp"
#include "sck/subsets.hpp"
#include "sck/synthetic.hpp"
#include "sck/trainer.hpp"

#include <doctest.h>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

namespace {

struct Fingerprint {
    std::uint64_t hash = 14695981039346656037ull;  // FNV-1a

    void byte(std::uint8_t b) {
        hash ^= b;
        hash *= 1099511628211ull;
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void real(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void integer(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void text(const std::string& s) {
        for (char c : s) byte(static_cast<std::uint8_t>(c));
    }
    void matrix(const Eigen::MatrixXd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) real(m(r, c));
    }
};

// One pass through every seeded stage of the pipeline, reduced to a hash.
std::uint64_t run_chain() {
    Fingerprint fp;

    sck::SyntheticSceneSpec spec;
    spec.object_count = 6;
    spec.num_classes = 4;
    spec.points_per_object_min = 96;
    spec.points_per_object_max = 192;
    spec.min_center_separation = 0.9;
    spec.seed = 71;
    const auto scene = sck::generate_synthetic_scene(spec);
    for (const auto& p : scene.full.positions) {
        fp.real(p.x());
        fp.real(p.y());
        fp.real(p.z());
    }
    fp.integer(static_cast<std::int64_t>(scene.gt_matches.size()));

    const auto mined = sck::mine_pairs(
        {{scene.view_a, scene.pose_a}, {scene.view_b, scene.pose_b}}, sck::MiningConfig{});
    for (const auto& mp : mined) {
        fp.real(mp.frames.overlap_ratio);
        fp.integer(static_cast<std::int64_t>(mp.matches.size()));
        for (const auto& [i, j] : mp.matches.pairs) {
            fp.integer(i);
            fp.integer(j);
        }
    }

    // loss + gradient on deterministic features over the ground-truth matches
    const auto world_a = sck::transform(scene.view_a, scene.pose_a);
    const auto world_b = sck::transform(scene.view_b, scene.pose_b);
    sck::FeatureMatrix fa, fb;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    fa.values = Eigen::MatrixXd::NullaryExpr(
        static_cast<Eigen::Index>(world_a.size()), 6,
        [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
    fb.values = Eigen::MatrixXd::NullaryExpr(
        static_cast<Eigen::Index>(world_b.size()), 6,
        [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
    sck::LossConfig loss_cfg;
    loss_cfg.partition = sck::PartitionConfig::from_partition_count(8);
    const auto sampled = sck::sample_matches(scene.gt_matches, 256, 9);
    sck::LossReport report;
    const auto grad =
        sck::loss_gradient(fa, fb, sampled, world_a, world_b, loss_cfg, &report);
    fp.real(report.total);
    for (const auto& entry : report.per_partition) {
        fp.real(entry.value);
        fp.integer(entry.active_anchors);
    }
    fp.matrix(grad.wrt_f1);
    fp.matrix(grad.wrt_f2);

    // a short training run plus its margin
    sck::OptimizerConfig opt;
    opt.steps = 25;
    opt.dim = 4;
    opt.seed = 13;
    loss_cfg.num_sampled_matches = 256;
    const auto trained = sck::train_embeddings({sck::to_scene_pair(scene)}, loss_cfg, opt);
    for (double v : trained.loss_curve) fp.real(v);
    fp.matrix(trained.pairs[0].features_a.values);
    const auto margin = sck::dataset_margin(trained, 17);
    fp.real(margin.matched_mean);
    fp.real(margin.random_mean);
    fp.real(margin.margin);

    // point selection on a cluttered scene
    const auto clutter = sck::make_cluttered_scene(23, 10);
    const auto features = sck::instance_features(clutter.full, 6, 0.05, 29);
    sck::LabelBudget budget;
    budget.points_per_scene = 24;
    const auto selection = sck::select_points(clutter.full, &features, budget,
                                              sck::SelectionStrategy::kmeans_features, 31);
    for (int idx : selection.selected_indices) fp.integer(idx);
    fp.real(sck::object_coverage(clutter.full, selection));

    // offset clustering and both metrics
    const auto shifted = sck::shift_points(scene.full, scene.gt_offsets);
    const auto pred = sck::bfs_cluster(shifted, scene.full.semantic_labels, 0.03, 8);
    fp.integer(static_cast<std::int64_t>(pred.instances.size()));
    for (const auto& inst : pred.instances) {
        fp.integer(inst.semantic_label);
        fp.integer(static_cast<std::int64_t>(inst.members.size()));
    }
    const auto gt_instances = sck::instances_from_cloud(scene.full);
    const auto map = sck::instance_map50(sck::instances_from_prediction(pred), gt_instances);
    fp.real(map.map50);
    const auto miou =
        sck::miou(scene.full.semantic_labels, scene.full.semantic_labels, spec.num_classes);
    fp.real(miou.miou);

    // subset draws
    std::vector<std::string> ids;
    for (int i = 0; i < 300; ++i) ids.push_back("scene" + std::to_string(i));
    for (const auto& id : sck::subset_scenes(ids, 5.0, 37)) fp.text(id);

    return fp.hash;
}

}  // namespace

TEST_CASE("the full pipeline fingerprint is reproducible") {
    const auto first = run_chain();
    const auto second = run_chain();
    CHECK(first == second);
}

TEST_CASE("worker count does not change results") {
    setenv("SCK_THREADS", "1", 1);
    const auto serial = run_chain();
    setenv("SCK_THREADS", "4", 1);
    const auto parallel = run_chain();
    setenv("SCK_THREADS", "3", 1);
    const auto odd = run_chain();
    unsetenv("SCK_THREADS");
    CHECK(serial == parallel);
    CHECK(serial == odd);
}

TEST_CASE("loss and gradient are invariant to the worker count") {
    std::mt19937_64 rng(83);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    sck::PointCloud anchors, candidates;
    sck::FeatureMatrix fa, fb;
    fa.values = Eigen::MatrixXd::NullaryExpr(
        300, 8, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
    fb.values = Eigen::MatrixXd::NullaryExpr(
        300, 8, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
    for (int i = 0; i < 300; ++i) {
        anchors.positions.emplace_back(coord(rng), coord(rng), coord(rng));
        candidates.positions.emplace_back(coord(rng), coord(rng), coord(rng));
    }
    sck::CorrespondenceSet matches;
    for (int i = 0; i < 300; ++i) matches.pairs.push_back({i, (i * 7) % 300});
    sck::LossConfig cfg;
    cfg.partition = sck::PartitionConfig::from_partition_count(8);

    setenv("SCK_THREADS", "1", 1);
    sck::LossReport report_1;
    const auto grad_1 = sck::loss_gradient(fa, fb, matches, anchors, candidates, cfg, &report_1);
    setenv("SCK_THREADS", "4", 1);
    sck::LossReport report_4;
    const auto grad_4 = sck::loss_gradient(fa, fb, matches, anchors, candidates, cfg, &report_4);
    unsetenv("SCK_THREADS");

    CHECK(report_1.total == report_4.total);
    REQUIRE(report_1.per_partition.size() == report_4.per_partition.size());
    for (std::size_t p = 0; p < report_1.per_partition.size(); ++p)
        CHECK(report_1.per_partition[p].value == report_4.per_partition[p].value);
    CHECK((grad_1.wrt_f1 - grad_4.wrt_f1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((grad_1.wrt_f2 - grad_4.wrt_f2).cwiseAbs().maxCoeff() == 0.0);
}
