#include "sck/instance_clustering.hpp"
#include "sck/io.hpp"
#include "sck/metrics.hpp"
#include "sck/pairs.hpp"
#include "sck/partition.hpp"
#include "sck/report.hpp"
#include "sck/run_config.hpp"
#include "sck/selection.hpp"
#include "sck/subsets.hpp"
#include "sck/sweep.hpp"
#include "sck/synthetic.hpp"
#include "sck/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

// Flags override the config file: an option left untouched on the command
// line falls back to its config key before the built-in default applies.
void fill(const CLI::Option* opt, const sck::RunConfig& cfg, const std::string& key, int& value) {
    if (opt->count() == 0 && cfg.has(key)) value = cfg.get_int(key, value);
}
void fill(const CLI::Option* opt, const sck::RunConfig& cfg, const std::string& key,
          double& value) {
    if (opt->count() == 0 && cfg.has(key)) value = cfg.get_double(key, value);
}
void fill(const CLI::Option* opt, const sck::RunConfig& cfg, const std::string& key,
          std::uint64_t& value) {
    if (opt->count() == 0 && cfg.has(key)) value = cfg.get_uint64(key, value);
}
void fill(const CLI::Option* opt, const sck::RunConfig& cfg, const std::string& key,
          std::string& value) {
    if (opt->count() == 0 && cfg.has(key)) value = cfg.get_string(key, value);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) values.push_back(std::stoi(item));
    if (values.empty()) throw std::invalid_argument("empty list: '" + text + "'");
    return values;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) values.push_back(std::stod(item));
    return values;
}

// Anchor indices: either an inline comma list or a file with one per line.
std::vector<int> parse_anchor_spec(const std::string& spec) {
    if (fs::exists(spec)) {
        std::ifstream in(spec);
        std::vector<int> values;
        int v = 0;
        while (in >> v) values.push_back(v);
        if (values.empty()) throw std::invalid_argument(spec + ": no indices");
        return values;
    }
    return parse_int_list(spec);
}

sck::PartitionConfig partition_from_flags(int sectors, int shells, const std::string& boundary) {
    sck::PartitionConfig cfg;
    cfg.angular_sectors = sectors;
    cfg.radial_shells = shells;
    cfg.shell_boundaries = parse_double_list(boundary);
    if (shells == 1) cfg.shell_boundaries.clear();
    cfg.validate();
    return cfg;
}

// Frame files in a directory: "<stem>.ply" with a "<stem>.pose.txt" beside
// it, ordered by stem.
std::vector<std::string> frame_stems(const std::string& dir) {
    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".ply") continue;
        const std::string stem = entry.path().stem().string();
        if (fs::exists(fs::path(dir) / (stem + ".pose.txt"))) stems.push_back(stem);
    }
    std::sort(stems.begin(), stems.end());
    if (stems.empty())
        throw std::runtime_error(dir + ": no <stem>.ply with matching <stem>.pose.txt");
    return stems;
}

// Scene-pair files in a directory: "<name>.corr" with clouds "<name>_a.ply" /
// "<name>_b.ply" and poses "<name>_a.pose.txt" / "<name>_b.pose.txt".
std::vector<std::pair<std::string, sck::ScenePair>> load_pairs_dir(const std::string& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".corr")
            names.push_back(entry.path().stem().string());
    std::sort(names.begin(), names.end());
    if (names.empty()) throw std::runtime_error(dir + ": no .corr files");

    std::vector<std::pair<std::string, sck::ScenePair>> pairs;
    for (const auto& name : names) {
        const fs::path base = fs::path(dir) / name;
        sck::ScenePair sp;
        sp.cloud_a = sck::read_ply(base.string() + "_a.ply");
        sp.cloud_b = sck::read_ply(base.string() + "_b.ply");
        sp.pose_a = sck::read_pose(base.string() + "_a.pose.txt");
        sp.pose_b = sck::read_pose(base.string() + "_b.pose.txt");
        sp.matches = sck::read_correspondences_text(base.string() + ".corr");
        pairs.emplace_back(name, std::move(sp));
    }
    return pairs;
}

std::vector<int> mask_to_labels(const std::vector<std::uint8_t>& mask) {
    return {mask.begin(), mask.end()};
}

// Semantic labels from either a MASK dump or a labeled PLY.
std::vector<int> read_label_file(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    char magic[4] = {};
    probe.read(magic, 4);
    if (std::string(magic, 4) == "MASK") return mask_to_labels(sck::read_mask(path));
    const sck::PointCloud cloud = sck::read_ply(path);
    if (!cloud.has_semantics()) throw std::runtime_error(path + ": no semantic labels");
    return cloud.semantic_labels;
}

int label_span(const std::vector<int>& labels, int ignore) {
    int top = -1;
    for (int v : labels)
        if (v != ignore) top = std::max(top, v);
    return top + 1;
}

void print_per_class(const std::vector<std::pair<int, double>>& per_class) {
    for (const auto& [cls, value] : per_class)
        std::cout << "  class " << cls << ": " << value << "\n";
}

int run_mine_pairs(const std::string& frames_dir, int stride, double radius, double min_overlap,
                   double voxel, const std::string& out_dir) {
    const auto stems = frame_stems(frames_dir);
    std::vector<int> ids(stems.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    const auto kept_ids = sck::subsample_frames(ids, stride);

    std::vector<std::pair<sck::PointCloud, sck::Pose>> frames;
    for (int id : kept_ids) {
        const fs::path base = fs::path(frames_dir) / stems[static_cast<std::size_t>(id)];
        frames.emplace_back(sck::read_ply(base.string() + ".ply"),
                            sck::read_pose(base.string() + ".pose.txt"));
    }

    sck::MiningConfig cfg;
    cfg.radius = radius;
    cfg.min_overlap = min_overlap;
    cfg.voxel_size = voxel;
    const auto mined = sck::mine_pairs(frames, cfg);

    fs::create_directories(out_dir);
    std::ofstream index(fs::path(out_dir) / "pairs.csv");
    index << "frame_a,frame_b,overlap,matches\n";
    for (const auto& pair : mined) {
        const std::string& stem_a = stems[static_cast<std::size_t>(kept_ids[pair.frames.frame_a])];
        const std::string& stem_b = stems[static_cast<std::size_t>(kept_ids[pair.frames.frame_b])];
        sck::write_correspondences_text(
            (fs::path(out_dir) / (stem_a + "__" + stem_b + ".corr")).string(), pair.matches,
            pair.frames.overlap_ratio);
        index << stem_a << "," << stem_b << "," << pair.frames.overlap_ratio << ","
              << pair.matches.size() << "\n";
    }
    std::cout << "kept " << mined.size() << " pairs from " << frames.size() << " frames ("
              << stems.size() << " on disk, stride " << stride << ")\n";
    return 0;
}

int run_partition(const std::string& cloud_path, const std::string& anchor_spec, int sectors,
                  int shells, const std::string& boundary, const std::string& out_path) {
    const sck::PointCloud cloud = sck::read_ply(cloud_path);
    const auto anchors = parse_anchor_spec(anchor_spec);
    const sck::PartitionConfig cfg = partition_from_flags(sectors, shells, boundary);

    nlohmann::json doc;
    doc["angular_sectors"] = cfg.angular_sectors;
    doc["radial_shells"] = cfg.radial_shells;
    doc["shell_boundaries_m"] = cfg.shell_boundaries;
    doc["assignments"] = nlohmann::json::array();
    for (int anchor : anchors) {
        const auto assignment = sck::assign_partitions(cfg, anchor, cloud, cloud);
        doc["assignments"].push_back(
            {{"anchor_index", assignment.anchor_index}, {"partition_of", assignment.partition_of}});
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
    out << doc.dump(2) << "\n";
    std::cout << "wrote " << anchors.size() << " assignments over " << cfg.partition_count()
              << " partitions to " << out_path << "\n";
    return 0;
}

int run_pretrain(const std::string& pairs_dir, const sck::LossConfig& loss_cfg,
                 const sck::OptimizerConfig& opt, const std::string& out_dir) {
    auto named_pairs = load_pairs_dir(pairs_dir);
    std::vector<sck::ScenePair> dataset;
    dataset.reserve(named_pairs.size());
    for (auto& [name, pair] : named_pairs) dataset.push_back(std::move(pair));

    const sck::TrainResult result = sck::train_embeddings(dataset, loss_cfg, opt);

    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < named_pairs.size(); ++i) {
        const fs::path base = fs::path(out_dir) / named_pairs[i].first;
        sck::write_features(base.string() + "_a.ftrs", result.pairs[i].features_a);
        sck::write_features(base.string() + "_b.ftrs", result.pairs[i].features_b);
    }
    sck::write_loss_curve_csv((fs::path(out_dir) / "loss_curve.csv").string(), result);

    const sck::SeparationStats stats = sck::dataset_margin(result, opt.seed);
    sck::EvalReport report;
    report.metric = "margin";
    report.value = stats.margin;
    report.seed = opt.seed;
    report.config = {{"tau", std::to_string(loss_cfg.temperature)},
                     {"n", std::to_string(loss_cfg.num_sampled_matches)},
                     {"partitions", std::to_string(loss_cfg.partition.partition_count())},
                     {"steps", std::to_string(opt.steps)},
                     {"dim", std::to_string(opt.dim)},
                     {"lr", std::to_string(opt.lr)}};
    sck::write_report_json((fs::path(out_dir) / "report.json").string(), report);

    std::cout << "trained " << dataset.size() << " pairs, final loss "
              << (result.loss_curve.empty() ? 0.0 : result.loss_curve.back()) << ", margin "
              << stats.margin << " (matched " << stats.matched_mean << ", random "
              << stats.random_mean << ")\n";
    return 0;
}

int run_select(const std::string& scene_path, const std::string& features_path, int budget,
               const std::string& strategy_name, std::uint64_t seed, double xyz_weight,
               int iterations, const std::string& out_path, const std::string& mask_path) {
    const sck::PointCloud scene = sck::read_ply(scene_path);
    sck::FeatureMatrix features;
    const bool have_features = !features_path.empty();
    if (have_features) features = sck::read_features(features_path);

    sck::LabelBudget label_budget;
    label_budget.points_per_scene = budget;
    sck::SelectionConfig cfg;
    cfg.xyz_weight = xyz_weight;
    cfg.kmeans_iterations = iterations;
    const auto strategy = sck::selection_strategy_from_string(strategy_name);
    const auto selection = sck::select_points(scene, have_features ? &features : nullptr,
                                              label_budget, strategy, seed, cfg);
    sck::write_selection(out_path, selection);
    if (!mask_path.empty()) sck::write_mask(mask_path, sck::expand_labels(scene, selection));

    std::cout << "selected " << selection.selected_indices.size() << " of " << scene.size()
              << " points (" << strategy_name << ")";
    if (scene.has_instances()) std::cout << ", coverage " << sck::object_coverage(scene, selection);
    std::cout << "\n";
    return 0;
}

int run_cluster(const std::string& cloud_path, const std::string& offsets_path,
                const std::string& scores_path, double radius, int min_size,
                const std::string& out_path) {
    const sck::PointCloud cloud = sck::read_ply(cloud_path);
    if (!cloud.has_semantics()) throw std::runtime_error(cloud_path + ": no semantic labels");
    const auto offsets = sck::read_offsets(offsets_path);
    const sck::PointCloud shifted = sck::shift_points(cloud, offsets);

    sck::InstancePrediction pred =
        sck::bfs_cluster(shifted, cloud.semantic_labels, radius, min_size);
    if (!scores_path.empty()) sck::score_instances(pred, sck::read_features(scores_path));
    sck::write_prediction(out_path, pred);

    std::size_t assigned = 0;
    for (int id : pred.instance_of)
        if (id >= 0) ++assigned;
    std::cout << pred.instances.size() << " instances, " << assigned << " of "
              << pred.instance_of.size() << " points assigned\n";
    return 0;
}

int run_evaluate(const std::string& task, const std::string& pred_path,
                 const std::string& gt_path, int classes, const std::string& out_path) {
    sck::EvalReport report;
    report.config = {{"task", task}, {"pred", pred_path}, {"gt", gt_path}};

    if (task == "sem") {
        const auto pred = read_label_file(pred_path);
        const auto gt = read_label_file(gt_path);
        const int num_classes =
            classes > 0 ? classes : std::max(label_span(pred, 255), label_span(gt, 255));
        const sck::MiouResult result = sck::miou(pred, gt, num_classes);
        std::cout << "miou " << result.miou << "\n";
        print_per_class(result.per_class);
        report.metric = "miou";
        report.value = result.miou;
        report.per_class = result.per_class;
    } else if (task == "ins") {
        const auto pred = sck::instances_from_prediction(sck::read_prediction(pred_path));
        const sck::PointCloud gt_cloud = sck::read_ply(gt_path);
        const auto gt = sck::instances_from_cloud(gt_cloud);
        const sck::MapResult result = sck::instance_map50(pred, gt);
        std::cout << "map50 " << result.map50 << "\n";
        print_per_class(result.per_class);
        report.metric = "map50";
        report.value = result.map50;
        report.per_class = result.per_class;
    } else {
        throw std::invalid_argument("evaluate: task must be sem or ins, got '" + task + "'");
    }
    if (!out_path.empty()) sck::write_report_json(out_path, report);
    return 0;
}

sck::SyntheticSceneSpec scene_spec_from_flags(int objects, int points_min, int points_max,
                                              int classes, double noise, double separation,
                                              double keep) {
    sck::SyntheticSceneSpec spec;
    spec.object_count = objects;
    spec.points_per_object_min = points_min;
    spec.points_per_object_max = points_max;
    spec.num_classes = classes;
    spec.noise_stddev = noise;
    spec.min_center_separation = separation;
    spec.view_keep_fraction = keep;
    return spec;
}

int run_sweep(const std::string& points, const std::string& partitions, std::uint64_t seed,
              const std::string& pairs_dir, int scenes, const sck::SyntheticSceneSpec& spec,
              std::uint64_t data_seed, const sck::LossConfig& loss_cfg,
              const sck::OptimizerConfig& opt, const std::string& out_path) {
    std::vector<sck::ScenePair> dataset;
    if (!pairs_dir.empty()) {
        for (auto& [name, pair] : load_pairs_dir(pairs_dir)) dataset.push_back(std::move(pair));
    } else {
        dataset = sck::make_benchmark_dataset(scenes, spec, data_seed);
    }

    sck::SweepConfig cfg;
    cfg.points_grid = parse_int_list(points);
    cfg.partitions_grid = parse_int_list(partitions);
    cfg.loss = loss_cfg;
    cfg.opt = opt;
    cfg.opt.seed = seed;
    const sck::SweepResult result = sck::sweep_partitions(dataset, cfg);
    sck::write_sweep_csv(out_path, result);

    std::cout << "margin grid (rows = points, columns = partitions):\n";
    std::cout << "points\\partitions";
    for (int p : cfg.partitions_grid) std::cout << "\t" << p;
    std::cout << "\n";
    for (int n : cfg.points_grid) {
        std::cout << n;
        for (int p : cfg.partitions_grid) std::cout << "\t" << result.at(n, p).margin;
        std::cout << "\n";
    }
    return 0;
}

int run_make_scenes(const std::string& out_dir, int scenes, const sck::SyntheticSceneSpec& spec,
                    std::uint64_t seed) {
    const auto set = sck::make_scene_set(scenes, spec, seed);
    fs::create_directories(out_dir);
    for (std::size_t k = 0; k < set.size(); ++k) {
        const sck::SyntheticScene& scene = set[k];
        std::ostringstream name;
        name << "scene_" << std::setw(3) << std::setfill('0') << k;
        const fs::path base = fs::path(out_dir) / name.str();
        sck::write_ply(base.string() + "_a.ply", scene.view_a);
        sck::write_ply(base.string() + "_b.ply", scene.view_b);
        sck::write_pose(base.string() + "_a.pose.txt", scene.pose_a);
        sck::write_pose(base.string() + "_b.pose.txt", scene.pose_b);
        const double overlap = scene.view_a.empty()
                                   ? 0.0
                                   : static_cast<double>(scene.gt_matches.size()) /
                                         static_cast<double>(scene.view_a.size());
        sck::write_correspondences_text(base.string() + ".corr", scene.gt_matches, overlap);
        sck::write_ply(base.string() + "_full.ply", scene.full);
        sck::write_offsets(base.string() + ".offs", scene.gt_offsets);
    }
    std::cout << "wrote " << set.size() << " scene pairs to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"point cloud pretraining and data-efficiency toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "run-config file; flags override its values");

    // mine-pairs
    auto* mine = app.add_subcommand("mine-pairs", "mine overlapping frame pairs");
    std::string mine_frames, mine_out;
    int mine_stride = 25;
    double mine_radius = 0.025, mine_min_overlap = 0.30, mine_voxel = 0.02;
    mine->add_option("--frames", mine_frames, "directory of <stem>.ply + <stem>.pose.txt")
        ->required();
    auto* o_stride = mine->add_option("--stride", mine_stride, "keep every stride-th frame");
    auto* o_radius = mine->add_option("--radius", mine_radius, "match radius in meters");
    auto* o_overlap = mine->add_option("--min-overlap", mine_min_overlap, "keep threshold");
    auto* o_voxel = mine->add_option("--voxel", mine_voxel, "downsample voxel size; 0 disables");
    mine->add_option("--out", mine_out, "output directory")->required();

    // partition
    auto* part = app.add_subcommand("partition", "anchor-relative scene-context partitions");
    std::string part_cloud, part_anchors, part_boundary = "1.25", part_out;
    int part_sectors = 4, part_shells = 2;
    part->add_option("--cloud", part_cloud, "PLY cloud")->required();
    part->add_option("--anchors", part_anchors, "comma-separated indices or a file of indices")
        ->required();
    auto* o_sectors = part->add_option("--sectors", part_sectors, "angular sectors");
    auto* o_shells = part->add_option("--shells", part_shells, "radial shells");
    auto* o_boundary =
        part->add_option("--boundary", part_boundary, "comma-separated shell boundaries");
    part->add_option("--out", part_out, "assignments JSON")->required();

    // pretrain-toy
    auto* pre = app.add_subcommand("pretrain-toy", "train per-point embeddings on mined pairs");
    std::string pre_pairs, pre_out, pre_boundary = "1.25";
    int pre_sectors = 4, pre_shells = 2, pre_n = 4096;
    double pre_tau = 0.4;
    sck::OptimizerConfig pre_opt;
    pre->add_option("--pairs", pre_pairs, "directory of <name>.corr + clouds + poses")->required();
    auto* p_sectors = pre->add_option("--sectors", pre_sectors, "angular sectors");
    auto* p_shells = pre->add_option("--shells", pre_shells, "radial shells");
    auto* p_boundary = pre->add_option("--boundary", pre_boundary, "shell boundaries");
    auto* p_tau = pre->add_option("--tau", pre_tau, "softmax temperature");
    auto* p_n = pre->add_option("--n", pre_n, "sampled matches per pair");
    auto* p_steps = pre->add_option("--steps", pre_opt.steps, "optimizer steps");
    auto* p_seed = pre->add_option("--seed", pre_opt.seed, "optimizer seed");
    auto* p_dim = pre->add_option("--dim", pre_opt.dim, "embedding dimension");
    auto* p_lr = pre->add_option("--lr", pre_opt.lr, "learning rate");
    auto* p_decay = pre->add_option("--lr-decay", pre_opt.lr_decay, "decay factor");
    auto* p_every = pre->add_option("--decay-every", pre_opt.decay_every_steps, "decay period");
    pre->add_option("--out", pre_out, "output directory for FTRS dumps")->required();

    // select-points
    auto* sel = app.add_subcommand("select-points", "pick annotation points under a budget");
    std::string sel_scene, sel_features, sel_strategy = "kmeans_features", sel_out, sel_mask;
    int sel_budget = 20, sel_iterations = 50;
    std::uint64_t sel_seed = 0;
    double sel_xyz_weight = 1.0;
    sel->add_option("--scene", sel_scene, "PLY scene")->required();
    sel->add_option("--features", sel_features, "FTRS features (kmeans_features)");
    auto* s_budget = sel->add_option("--budget", sel_budget, "points per scene");
    auto* s_strategy =
        sel->add_option("--strategy", sel_strategy, "random | kmeans_raw | kmeans_features");
    auto* s_seed = sel->add_option("--seed", sel_seed, "selection seed");
    auto* s_xyz = sel->add_option("--xyz-weight", sel_xyz_weight, "coordinate block weight");
    auto* s_iter = sel->add_option("--iterations", sel_iterations, "k-means iterations");
    sel->add_option("--out", sel_out, "selection file")->required();
    sel->add_option("--mask", sel_mask, "also write a MASK label file");

    // cluster-instances
    auto* clu = app.add_subcommand("cluster-instances", "offset-shift + BFS instance decoder");
    std::string clu_cloud, clu_offsets, clu_scores, clu_out;
    double clu_radius = 0.03;
    int clu_min_size = 10;
    clu->add_option("--cloud", clu_cloud, "PLY cloud with semantic labels")->required();
    clu->add_option("--offsets", clu_offsets, "OFFS center-offset file")->required();
    clu->add_option("--scores", clu_scores, "FTRS per-class scores for confidences");
    auto* c_radius = clu->add_option("--radius", clu_radius, "BFS ball radius");
    auto* c_min = clu->add_option("--min-size", clu_min_size, "minimum cluster size");
    clu->add_option("--out", clu_out, "prediction dump")->required();

    // evaluate
    auto* eva = app.add_subcommand("evaluate", "score predictions against ground truth");
    std::string eva_task, eva_pred, eva_gt, eva_out;
    int eva_classes = 0;
    eva->add_option("--task", eva_task, "sem | ins")->required();
    eva->add_option("--pred", eva_pred, "MASK/PLY labels (sem) or prediction dump (ins)")
        ->required();
    eva->add_option("--gt", eva_gt, "labeled PLY")->required();
    auto* e_classes = eva->add_option("--classes", eva_classes, "class count; 0 = infer");
    eva->add_option("--out", eva_out, "report JSON");

    // sweep
    auto* swp = app.add_subcommand("sweep", "points x partitions margin grid");
    std::string swp_points = "256,1024,4096", swp_partitions = "1,2,4,8", swp_pairs, swp_out;
    std::uint64_t swp_seed = 0, swp_data_seed = 16000;
    int swp_scenes = 10, swp_objects = 8, swp_ppo = 420, swp_classes = 5;
    double swp_tau = 0.4, swp_separation = 0.8;
    sck::OptimizerConfig swp_opt;
    auto* w_points = swp->add_option("--points", swp_points, "sampled-match budgets");
    auto* w_parts = swp->add_option("--partitions", swp_partitions, "partition counts");
    auto* w_seed = swp->add_option("--seed", swp_seed, "optimizer seed");
    swp->add_option("--pairs", swp_pairs, "scene-pair directory; omit for synthetic data");
    auto* w_scenes = swp->add_option("--scenes", swp_scenes, "synthetic scene pairs");
    auto* w_objects = swp->add_option("--objects", swp_objects, "objects per scene");
    auto* w_ppo = swp->add_option("--points-per-object", swp_ppo, "samples per object");
    auto* w_classes = swp->add_option("--classes", swp_classes, "semantic classes");
    auto* w_sep = swp->add_option("--separation", swp_separation, "min object separation");
    auto* w_dseed = swp->add_option("--data-seed", swp_data_seed, "synthetic dataset seed");
    auto* w_tau = swp->add_option("--tau", swp_tau, "softmax temperature");
    auto* w_steps = swp->add_option("--steps", swp_opt.steps, "optimizer steps per cell");
    auto* w_lr = swp->add_option("--lr", swp_opt.lr, "learning rate");
    auto* w_dim = swp->add_option("--dim", swp_opt.dim, "embedding dimension");
    auto* w_out = swp->add_option("--out", swp_out, "grid CSV path");

    // make-scenes
    auto* mk = app.add_subcommand("make-scenes", "generate synthetic scene pairs");
    std::string mk_out;
    int mk_scenes = 10, mk_objects = 8, mk_points = 420, mk_classes = 5;
    double mk_noise = 0.0, mk_separation = 0.8, mk_keep = 0.7;
    std::uint64_t mk_seed = 0;
    mk->add_option("--out", mk_out, "output directory")->required();
    auto* m_scenes = mk->add_option("--scenes", mk_scenes, "scene count");
    auto* m_objects = mk->add_option("--objects", mk_objects, "objects per scene");
    auto* m_points = mk->add_option("--points", mk_points, "samples per object");
    auto* m_classes = mk->add_option("--classes", mk_classes, "semantic classes");
    auto* m_noise = mk->add_option("--noise", mk_noise, "coordinate noise stddev");
    auto* m_sep = mk->add_option("--separation", mk_separation, "min object separation");
    auto* m_keep = mk->add_option("--keep", mk_keep, "view keep fraction");
    auto* m_seed = mk->add_option("--seed", mk_seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        sck::RunConfig cfg;
        if (!config_path.empty()) cfg = sck::RunConfig::load(config_path);

        if (mine->parsed()) {
            fill(o_stride, cfg, "mine.stride", mine_stride);
            fill(o_radius, cfg, "mine.radius", mine_radius);
            fill(o_overlap, cfg, "mine.min_overlap", mine_min_overlap);
            fill(o_voxel, cfg, "mine.voxel", mine_voxel);
            return run_mine_pairs(mine_frames, mine_stride, mine_radius, mine_min_overlap,
                                  mine_voxel, mine_out);
        }
        if (part->parsed()) {
            fill(o_sectors, cfg, "partition.sectors", part_sectors);
            fill(o_shells, cfg, "partition.shells", part_shells);
            fill(o_boundary, cfg, "partition.boundary", part_boundary);
            return run_partition(part_cloud, part_anchors, part_sectors, part_shells,
                                 part_boundary, part_out);
        }
        if (pre->parsed()) {
            fill(p_sectors, cfg, "partition.sectors", pre_sectors);
            fill(p_shells, cfg, "partition.shells", pre_shells);
            fill(p_boundary, cfg, "partition.boundary", pre_boundary);
            fill(p_tau, cfg, "loss.tau", pre_tau);
            fill(p_n, cfg, "loss.n", pre_n);
            fill(p_steps, cfg, "opt.steps", pre_opt.steps);
            fill(p_seed, cfg, "opt.seed", pre_opt.seed);
            fill(p_dim, cfg, "opt.dim", pre_opt.dim);
            fill(p_lr, cfg, "opt.lr", pre_opt.lr);
            fill(p_decay, cfg, "opt.lr_decay", pre_opt.lr_decay);
            fill(p_every, cfg, "opt.decay_every", pre_opt.decay_every_steps);
            sck::LossConfig loss_cfg;
            loss_cfg.temperature = pre_tau;
            loss_cfg.num_sampled_matches = pre_n;
            loss_cfg.partition = partition_from_flags(pre_sectors, pre_shells, pre_boundary);
            return run_pretrain(pre_pairs, loss_cfg, pre_opt, pre_out);
        }
        if (sel->parsed()) {
            fill(s_budget, cfg, "select.budget", sel_budget);
            fill(s_strategy, cfg, "select.strategy", sel_strategy);
            fill(s_seed, cfg, "select.seed", sel_seed);
            fill(s_xyz, cfg, "select.xyz_weight", sel_xyz_weight);
            fill(s_iter, cfg, "select.iterations", sel_iterations);
            return run_select(sel_scene, sel_features, sel_budget, sel_strategy, sel_seed,
                              sel_xyz_weight, sel_iterations, sel_out, sel_mask);
        }
        if (clu->parsed()) {
            fill(c_radius, cfg, "cluster.radius", clu_radius);
            fill(c_min, cfg, "cluster.min_size", clu_min_size);
            return run_cluster(clu_cloud, clu_offsets, clu_scores, clu_radius, clu_min_size,
                               clu_out);
        }
        if (eva->parsed()) {
            fill(e_classes, cfg, "bench.classes", eva_classes);
            return run_evaluate(eva_task, eva_pred, eva_gt, eva_classes, eva_out);
        }
        if (swp->parsed()) {
            fill(w_points, cfg, "bench.points", swp_points);
            fill(w_parts, cfg, "bench.partitions", swp_partitions);
            fill(w_seed, cfg, "bench.seed", swp_seed);
            fill(w_scenes, cfg, "bench.scenes", swp_scenes);
            fill(w_objects, cfg, "bench.objects", swp_objects);
            fill(w_ppo, cfg, "bench.points_per_object", swp_ppo);
            fill(w_classes, cfg, "bench.classes", swp_classes);
            fill(w_sep, cfg, "bench.separation", swp_separation);
            fill(w_dseed, cfg, "bench.data_seed", swp_data_seed);
            fill(w_tau, cfg, "loss.tau", swp_tau);
            fill(w_steps, cfg, "opt.steps", swp_opt.steps);
            fill(w_lr, cfg, "opt.lr", swp_opt.lr);
            fill(w_dim, cfg, "opt.dim", swp_opt.dim);
            if (w_out->count() == 0) swp_out = "sweep.csv";
            sck::LossConfig loss_cfg;
            loss_cfg.temperature = swp_tau;
            const auto spec = scene_spec_from_flags(swp_objects, swp_ppo, swp_ppo, swp_classes,
                                                    0.0, swp_separation, 0.7);
            return run_sweep(swp_points, swp_partitions, swp_seed, swp_pairs, swp_scenes, spec,
                             swp_data_seed, loss_cfg, swp_opt, swp_out);
        }
        if (mk->parsed()) {
            fill(m_scenes, cfg, "bench.scenes", mk_scenes);
            fill(m_objects, cfg, "bench.objects", mk_objects);
            fill(m_points, cfg, "bench.points_per_object", mk_points);
            fill(m_classes, cfg, "bench.classes", mk_classes);
            fill(m_noise, cfg, "bench.noise", mk_noise);
            fill(m_sep, cfg, "bench.separation", mk_separation);
            fill(m_keep, cfg, "bench.keep", mk_keep);
            fill(m_seed, cfg, "bench.seed", mk_seed);
            const auto spec = scene_spec_from_flags(mk_objects, mk_points, mk_points, mk_classes,
                                                    mk_noise, mk_separation, mk_keep);
            return run_make_scenes(mk_out, mk_scenes, spec, mk_seed);
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
