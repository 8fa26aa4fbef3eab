#include "sck/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sck {

MiouResult miou(const std::vector<int>& pred_labels, const std::vector<int>& gt_labels,
                int num_classes, int ignore_label) {
    if (pred_labels.size() != gt_labels.size())
        throw std::invalid_argument("miou: prediction and ground truth lengths differ");
    if (num_classes < 1) throw std::invalid_argument("miou: num_classes must be >= 1");

    const auto n = static_cast<std::size_t>(num_classes);
    std::vector<std::size_t> confusion(n * n, 0);  // row gt, column pred
    std::size_t valid = 0;
    for (std::size_t i = 0; i < gt_labels.size(); ++i) {
        const int gt = gt_labels[i];
        if (gt == ignore_label) continue;
        const int pr = pred_labels[i];
        if (gt < 0 || gt >= num_classes)
            throw std::invalid_argument("miou: gt label out of range at " + std::to_string(i));
        if (pr < 0 || pr >= num_classes)
            throw std::invalid_argument("miou: predicted label out of range at " +
                                        std::to_string(i));
        ++confusion[static_cast<std::size_t>(gt) * n + static_cast<std::size_t>(pr)];
        ++valid;
    }
    if (valid == 0) throw std::invalid_argument("miou: no valid points");

    MiouResult result;
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t tp = confusion[c * n + c];
        std::size_t gt_count = 0, pred_count = 0;
        for (std::size_t o = 0; o < n; ++o) {
            gt_count += confusion[c * n + o];
            pred_count += confusion[o * n + c];
        }
        if (gt_count == 0) continue;  // class absent from gt
        const std::size_t uni = gt_count + pred_count - tp;
        const double iou = static_cast<double>(tp) / static_cast<double>(uni);
        result.per_class.emplace_back(static_cast<int>(c), iou);
        sum += iou;
    }
    result.miou = sum / static_cast<double>(result.per_class.size());
    return result;
}

std::vector<Instance> instances_from_cloud(const PointCloud& cloud) {
    if (!cloud.has_instances())
        throw std::invalid_argument("instances_from_cloud: no instance labels");
    if (!cloud.has_semantics())
        throw std::invalid_argument("instances_from_cloud: no semantic labels");
    std::map<int, std::vector<int>> members;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        members[cloud.instance_labels[i]].push_back(static_cast<int>(i));
    std::vector<Instance> out;
    out.reserve(members.size());
    for (const auto& [id, pts] : members) {
        Instance inst;
        inst.members = pts;
        std::map<int, int> votes;
        for (int p : pts) ++votes[cloud.semantic_labels[static_cast<std::size_t>(p)]];
        int best_label = votes.begin()->first, best_count = 0;
        for (const auto& [label, count] : votes)
            if (count > best_count) {  // map order makes ties pick the smaller label
                best_count = count;
                best_label = label;
            }
        inst.class_id = best_label;
        inst.confidence = 1.0;
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<Instance> instances_from_prediction(const InstancePrediction& pred) {
    std::vector<Instance> out;
    out.reserve(pred.instances.size());
    for (const auto& info : pred.instances) {
        Instance inst;
        inst.members = info.members;
        inst.class_id = info.semantic_label;
        inst.confidence = info.confidence;
        out.push_back(std::move(inst));
    }
    return out;
}

namespace {

double point_set_iou(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t inter = 0, ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] < b[ib]) ++ia;
        else if (b[ib] < a[ia]) ++ib;
        else { ++inter; ++ia; ++ib; }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// all-point interpolation: sum recall increments times the running best
// precision to the right
double average_precision(const std::vector<char>& tp_flags, std::size_t num_gt) {
    const std::size_t n = tp_flags.size();
    std::vector<double> precision(n), recall(n);
    std::size_t tp = 0;
    for (std::size_t r = 0; r < n; ++r) {
        tp += tp_flags[r] ? 1u : 0u;
        precision[r] = static_cast<double>(tp) / static_cast<double>(r + 1);
        recall[r] = static_cast<double>(tp) / static_cast<double>(num_gt);
    }
    for (std::size_t r = n; r-- > 1;) precision[r - 1] = std::max(precision[r - 1], precision[r]);
    double ap = 0.0, prev_recall = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        if (recall[r] > prev_recall) ap += (recall[r] - prev_recall) * precision[r];
        prev_recall = recall[r];
    }
    return ap;
}

}  // namespace

MapResult instance_map50(const std::vector<Instance>& predictions,
                         const std::vector<Instance>& ground_truth) {
    std::map<int, std::vector<std::size_t>> gt_by_class;
    for (std::size_t g = 0; g < ground_truth.size(); ++g)
        gt_by_class[ground_truth[g].class_id].push_back(g);

    MapResult result;
    if (gt_by_class.empty()) return result;

    std::vector<std::size_t> pred_order(predictions.size());
    std::iota(pred_order.begin(), pred_order.end(), std::size_t{0});
    std::stable_sort(pred_order.begin(), pred_order.end(), [&](std::size_t a, std::size_t b) {
        return predictions[a].confidence > predictions[b].confidence;
    });

    double ap_sum = 0.0;
    for (const auto& [class_id, gts] : gt_by_class) {
        std::vector<char> matched(gts.size(), 0);
        std::vector<char> tp_flags;
        for (std::size_t p : pred_order) {
            if (predictions[p].class_id != class_id) continue;
            double best_iou = 0.0;
            std::size_t best_g = gts.size();
            for (std::size_t gi = 0; gi < gts.size(); ++gi) {
                if (matched[gi]) continue;
                const double iou =
                    point_set_iou(predictions[p].members, ground_truth[gts[gi]].members);
                if (iou >= 0.5 && iou > best_iou) {
                    best_iou = iou;
                    best_g = gi;
                }
            }
            if (best_g < gts.size()) {
                matched[best_g] = 1;
                tp_flags.push_back(1);
            } else {
                tp_flags.push_back(0);
            }
        }
        const double ap = average_precision(tp_flags, gts.size());
        result.per_class.emplace_back(class_id, ap);
        ap_sum += ap;
    }
    result.map50 = ap_sum / static_cast<double>(result.per_class.size());
    return result;
}

}  // namespace sck
