#include "sck/report.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace sck {

namespace {

nlohmann::json report_json(const EvalReport& report) {
    nlohmann::json j;
    j["metric"] = report.metric;
    j["value"] = report.value;
    j["seed"] = report.seed;
    j["config"] = report.config;
    nlohmann::json per_class = nlohmann::json::object();
    for (const auto& [cls, v] : report.per_class) per_class[std::to_string(cls)] = v;
    j["per_class"] = per_class;
    return j;
}

void dump(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace

std::string to_json(const EvalReport& report) { return report_json(report).dump(2); }

void write_report_json(const std::string& path, const EvalReport& report) {
    dump(path, report_json(report));
}

ReplicateReport aggregate_replicates(const std::vector<EvalReport>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate_replicates: no runs");
    ReplicateReport rep;
    rep.runs = runs;
    double sum = 0.0;
    for (const auto& r : runs) sum += r.value;
    rep.mean = sum / static_cast<double>(runs.size());
    return rep;
}

std::string to_json(const ReplicateReport& report) {
    nlohmann::json j;
    j["mean"] = report.mean;
    j["runs"] = nlohmann::json::array();
    for (const auto& r : report.runs) j["runs"].push_back(report_json(r));
    return j.dump(2);
}

void write_report_json(const std::string& path, const ReplicateReport& report) {
    nlohmann::json j;
    j["mean"] = report.mean;
    j["runs"] = nlohmann::json::array();
    for (const auto& r : report.runs) j["runs"].push_back(report_json(r));
    dump(path, j);
}

void write_metric_csv(const std::string& path, const std::vector<EvalReport>& runs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.precision(17);
    out << "seed,metric,value\n";
    for (const auto& r : runs) out << r.seed << "," << r.metric << "," << r.value << "\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace sck
