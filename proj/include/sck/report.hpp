#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sck {

struct EvalReport {
    std::string metric;  // "miou" | "map50" | "margin" | ...
    double value = 0.0;
    std::vector<std::pair<int, double>> per_class;
    std::map<std::string, std::string> config;  // echo of the run settings
    std::uint64_t seed = 0;
};

std::string to_json(const EvalReport& report);
void write_report_json(const std::string& path, const EvalReport& report);

// Replicate runs of one configuration: the mean plus each seed's value.
struct ReplicateReport {
    std::vector<EvalReport> runs;
    double mean = 0.0;
};

ReplicateReport aggregate_replicates(const std::vector<EvalReport>& runs);
std::string to_json(const ReplicateReport& report);
void write_report_json(const std::string& path, const ReplicateReport& report);

// CSV rows "seed,metric,value" for quick plotting.
void write_metric_csv(const std::string& path, const std::vector<EvalReport>& runs);

}  // namespace sck
