#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsou/analyze.hpp"
#include "rsou/config.hpp"

namespace rsou {

using ordered_json = nlohmann::ordered_json;

struct RunReport {
    std::string tool_version;
    std::string command;
    ordered_json config_echo;
    std::uint64_t seed = 0;
    int workers = 1;
    std::optional<VerdictReport> verdict;
    std::optional<SpectralReport> spectral;
    std::optional<TailStats> tail_stats;
    std::vector<DriftCertificate> certificates;
    double wall_clock_seconds = 0.0;
    std::vector<std::string> sample_files;
};

ordered_json config_to_json(const RunConfig& cfg);

ordered_json report_to_json(const RunReport& report);
RunReport report_from_json(const ordered_json& j);

// report.json with stable key order; returns the written path
std::string emit_report(const RunReport& report, const std::string& out_dir);

}  // namespace rsou
