#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "vhj/analysis.hpp"
#include "vhj/metric.hpp"
#include "vhj/state_constraints.hpp"

namespace vhj {

// FNV-1a over the canonical (sorted) key=value representation; stable under
// key reordering of the source text.
std::uint64_t canonical_digest(const std::map<std::string, std::string>& kv);
std::string digest_hex(std::uint64_t d);

nlohmann::json to_json(const CheckReport& rep);
nlohmann::json to_json(const SolveStats& stats, bool include_timing = true);
nlohmann::json to_json(const RegularityFit& fit);
nlohmann::json to_json(const ScalingStudy& study);
nlohmann::json to_json(const SandwichReport& rep);
nlohmann::json to_json(const SubadditivityReport& rep);
nlohmann::json to_json(const ConcavityReport& rep);
nlohmann::json to_json(const DomainMonotonicityReport& rep);
nlohmann::json to_json(const OscillationReport& rep);
nlohmann::json to_json(const StructuralConstants& c);

struct RunManifest {
    std::string config_digest;
    std::string tool_version;
    double wall_time_s = 0.0;
    std::vector<std::string> emitted_files;
    bool pass = true;
    std::string mode;
    nlohmann::json to_json() const;
};

extern const char* kToolVersion;

}  // namespace vhj
