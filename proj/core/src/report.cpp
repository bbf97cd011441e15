#include "vhj/report.hpp"

#include <sstream>

namespace vhj {

const char* kToolVersion = "vhjlab 0.1.0";

std::uint64_t canonical_digest(const std::map<std::string, std::string>& kv) {
    // std::map iterates in key order, which is the canonical form.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0x1f;
        h *= 1099511628211ull;
    };
    for (const auto& [k, v] : kv) {
        mix(k);
        mix(v);
    }
    return h;
}

std::string digest_hex(std::uint64_t d) {
    std::ostringstream os;
    os << std::hex << d;
    return os.str();
}

nlohmann::json to_json(const CheckReport& rep) {
    return {{"check", rep.check},       {"pass", rep.pass},
            {"measured", rep.measured}, {"expected", rep.expected},
            {"tolerance", rep.tolerance}, {"worst_slack", rep.worst_slack},
            {"details", rep.details}};
}

nlohmann::json to_json(const SolveStats& stats, bool include_timing) {
    nlohmann::json j = {{"iterations", stats.iterations},
                        {"final_residual_sup", stats.final_residual_sup},
                        {"converged", stats.converged},
                        {"tol", stats.tol},
                        {"max_gradient_seen", stats.max_gradient_seen},
                        {"gradient_bound_exceeded", stats.gradient_bound_exceeded}};
    if (include_timing) j["wall_time_s"] = stats.wall_time_s;
    return j;
}

nlohmann::json to_json(const RegularityFit& fit) {
    nlohmann::json j = {{"pairs_sampled", fit.pairs_sampled},
                        {"constant", fit.constant},
                        {"fit_residual", fit.fit_residual},
                        {"anchor", fit.anchor},
                        {"applicable", fit.applicable},
                        {"subdomain", fit.subdomain}};
    if (fit.applicable)
        j["exponent"] = fit.exponent;
    else
        j["exponent"] = nullptr;
    return j;
}

nlohmann::json to_json(const ScalingStudy& study) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : study.rows)
        rows.push_back({{"param", r.param},
                        {"K", r.K},
                        {"branch_diff", r.branch_diff},
                        {"branch_M", r.branch_M}});
    return {{"rows", rows},
            {"slope", study.slope},
            {"expected_slope", study.expected_slope},
            {"slope_tol", study.slope_tol},
            {"dominant", study.dominant},
            {"pass", study.pass}};
}

nlohmann::json to_json(const SandwichReport& rep) {
    return {{"fitted_exponent", rep.fitted_exponent},
            {"log_coefficient", rep.log_coefficient},
            {"offset", rep.offset},
            {"c_lower", rep.c_lower},
            {"C_upper", rep.C_upper},
            {"band_nodes", rep.band_nodes},
            {"no_blowup", rep.no_blowup},
            {"pass", rep.pass},
            {"expected", rep.expected},
            {"tolerance", rep.tolerance}};
}

nlohmann::json to_json(const SubadditivityReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"y", {r.y[0], r.y[1]}},
                        {"x", {r.x[0], r.x[1]}},
                        {"z", {r.z[0], r.z[1]}},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"slack", r.slack},
                        {"pass", r.pass}});
    return {{"pass", rep.pass},
            {"worst_slack", rep.worst_slack},
            {"allowance", rep.allowance},
            {"triples", rows}};
}

nlohmann::json to_json(const ConcavityReport& rep) {
    return {{"pass", rep.pass},
            {"worst_violation", rep.worst_violation},
            {"tol", rep.tol},
            {"mu_lo", rep.mu_lo},
            {"mu_mid", rep.mu_mid},
            {"mu_hi", rep.mu_hi}};
}

nlohmann::json to_json(const DomainMonotonicityReport& rep) {
    return {{"pass", rep.pass},
            {"worst_violation", rep.worst_violation},
            {"tol", rep.tol},
            {"compared_nodes", rep.compared_nodes}};
}

nlohmann::json to_json(const OscillationReport& rep) {
    return {{"pass", rep.pass},
            {"fitted_C", rep.fitted_C},
            {"stability_ratio", rep.stability_ratio},
            {"osc", rep.osc},
            {"expr", rep.expr}};
}

nlohmann::json to_json(const StructuralConstants& c) {
    return {{"a", c.a},
            {"M", c.M},
            {"lambda1", c.lambda1},
            {"lambda1_dp", c.lambda1_dp},
            {"lambda2", c.lambda2}};
}

nlohmann::json RunManifest::to_json() const {
    return {{"config_digest", config_digest},
            {"tool_version", tool_version},
            {"wall_time_s", wall_time_s},
            {"emitted_files", emitted_files},
            {"pass", pass},
            {"mode", mode}};
}

}  // namespace vhj
