#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vhj/coefficients.hpp"
#include "vhj/scheme.hpp"

namespace vhj {

enum class RunMode { Stationary, Time, StateConstraint, Metric, Verify, Sweep };

std::string mode_name(RunMode mode);

// Declarative experiment description. Parsed strictly: unknown keys,
// duplicate keys and out-of-range values are errors with line context.
struct ExperimentConfig {
    RunMode mode = RunMode::Stationary;
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    double resolution = 0.0;
    ProblemSpec problem;  // problem.domain carries the geometry

    // Scheme / solve controls.
    double tol = -1.0;          // < 0: default 1e-8 (1 + sup|f|)
    long budget = 1000000;
    double dt_safety = 1.0;
    std::optional<double> gradient_bound;
    std::optional<double> theta_override;
    std::optional<double> dt_override;
    bool allow_uncertified = false;
    std::optional<double> eps0;

    // stationary
    std::optional<ScalarField> dirichlet;  // boundary data; default: pin init values
    std::optional<ScalarField> init;       // initial iterate; default 0

    // time
    double T = 1.0;
    int snapshot_every = 10;
    LateralMode lateral = LateralMode::Dirichlet;
    std::optional<ScalarField> u0;

    // state-constraint
    std::vector<double> sc_epsilons;
    int sc_max_members = 48;

    // metric
    std::vector<double> mu_list;
    Point metric_center{0.0, 0.0};
    double target_radius = 1.0;
    std::vector<double> metric_epsilons;
    int metric_max_members = 48;

    // verify
    std::vector<std::string> verify_checks;
    bool negative_control = false;

    // sweep
    std::string sweep_param;
    std::vector<double> sweep_values;
    std::string sweep_mode;  // mode each swept run executes

    // Raw key/value pairs (canonical digest input).
    std::map<std::string, std::string> raw;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Re-validate after CLI --set overrides of scalar keys.
ExperimentConfig parse_config_map(const std::map<std::string, std::string>& kv);

}  // namespace vhj
