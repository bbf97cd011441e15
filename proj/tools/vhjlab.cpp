// Command-line driver. Subcommands mirror the run modes; the config file is
// the unit of experiment, flags only override scalar keys.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vhj/errors.hpp"
#include "vhj/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
};

vhj::ExperimentConfig load(const CommonArgs& args, const std::string& forced_mode) {
    vhj::ExperimentConfig cfg = vhj::parse_config_file(args.config_path);
    std::map<std::string, std::string> kv = cfg.raw;
    if (!forced_mode.empty() && kv["mode"] != forced_mode)
        throw vhj::ConfigError("config mode '" + kv["mode"] + "' does not match subcommand '" +
                               forced_mode + "'");
    for (const std::string& ov : args.overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw vhj::ConfigError("--set expects key=value, got '" + ov + "'");
        kv[ov.substr(0, eq)] = ov.substr(eq + 1);
    }
    if (!args.output_dir.empty()) kv["output.dir"] = args.output_dir;
    return vhj::parse_config_map(kv);
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "experiment config file")->required();
    cmd->add_option("--set", args.overrides, "override a scalar config key (key=value)");
    cmd->add_option("-o,--out", args.output_dir, "output directory override");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for degenerate viscous Hamilton-Jacobi equations"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* mode;  // expected config mode; empty = any
        const char* help;
    };
    const std::vector<Sub> subs = {
        {"solve-stationary", "stationary", "pseudo-time solve of the stationary equation"},
        {"solve-time", "time", "explicit march of the Cauchy problem"},
        {"state-constraint", "state-constraint", "maximal subsolution via the forced path"},
        {"metric", "metric", "metric-problem maximal subsolution m_mu"},
        {"verify", "verify", "property-check suite"},
        {"sweep", "sweep", "fan out runs over a parameter list"},
    };

    std::map<std::string, CommonArgs> args;
    for (const Sub& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        add_common(cmd, args[s.name]);
    }
    CLI::App* report_cmd = app.add_subcommand("report", "summarize a finished run directory");
    std::string report_dir;
    report_cmd->add_option("dir", report_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (report_cmd->parsed()) {
            std::cout << vhj::summarize_run_directory(report_dir);
            return 0;
        }
        for (const Sub& s : subs) {
            if (app.get_subcommand(s.name)->parsed()) {
                vhj::ExperimentConfig cfg = load(args[s.name], s.mode);
                int code = vhj::run_and_emit(cfg);
                std::cout << (code == 0 ? "PASS" : "FAIL") << " (" << cfg.output_dir
                          << "/manifest.json)\n";
                return code;
            }
        }
    } catch (const vhj::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
