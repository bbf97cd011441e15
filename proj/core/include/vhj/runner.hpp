#pragma once

#include <string>

#include "vhj/config.hpp"
#include "vhj/report.hpp"

namespace vhj {

// Executes the configured mode pipeline and writes its artifacts under
// cfg.output_dir. Emitted result files are deterministic for a fixed config
// and seed (timing lives only in the manifest). Returns the manifest, with
// pass = false when an enabled assertion failed.
RunManifest run(const ExperimentConfig& cfg);

// run() plus manifest.json emission; returns the process exit code:
// 0 pass, 2 assertion failure, 1 operational error (thrown by run()).
int run_and_emit(const ExperimentConfig& cfg);

// Human-readable summary of a run directory (reads manifest.json and the
// report files it lists).
std::string summarize_run_directory(const std::string& dir);

}  // namespace vhj
