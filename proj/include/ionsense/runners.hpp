// runners.hpp — config-driven experiment execution: single runs, bundled
// reference scenarios (fig1a ... fig4b), and parameter sweeps.

#pragma once

#include <string>
#include <vector>

#include "ionsense/config.hpp"
#include "ionsense/dynamics.hpp"

namespace ionsense {

struct RunOutput {
  SignalTrace trace;
  std::vector<std::string> files_written;
};

// Simulates the configured protocol over the configured time grid and writes
// the signal CSV (t_seconds, p_up, tail per mode), the metadata JSON and the
// optional SVG plot.
RunOutput run_experiment(const ExperimentConfig& config);

// Simulates the trace only (no files); the driven protocol re-runs the full
// two-segment sequence per sample time, since its sign flip sits at the
// midpoint of each total duration.
SignalTrace simulate_signal(const ExperimentConfig& config);

// Bundled demo scenarios with baked-in parameters. Each writes the data
// series behind the named figure into `outdir` and returns the file list.
std::vector<std::string> reproduce_figure(const std::string& which,
                                          const std::string& outdir);

// Cartesian-product sweep over the config's [sweep] ranges; one CSV row per
// point with the requested metric columns, evaluated in parallel with a
// deterministic row order.
std::vector<std::string> run_sweep(const ExperimentConfig& config);

// Schrieffer-Wolff verification report used by the verify-sw subcommand;
// returns true when every check passes its contract.
bool verify_sw_report(ProbeKind kind, std::string& report_text);

}  // namespace ionsense
