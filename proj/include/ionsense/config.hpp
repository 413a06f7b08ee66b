// config.hpp — flat key-value experiment configuration with sections.
// All physical quantities are SI: rad/s, N, m, s, kg.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ionsense/models.hpp"

namespace ionsense {

// Thrown for malformed configs and unusable values; the CLI maps it to exit 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InitialStateKind { Fock, Thermal, Superposition };
enum class ProtocolKind { Plain, DrivenDd, Cpmg, Lindblad };

struct SweepRange {
  std::string key;
  std::vector<double> values;
};

struct ExperimentConfig {
  ProbeParams params;

  InitialStateKind initial = InitialStateKind::Fock;
  std::vector<int> fock_occupations;  // per mode, defaults to ground state
  double nbar = 0.0;                  // thermal
  double c_up = 1.0, c_down = 0.0;    // superposition magnitudes
  double phi = 0.0;                   // phase on the down amplitude

  ProtocolKind protocol = ProtocolKind::Plain;
  int cpmg_order = 1;
  // Lindblad runs take their channel rates from params.heating*.

  double t_start = 0.0;
  double t_stop = 0.0;
  int t_points = 0;

  std::vector<int> cutoffs;  // per-mode Fock truncation

  std::string csv_path;
  std::string svg_path;       // optional
  std::string metadata_path;  // defaults to csv_path + ".meta.json"

  std::vector<SweepRange> sweeps;        // populated by [sweep] entries
  std::vector<std::string> metrics;      // sweep output metrics

  std::vector<double> time_grid() const;
  HilbertSpace space() const;
  QuantumState initial_state(const HilbertSpace& space) const;
  void validate() const;
};

// Parses the `key = value` / `[section]` format; unknown keys are errors.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<config>");

// Applies a `section.key = value` override (used by sweep points).
void apply_override(ExperimentConfig& config, const std::string& key,
                    double value);

// JSON echo of every resolved parameter, for the run metadata file.
std::string config_metadata_json(const ExperimentConfig& config,
                                 const std::vector<std::string>& warnings,
                                 const std::map<std::string, double>& extras);

}  // namespace ionsense
