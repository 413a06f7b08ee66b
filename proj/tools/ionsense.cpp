// ionsense — trapped-ion force-sensing simulator CLI.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ionsense/csv.hpp"
#include "ionsense/fit.hpp"
#include "ionsense/runners.hpp"
#include "ionsense/sensing.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

ionsense::ProbeKind parse_probe_flag(const std::string& v) {
  if (v == "jc") return ionsense::ProbeKind::JC;
  if (v == "qr") return ionsense::ProbeKind::QR;
  if (v == "jt") return ionsense::ProbeKind::JT;
  throw ionsense::ConfigError("unknown probe '" + v + "' (expected jc, qr, jt)");
}

struct SensitivityArgs {
  std::string probe = "jc";
  double g = 0.0;
  double omega = 0.0;
  double z = 0.0;
  std::optional<double> time;
  std::optional<double> heating;
  std::optional<double> heating_x;
  std::optional<double> heating_y;
};

int cmd_sensitivity(const SensitivityArgs& args) {
  ionsense::ProbeParams p;
  p.kind = parse_probe_flag(args.probe);
  p.g = args.g;
  p.omega = args.omega;
  p.z = args.z;
  if (args.heating) p.heating = *args.heating;
  if (args.heating_x) p.heating_x = *args.heating_x;
  if (args.heating_y) p.heating_y = *args.heating_y;
  for (const auto& w : p.validate()) std::cerr << "warning: " << w << "\n";

  const bool heating_given =
      (p.heating > 0) || (p.heating_x > 0) || (p.heating_y > 0);
  if (!heating_given && !args.time) {
    throw ionsense::ConfigError(
        "sensitivity: give --time for the shot-noise value or --heating for "
        "the heating-limited optimum");
  }
  if (heating_given) {
    const auto rep = ionsense::heating_limited_sensitivity(p);
    std::cout << ionsense::format_number(rep.value)
              << " N/Hz^0.5 (heating-limited, optimal t = "
              << ionsense::format_number(*rep.optimal_time) << " s)\n";
  }
  if (args.time) {
    const auto rep = ionsense::shot_noise_sensitivity(p, *args.time);
    std::cout << ionsense::format_number(rep.value)
              << " N/Hz^0.5 (shot-noise, t = "
              << ionsense::format_number(*args.time) << " s)\n";
  }
  return kExitOk;
}

struct EstimateArgs {
  std::string probe = "jc";
  double g = 0.0;
  double omega = 0.0;
  double z = 0.0;
  std::vector<std::string> signals;
  std::vector<double> phis;
};

int cmd_estimate(const EstimateArgs& args) {
  ionsense::ProbeParams p;
  p.kind = parse_probe_flag(args.probe);
  p.g = args.g;
  p.omega = args.omega;
  p.z = args.z;
  p.validate();
  if (args.signals.empty()) {
    throw ionsense::ConfigError("estimate: at least one --signal CSV required");
  }

  if (p.kind == ionsense::ProbeKind::JT) {
    if (args.phis.size() != args.signals.size()) {
      throw ionsense::ConfigError(
          "estimate: one --phi per --signal is required for the jt probe");
    }
    std::vector<ionsense::PhaseTrace> traces;
    for (size_t i = 0; i < args.signals.size(); ++i) {
      const auto table = ionsense::read_csv(args.signals[i]);
      const int tc = table.column_index("t_seconds");
      const int pc = table.column_index("p_up");
      if (tc < 0 || pc < 0) {
        throw ionsense::ConfigError("estimate: CSV must have t_seconds and p_up");
      }
      ionsense::PhaseTrace tr;
      tr.phi = args.phis[i];
      for (const auto& row : table.rows) {
        tr.times.push_back(row[tc]);
        tr.p_up.push_back(row[pc]);
      }
      traces.push_back(std::move(tr));
    }
    const auto est = ionsense::estimate_transverse_force(traces, p);
    std::cout << "force_magnitude_newton = "
              << ionsense::format_number(est.magnitude) << "\n";
    std::cout << "xi_rad = " << ionsense::format_number(*est.xi)
              << " (fringe-resolved)\n";
    std::cout << "fitted_rabi_rad_per_s = "
              << ionsense::format_number(est.fitted_frequency) << "\n";
    std::cout << "rms_residual = " << ionsense::format_number(est.rms_residual)
              << "\n";
    return kExitOk;
  }

  const auto table = ionsense::read_csv(args.signals.front());
  const int tc = table.column_index("t_seconds");
  const int pc = table.column_index("p_up");
  if (tc < 0 || pc < 0) {
    throw ionsense::ConfigError("estimate: CSV must have t_seconds and p_up");
  }
  ionsense::SignalTrace trace;
  for (const auto& row : table.rows) {
    trace.times.push_back(row[tc]);
    trace.p_up.push_back(row[pc]);
  }
  const auto est = ionsense::estimate_axial_force(trace, p);
  std::cout << "force_newton = " << ionsense::format_number(est.magnitude) << "\n";
  std::cout << "fitted_rabi_rad_per_s = "
            << ionsense::format_number(est.fitted_frequency) << "\n";
  std::cout << "fitted_gamma_per_s = "
            << ionsense::format_number(est.fitted_gamma) << "\n";
  std::cout << "rms_residual = " << ionsense::format_number(est.rms_residual) << "\n";
  if (est.frequency_ambiguous) {
    std::cout << "warning: fitted frequency close to the sampling limit "
                 "(aliasing possible)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ionsense — simulator and sensitivity calculator for single-trapped-ion "
      "force sensing.\n"
      "All frequencies are angular (rad/s); forces in N, lengths in m, times "
      "in s.\n"};
  app.require_subcommand(1);

  // simulate
  std::string config_path;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a configured experiment and write the signal CSV");
  simulate->add_option("--config", config_path, "experiment config file")
      ->required();

  // sensitivity
  SensitivityArgs sens;
  auto* sensitivity = app.add_subcommand(
      "sensitivity", "Closed-form force sensitivity for a probe");
  sensitivity->add_option("--probe", sens.probe, "jc, qr or jt")->required();
  sensitivity->add_option("--g", sens.g, "spin-phonon coupling [rad/s]")->required();
  sensitivity->add_option("--omega", sens.omega, "effective phonon frequency [rad/s]")->required();
  sensitivity->add_option("--z", sens.z, "ground-state spread [m]")->required();
  sensitivity->add_option("--time", [&sens](const std::vector<std::string>& v) {
    sens.time = std::stod(v.front());
    return true;
  }, "evolution time for the shot-noise value [s]");
  sensitivity->add_option("--heating", [&sens](const std::vector<std::string>& v) {
    sens.heating = std::stod(v.front());
    return true;
  }, "axial heating rate [1/s]");
  sensitivity->add_option("--heating-x", [&sens](const std::vector<std::string>& v) {
    sens.heating_x = std::stod(v.front());
    return true;
  }, "transverse-x heating rate [1/s]");
  sensitivity->add_option("--heating-y", [&sens](const std::vector<std::string>& v) {
    sens.heating_y = std::stod(v.front());
    return true;
  }, "transverse-y heating rate [1/s]");

  // estimate
  EstimateArgs est;
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate the force from one or more signal CSVs");
  estimate->add_option("--probe", est.probe, "jc, qr or jt")->required();
  estimate->add_option("--g", est.g, "spin-phonon coupling [rad/s]")->required();
  estimate->add_option("--omega", est.omega, "phonon frequency [rad/s]")->required();
  estimate->add_option("--z", est.z, "ground-state spread [m]")->required();
  estimate->add_option("--signal", est.signals, "signal CSV (repeatable)")->required();
  estimate->add_option("--phi", est.phis,
                       "preparation phase per signal [rad] (jt probe)");

  // sweep
  std::string sweep_config;
  auto* sweep = app.add_subcommand(
      "sweep", "Cartesian parameter sweep with summary metrics");
  sweep->add_option("--config", sweep_config, "sweep config file")->required();

  // verify-sw
  std::string sw_kind = "jc";
  auto* verify = app.add_subcommand(
      "verify-sw", "Verify the canonical-transformation identities");
  verify->add_option("--kind", sw_kind, "jc, qr or jt")->required();

  // reproduce
  std::string figure_id;
  std::string outdir = ".";
  auto* reproduce = app.add_subcommand(
      "reproduce", "Write the data series behind a bundled reference figure");
  reproduce->add_option("--figure", figure_id,
                        "fig1a, fig1b, fig2, fig3, fig4a or fig4b")->required();
  reproduce->add_option("--outdir", outdir, "output directory (default: .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      auto cfg = ionsense::parse_config_file(config_path);
      if (!cfg.sweeps.empty()) {
        throw ionsense::ConfigError(
            "simulate: config has [sweep] ranges; use the sweep subcommand");
      }
      const auto out = ionsense::run_experiment(cfg);
      for (const auto& f : out.files_written) std::cout << "wrote " << f << "\n";
      return kExitOk;
    }
    if (sensitivity->parsed()) return cmd_sensitivity(sens);
    if (estimate->parsed()) return cmd_estimate(est);
    if (sweep->parsed()) {
      auto cfg = ionsense::parse_config_file(sweep_config);
      for (const auto& f : ionsense::run_sweep(cfg)) {
        std::cout << "wrote " << f << "\n";
      }
      return kExitOk;
    }
    if (verify->parsed()) {
      std::string report;
      const bool ok =
          ionsense::verify_sw_report(parse_probe_flag(sw_kind), report);
      std::cout << report;
      return ok ? kExitOk : kExitNumerical;
    }
    if (reproduce->parsed()) {
      for (const auto& f : ionsense::reproduce_figure(figure_id, outdir)) {
        std::cout << "wrote " << f << "\n";
      }
      return kExitOk;
    }
  } catch (const ionsense::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
