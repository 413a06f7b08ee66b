// sensing.hpp — sensitivity formulas, projection-noise propagation through
// simulated signals, and force estimation from Ramsey-type traces.

#pragma once

#include <functional>
#include <optional>

#include "ionsense/dynamics.hpp"
#include "ionsense/fit.hpp"
#include "ionsense/models.hpp"

namespace ionsense {

enum class SensitivityRegime { ShotNoise, HeatingLimited };

struct SensitivityReport {
  ProbeKind probe = ProbeKind::JC;
  SensitivityRegime regime = SensitivityRegime::ShotNoise;
  double value = 0.0;                 // N / sqrt(Hz)
  std::optional<double> time;         // evolution time t (shot-noise input)
  std::optional<double> optimal_time; // 1/(2 gamma) in the heating-limited case
  std::optional<double> gamma;        // decoherence rate used
};

// Closed forms, minimum discriminable force for 1 s total experimental time:
//   JC: hw/(g z sqrt(t));  QR: hw/(2 g z sqrt(t));  JT: hw/(2 g z sqrt(t)).
SensitivityReport shot_noise_sensitivity(const ProbeParams& params, double t);

// Heating-limited optimum (gamma set by the heating rates):
//   JC: (hw/g z) sqrt(2 <ndot> e);  QR, JT: half of that prefactor.
SensitivityReport heating_limited_sensitivity(const ProbeParams& params);

// Simulator callback: produces a P_up(t) trace for the given parameters (the
// force inside `params` is what the derivative probes).
using SignalSimulator = std::function<SignalTrace(const ProbeParams&)>;

struct SensitivityCurve {
  std::vector<double> times;
  std::vector<double> delta_f;  // N / sqrt(Hz) at each sampled t
};

// Projection-noise sensitivity from a simulated signal:
//   dF(t) = sqrt(P(1-P)) / (|dP/dF| sqrt(nu)),  nu = T/tau, tau = t.
// The derivative is a central finite difference over re-simulation.
SensitivityCurve sensitivity_profile(const SignalSimulator& simulate,
                                     const ProbeParams& params,
                                     double total_time = 1.0,
                                     std::optional<double> tau = {});

// Minimum of the profile over the sampled times.
SensitivityReport sensitivity_from_signal(const SignalSimulator& simulate,
                                          const ProbeParams& params,
                                          double total_time = 1.0,
                                          std::optional<double> tau = {});

struct ForceEstimate {
  double magnitude = 0.0;        // N
  std::optional<double> xi;      // rad, JT only, in (-pi, pi]
  double fitted_frequency = 0.0; // rad/s (signal oscillation frequency / 2)
  double fitted_gamma = 0.0;     // 1/s (axial fit only)
  double rms_residual = 0.0;
  bool frequency_ambiguous = false;  // aliasing suspected
  bool xi_mod_pi_ambiguous = false;
};

// Fits P(t) = 1/2 [1 + e^{-gamma t} cos(2 W t)] and maps W back to the force
// via the probe's Rabi-frequency relation (the counter-rotating probe
// oscillates twice as fast for the same force).
ForceEstimate estimate_axial_force(const SignalTrace& trace,
                                   const ProbeParams& params);

// Joint fit of P(phi, t) = 1/2 [1 + sin(xi - phi) sin(2 W t)] over traces at
// several preparation phases; maps W to |F_perp| and reports xi.
ForceEstimate estimate_transverse_force(std::span<const PhaseTrace> traces,
                                        const ProbeParams& params);

}  // namespace ionsense
