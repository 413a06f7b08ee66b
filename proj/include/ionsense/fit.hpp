// fit.hpp — small least-squares fitters for the signal models used by the
// force estimators: a damped cosine in time and a phase-referenced Ramsey
// fringe over (phi, t).

#pragma once

#include <span>
#include <vector>

namespace ionsense {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct DampedCosineFit {
  double omega = 0.0;   // rad/s in P = 1/2 [1 + e^{-gamma t} cos(2 omega t)]
  double gamma = 0.0;   // 1/s
  double rms_residual = 0.0;
  bool aliased = false;  // fitted period not resolved by the sampling
};

// Fits P(t) = 1/2 [1 + e^{-gamma t} cos(2 omega t)] over (omega, gamma).
// Seeded by a coarse frequency scan (ties broken toward the lowest
// frequency), refined by Levenberg-Marquardt.
DampedCosineFit fit_damped_cosine(std::span<const double> times,
                                  std::span<const double> p_up);

struct PhaseTrace {
  double phi = 0.0;  // superposition phase of the prepared spin state
  std::vector<double> times;
  std::vector<double> p_up;
};

struct RamseyFringeFit {
  double omega_rms = 0.0;  // rad/s in P = 1/2 [1 + sin(xi - phi) sin(2 W t)]
  double xi = 0.0;         // rad, in (-pi, pi]
  double rms_residual = 0.0;
};

// Joint fit of P(phi, t) = 1/2 [1 + sin(xi - phi) sin(2 W t)] over (W, xi).
// For fixed W the model is linear in (sin xi, cos xi), so the solver scans W
// and solves the linear subproblem exactly, then polishes W.
RamseyFringeFit fit_ramsey_fringe(std::span<const PhaseTrace> traces);

struct NullPhaseResult {
  double phi0 = 0.0;      // phase of vanishing fringe amplitude, in (-pi, pi]
  bool mod_pi_ambiguous = true;  // phi0 and phi0 +/- pi are equivalent nulls
};

// Locates the phase at which the fringe amplitude vanishes from a scan of
// P(phi) at fixed t: P - 1/2 = a cos(phi) + b sin(phi) is linear in (a, b).
NullPhaseResult null_phase_from_scan(std::span<const double> phis,
                                     std::span<const double> p_up);

}  // namespace ionsense
