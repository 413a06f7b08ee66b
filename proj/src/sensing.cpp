#include "ionsense/sensing.hpp"

#include <cmath>

namespace ionsense {

namespace {

// dOmega_signal/dF: slope of the observed oscillation frequency in the fitted
// model P = 1/2 [1 + cos(2 W t)] with respect to the force magnitude.
double frequency_per_force(const ProbeParams& p) {
  const double base = p.g * p.ground_state_spread() / (p.hbar * p.omega);
  switch (p.kind) {
    case ProbeKind::JC: return base / 2.0;  // W = Omega_F
    case ProbeKind::QR: return base;        // W = 2 Omega_F
    case ProbeKind::JT: return base;        // W = Omega_rms
  }
  throw std::invalid_argument("frequency_per_force: unknown probe kind");
}

}  // namespace

SensitivityReport shot_noise_sensitivity(const ProbeParams& p, double t) {
  if (t <= 0) throw std::invalid_argument("shot_noise_sensitivity: t must be > 0");
  const double z = p.ground_state_spread();
  double value = p.hbar * p.omega / (p.g * z * std::sqrt(t));
  if (p.kind != ProbeKind::JC) value /= 2.0;
  SensitivityReport r;
  r.probe = p.kind;
  r.regime = SensitivityRegime::ShotNoise;
  r.value = value;
  r.time = t;
  return r;
}

SensitivityReport heating_limited_sensitivity(const ProbeParams& p) {
  const double gamma = p.kind == ProbeKind::JT ? p.heating_x + p.heating_y
                                               : p.heating;
  if (gamma <= 0) {
    throw std::invalid_argument(
        "heating_limited_sensitivity: zero heating (shot-noise regime applies)");
  }
  const double z = p.ground_state_spread();
  double value = (p.hbar * p.omega / (p.g * z)) * std::sqrt(2.0 * gamma * std::exp(1.0));
  if (p.kind != ProbeKind::JC) value /= 2.0;
  SensitivityReport r;
  r.probe = p.kind;
  r.regime = SensitivityRegime::HeatingLimited;
  r.value = value;
  r.gamma = gamma;
  r.optimal_time = 1.0 / (2.0 * gamma);
  return r;
}

SensitivityCurve sensitivity_profile(const SignalSimulator& simulate,
                                     const ProbeParams& params,
                                     double total_time,
                                     std::optional<double> tau) {
  const double f_mag = params.kind == ProbeKind::JT
                           ? std::hypot(params.force_x, params.force_y)
                           : std::abs(params.force);
  if (f_mag <= 0) {
    throw std::invalid_argument("sensitivity_profile: zero force is degenerate");
  }
  const double rel = 1e-2;
  ProbeParams plus = params, minus = params;
  if (params.kind == ProbeKind::JT) {
    plus.force_x *= (1.0 + rel);
    plus.force_y *= (1.0 + rel);
    minus.force_x *= (1.0 - rel);
    minus.force_y *= (1.0 - rel);
  } else {
    plus.force *= (1.0 + rel);
    minus.force *= (1.0 - rel);
  }

  const SignalTrace base = simulate(params);
  const SignalTrace hi = simulate(plus);
  const SignalTrace lo = simulate(minus);
  if (base.times.empty() || hi.times.size() != base.times.size() ||
      lo.times.size() != base.times.size()) {
    throw std::invalid_argument("sensitivity_profile: simulator trace mismatch");
  }

  SensitivityCurve curve;
  const double df = 2.0 * rel * f_mag;
  for (size_t i = 0; i < base.times.size(); ++i) {
    const double t = base.times[i];
    if (t <= 0) continue;
    const double p = std::clamp(base.p_up[i], 0.0, 1.0);
    const double dpdf = (hi.p_up[i] - lo.p_up[i]) / df;
    if (std::abs(dpdf) < 1e-30) continue;
    const double noise = std::sqrt(p * (1.0 - p));
    const double reps = total_time / tau.value_or(t);
    if (reps <= 0) continue;
    curve.times.push_back(t);
    curve.delta_f.push_back(noise / (std::abs(dpdf) * std::sqrt(reps)));
  }
  if (curve.times.empty()) {
    throw std::invalid_argument(
        "sensitivity_profile: signal derivative below numerical floor everywhere");
  }
  return curve;
}

SensitivityReport sensitivity_from_signal(const SignalSimulator& simulate,
                                          const ProbeParams& params,
                                          double total_time,
                                          std::optional<double> tau) {
  const SensitivityCurve curve =
      sensitivity_profile(simulate, params, total_time, tau);
  size_t best = 0;
  for (size_t i = 1; i < curve.delta_f.size(); ++i) {
    if (curve.delta_f[i] < curve.delta_f[best]) best = i;
  }
  SensitivityReport r;
  r.probe = params.kind;
  r.regime = SensitivityRegime::ShotNoise;
  r.value = curve.delta_f[best] * std::sqrt(total_time);  // per sqrt(Hz)
  r.time = curve.times[best];
  return r;
}

ForceEstimate estimate_axial_force(const SignalTrace& trace,
                                   const ProbeParams& params) {
  if (params.kind == ProbeKind::JT) {
    throw std::invalid_argument("estimate_axial_force: use the transverse estimator");
  }
  const DampedCosineFit fit = fit_damped_cosine(trace.times, trace.p_up);
  ForceEstimate est;
  est.fitted_frequency = fit.omega;
  est.fitted_gamma = fit.gamma;
  est.rms_residual = fit.rms_residual;
  est.frequency_ambiguous = fit.aliased;
  est.magnitude = fit.omega / frequency_per_force(params);
  return est;
}

ForceEstimate estimate_transverse_force(std::span<const PhaseTrace> traces,
                                        const ProbeParams& params) {
  if (params.kind != ProbeKind::JT) {
    throw std::invalid_argument("estimate_transverse_force: JT probe required");
  }
  const RamseyFringeFit fit = fit_ramsey_fringe(traces);
  ForceEstimate est;
  est.fitted_frequency = fit.omega_rms;
  est.rms_residual = fit.rms_residual;
  est.magnitude = fit.omega_rms / frequency_per_force(params);
  est.xi = fit.xi;
  est.xi_mod_pi_ambiguous = false;  // joint fit resolves the fringe sign
  return est;
}

}  // namespace ionsense
