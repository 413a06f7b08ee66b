// models.hpp — probe Hamiltonians and derived frequencies.
//
// Unit convention: every frequency-like parameter (g, omega, delta, drive,
// rabi frequencies) is an angular frequency in rad/s; forces in N, lengths
// in m, hbar in J s. A coupling quoted as "4 kHz" maps to 4e3 rad/s.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ionsense/hilbert.hpp"

namespace ionsense {

enum class ProbeKind { JC, QR, JT };

std::string to_string(ProbeKind kind);

struct ProbeParams {
  ProbeKind kind = ProbeKind::JC;
  double g = 0.0;      // spin-phonon coupling [rad/s]
  double omega = 0.0;  // effective phonon frequency [rad/s]
  std::optional<double> delta;  // effective spin frequency (JC); defaults to g^2/(2 omega)
  double drive_omega = 0.0;     // strong-drive Rabi frequency [rad/s]

  // Exactly one of: ground-state spread z given directly, or (mass, trap
  // frequency) from which z = sqrt(hbar / 2 m w_trap).
  std::optional<double> z;               // m
  std::optional<double> mass;            // kg
  std::optional<double> trap_frequency;  // rad/s

  double force = 0.0;    // axial F [N] (JC/QR)
  double force_x = 0.0;  // transverse components [N] (JT)
  double force_y = 0.0;

  double heating = 0.0;    // axial <ndot> [1/s]
  double heating_x = 0.0;  // transverse heating rates [1/s] (JT)
  double heating_y = 0.0;

  double hbar = kHbarCodata;

  double ground_state_spread() const;
  double delta_or_default() const;
  double coupling_ratio() const { return g / omega; }

  // Throws std::invalid_argument on hard violations; returns human-readable
  // warnings (e.g. weak-coupling ratio above 0.1) otherwise.
  std::vector<std::string> validate() const;
};

enum class HamiltonianKind {
  JC,        // hw n + hD sz + hg(s- a+ + s+ a)
  QR,        // hw n + hg sx (a+ + a)
  JT,        // hw(nx+ny) + hg sx(ax+ax+) + hg sy(ay+ay+)
  JcTotal,   // JC + axial force term
  QrTotal,   // QR + axial force term
  JtTotal,   // JT + 2D force term
  Drive,     // h Omega sx
  ForceAx,   // (z F / 2)(a+ + a)
  Force2D,   // (z Fx/2)(ax+ax+) + (z Fy/2)(ay+ay+)
};

enum class EffectiveKind { JcEff, QrEff, JtEff };

struct EffectiveOptions {
  bool include_residual = false;   // keep the O(g^2/w) spin-phonon term
  bool include_constants = false;  // add hw n and the scalar offsets
};

Operator build_lab_hamiltonian(HamiltonianKind kind, const ProbeParams& params,
                               const HilbertSpace& space);

Operator build_effective_hamiltonian(EffectiveKind kind,
                                     const ProbeParams& params,
                                     const HilbertSpace& space,
                                     EffectiveOptions options = {});

// Omega_F = g z F / (2 hbar omega): axial force-induced Rabi frequency.
double rabi_frequency_axial(const ProbeParams& params);

struct TransverseForce {
  double omega_x = 0.0;      // g z Fx / (hbar w)
  double omega_y = 0.0;
  double omega_rms = 0.0;    // g z |F_perp| / (hbar w)
  std::optional<double> xi;  // atan2(Fy, Fx); unset when both components vanish
};

TransverseForce transverse_force_parameters(const ProbeParams& params);

// Total lab Hamiltonian matching the probe kind (JcTotal/QrTotal/JtTotal).
Operator build_total_hamiltonian(const ProbeParams& params,
                                 const HilbertSpace& space);

}  // namespace ionsense
