// decoupling.hpp — dynamical-decoupling protocols: the strong-drive
// two-segment sequence and the phonon phase-flip recursion.

#pragma once

#include "ionsense/dynamics.hpp"
#include "ionsense/models.hpp"

namespace ionsense {

struct ContrastReport {
  double nbar = 0.0;
  double contrast = 0.0;  // S = P_up(t2) - P_up(t1), t1 = pi/2W, t2 = pi/W
};

// Two segments: [H_total + h Omega sx] for t/2, then [H_total - h Omega sx]
// for t/2. With drive_omega = 0 this degenerates to plain evolution.
PulseSequence driven_dd_sequence(const ProbeParams& params,
                                 const HilbertSpace& space, double total_time);

// Suppression diagnostic: the drive decouples the residual term when
// residual_scale = g^2/(2 w) is far below the drive Rabi frequency.
struct DriveSuppression {
  double residual_scale = 0.0;  // g^2 / (2 omega) [rad/s]
  double drive = 0.0;           // Omega [rad/s]
  bool suppressed() const { return drive > 10.0 * residual_scale; }
};

DriveSuppression drive_suppression(const ProbeParams& params);

// Residual spin-motional coupling seen from the frame rotating with the
// drive: (h g^2/w)(e^{2i W t}|+><-| + e^{-2i W t}|-><+|) n.
Operator residual_in_drive_frame(const ProbeParams& params,
                                 const HilbertSpace& space, double time);

// R_pi = exp(i pi n_k) = diag((-1)^n) on the addressed mode.
Operator phonon_phase_flip(const HilbertSpace& space, int mode_index);

// U_n = R U_{n-1} R U_{n-1}; order n >= 1 doubles the base duration n times.
PulseSequence cpmg_sequence(const PulseSequence& base, int order,
                            int mode_index = 0);

enum class ContrastProtocol { Driven, Undriven };

// Simulates the exact total Hamiltonian from |up> x thermal(nbar) and
// evaluates the two-point Rabi contrast.
ContrastReport rabi_contrast(const ProbeParams& params,
                             const HilbertSpace& space, double nbar,
                             ContrastProtocol protocol);

}  // namespace ionsense
