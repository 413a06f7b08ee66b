#include "ionsense/decoupling.hpp"

#include <cmath>

namespace ionsense {

PulseSequence driven_dd_sequence(const ProbeParams& params,
                                 const HilbertSpace& space,
                                 double total_time) {
  if (total_time < 0) {
    throw std::invalid_argument("driven_dd_sequence: negative total time");
  }
  Operator h_total = build_total_hamiltonian(params, space);
  Operator h_drive = build_lab_hamiltonian(HamiltonianKind::Drive, params, space);
  PulseSequence seq(space);
  seq.append_segment(h_total + h_drive, total_time / 2.0);
  seq.append_segment(h_total - h_drive, total_time / 2.0);
  return seq;
}

DriveSuppression drive_suppression(const ProbeParams& params) {
  return {params.g * params.g / (2.0 * params.omega), params.drive_omega};
}

Operator residual_in_drive_frame(const ProbeParams& params,
                                 const HilbertSpace& space, double time) {
  const Complex i(0.0, 1.0);
  const Complex phase = std::exp(2.0 * i * params.drive_omega * time);
  // |+->, |-+> outer products in the sigma_x eigenbasis, written in the
  // computational basis: |+-><-+| pair sums to sz at t = 0.
  Matrix plus_minus(2, 2), minus_plus(2, 2);
  plus_minus << 0.5, -0.5, 0.5, -0.5;
  minus_plus << 0.5, 0.5, -0.5, -0.5;
  Matrix spin = phase * plus_minus + std::conj(phase) * minus_plus;

  Operator number = mode_number(space, 0);
  Matrix spin_full = Matrix::Zero(space.dim(), space.dim());
  const Eigen::Index m = space.mode_dim();
  spin_full.topLeftCorner(m, m) = spin(0, 0) * Matrix::Identity(m, m);
  spin_full.topRightCorner(m, m) = spin(0, 1) * Matrix::Identity(m, m);
  spin_full.bottomLeftCorner(m, m) = spin(1, 0) * Matrix::Identity(m, m);
  spin_full.bottomRightCorner(m, m) = spin(1, 1) * Matrix::Identity(m, m);

  const double coupling = params.hbar * params.g * params.g / params.omega;
  return {space, coupling * (spin_full * number.matrix)};
}

Operator phonon_phase_flip(const HilbertSpace& space, int mode_index) {
  if (mode_index < 0 || mode_index >= space.mode_count()) {
    throw std::invalid_argument("phonon_phase_flip: invalid mode index");
  }
  const Complex i(0.0, 1.0);
  const double pi = std::acos(-1.0);
  return matrix_exponential(mode_number(space, mode_index), i * pi);
}

PulseSequence cpmg_sequence(const PulseSequence& base, int order,
                            int mode_index) {
  if (order < 1) throw std::invalid_argument("cpmg_sequence: order must be >= 1");
  Operator flip = phonon_phase_flip(base.space(), mode_index);
  PulseSequence seq = base;
  for (int level = 0; level < order; ++level) {
    PulseSequence doubled(seq.space());
    doubled.append(seq);
    doubled.append_kick(flip);
    doubled.append(seq);
    doubled.append_kick(flip);
    seq = std::move(doubled);
  }
  return seq;
}

ContrastReport rabi_contrast(const ProbeParams& params,
                             const HilbertSpace& space, double nbar,
                             ContrastProtocol protocol) {
  double rabi = 0.0;
  switch (params.kind) {
    case ProbeKind::JC: rabi = rabi_frequency_axial(params); break;
    case ProbeKind::QR: rabi = 2.0 * rabi_frequency_axial(params); break;
    case ProbeKind::JT: rabi = transverse_force_parameters(params).omega_rms; break;
  }
  if (rabi <= 0) {
    throw std::invalid_argument("rabi_contrast: force-induced Rabi frequency is zero");
  }
  const double pi = std::acos(-1.0);
  const double t1 = pi / (2.0 * rabi);
  const double t2 = pi / rabi;

  QuantumState initial = thermal_state(space, 0, nbar);

  auto p_up_at = [&](double t) {
    if (protocol == ContrastProtocol::Driven) {
      PulseSequence seq = driven_dd_sequence(params, space, t);
      const double samples[] = {t};
      return evolve(seq, initial, samples, params.hbar).trace.p_up.back();
    }
    PulseSequence seq =
        PulseSequence::single(build_total_hamiltonian(params, space), t);
    const double samples[] = {t};
    return evolve(seq, initial, samples, params.hbar).trace.p_up.back();
  };

  ContrastReport report;
  report.nbar = nbar;
  report.contrast = p_up_at(t2) - p_up_at(t1);
  return report;
}

}  // namespace ionsense
