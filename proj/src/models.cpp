#include "ionsense/models.hpp"

#include <cmath>

namespace ionsense {

std::string to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::JC: return "jc";
    case ProbeKind::QR: return "qr";
    case ProbeKind::JT: return "jt";
  }
  return "?";
}

double ProbeParams::ground_state_spread() const {
  if (z.has_value()) return *z;
  if (mass.has_value() && trap_frequency.has_value()) {
    return std::sqrt(hbar / (2.0 * *mass * *trap_frequency));
  }
  throw std::invalid_argument(
      "ProbeParams: need either z or (mass, trap_frequency)");
}

double ProbeParams::delta_or_default() const {
  if (delta.has_value()) return *delta;
  return g * g / (2.0 * omega);
}

std::vector<std::string> ProbeParams::validate() const {
  if (g <= 0 || omega <= 0) {
    throw std::invalid_argument("ProbeParams: g and omega must be positive");
  }
  const bool z_given = z.has_value();
  const bool pair_given = mass.has_value() && trap_frequency.has_value();
  if (!pair_given && (mass.has_value() || trap_frequency.has_value())) {
    throw std::invalid_argument(
        "ProbeParams: mass and trap_frequency must be given together");
  }
  if (z_given == pair_given) {
    throw std::invalid_argument(
        "ProbeParams: exactly one of z or (mass, trap_frequency) must be given");
  }
  if (hbar <= 0) throw std::invalid_argument("ProbeParams: hbar must be positive");

  std::vector<std::string> warnings;
  if (coupling_ratio() > 0.1) {
    warnings.push_back("weak-coupling ratio g/omega = " +
                       std::to_string(coupling_ratio()) +
                       " exceeds 0.1; effective model unreliable");
  }
  return warnings;
}

namespace {

void require_modes(const HilbertSpace& space, int n, const char* what) {
  if (space.mode_count() != n) {
    throw std::invalid_argument(std::string(what) +
                                ": space has wrong number of modes");
  }
}

Operator force_axial(const ProbeParams& p, const HilbertSpace& space) {
  require_modes(space, 1, "ForceAx");
  const double zf = p.ground_state_spread() * p.force / 2.0;
  Operator a = mode_lowering(space, 0);
  return zf * (a + adjoint(a));
}

Operator force_2d(const ProbeParams& p, const HilbertSpace& space) {
  require_modes(space, 2, "Force2D");
  const double zt = p.ground_state_spread();
  Operator ax = mode_lowering(space, 0);
  Operator ay = mode_lowering(space, 1);
  return (zt * p.force_x / 2.0) * (ax + adjoint(ax)) +
         (zt * p.force_y / 2.0) * (ay + adjoint(ay));
}

Operator jc_bare(const ProbeParams& p, const HilbertSpace& space) {
  require_modes(space, 1, "JC");
  const double hb = p.hbar;
  Operator a = mode_lowering(space, 0);
  return hb * p.omega * mode_number(space, 0) +
         hb * p.delta_or_default() * spin_operator(space, Pauli::Z) +
         hb * p.g * (spin_operator(space, Pauli::Minus) * adjoint(a) +
                     spin_operator(space, Pauli::Plus) * a);
}

Operator qr_bare(const ProbeParams& p, const HilbertSpace& space) {
  require_modes(space, 1, "QR");
  Operator a = mode_lowering(space, 0);
  return p.hbar * p.omega * mode_number(space, 0) +
         p.hbar * p.g * (spin_operator(space, Pauli::X) * (a + adjoint(a)));
}

Operator jt_bare(const ProbeParams& p, const HilbertSpace& space) {
  require_modes(space, 2, "JT");
  Operator ax = mode_lowering(space, 0);
  Operator ay = mode_lowering(space, 1);
  return p.hbar * p.omega * (mode_number(space, 0) + mode_number(space, 1)) +
         p.hbar * p.g * (spin_operator(space, Pauli::X) * (ax + adjoint(ax))) +
         p.hbar * p.g * (spin_operator(space, Pauli::Y) * (ay + adjoint(ay)));
}

}  // namespace

Operator build_lab_hamiltonian(HamiltonianKind kind, const ProbeParams& p,
                               const HilbertSpace& space) {
  switch (kind) {
    case HamiltonianKind::JC:
      return jc_bare(p, space);
    case HamiltonianKind::QR:
      return qr_bare(p, space);
    case HamiltonianKind::JT:
      return jt_bare(p, space);
    case HamiltonianKind::JcTotal:
      return jc_bare(p, space) + force_axial(p, space);
    case HamiltonianKind::QrTotal:
      return qr_bare(p, space) + force_axial(p, space);
    case HamiltonianKind::JtTotal:
      return jt_bare(p, space) + force_2d(p, space);
    case HamiltonianKind::Drive:
      return p.hbar * p.drive_omega * spin_operator(space, Pauli::X);
    case HamiltonianKind::ForceAx:
      return force_axial(p, space);
    case HamiltonianKind::Force2D:
      return force_2d(p, space);
  }
  throw std::invalid_argument("build_lab_hamiltonian: unknown kind");
}

Operator build_total_hamiltonian(const ProbeParams& p, const HilbertSpace& space) {
  switch (p.kind) {
    case ProbeKind::JC: return build_lab_hamiltonian(HamiltonianKind::JcTotal, p, space);
    case ProbeKind::QR: return build_lab_hamiltonian(HamiltonianKind::QrTotal, p, space);
    case ProbeKind::JT: return build_lab_hamiltonian(HamiltonianKind::JtTotal, p, space);
  }
  throw std::invalid_argument("build_total_hamiltonian: unknown probe kind");
}

Operator build_effective_hamiltonian(EffectiveKind kind, const ProbeParams& p,
                                     const HilbertSpace& space,
                                     EffectiveOptions options) {
  const double hb = p.hbar;
  const Complex i(0.0, 1.0);

  switch (kind) {
    case EffectiveKind::JcEff: {
      require_modes(space, 1, "JcEff");
      const double omega_f = rabi_frequency_axial(p);
      const double delta_tilde = p.delta_or_default() - p.g * p.g / (2.0 * p.omega);
      Operator h = hb * delta_tilde * spin_operator(space, Pauli::Z) -
                   hb * omega_f * spin_operator(space, Pauli::X);
      if (options.include_residual) {
        h = h - (hb * p.g * p.g / p.omega) *
                    (spin_operator(space, Pauli::Z) * mode_number(space, 0));
      }
      if (options.include_constants) {
        const double zf = p.ground_state_spread() * p.force;
        const double scalar =
            -hb * p.g * p.g / (2.0 * p.omega) - zf * zf / (4.0 * hb * p.omega);
        h = h + hb * p.omega * mode_number(space, 0) + scalar * identity_op(space);
      }
      return h;
    }
    case EffectiveKind::QrEff: {
      require_modes(space, 1, "QrEff");
      const double omega_f = rabi_frequency_axial(p);
      Operator h = (-2.0 * hb * omega_f) * spin_operator(space, Pauli::X);
      // No residual spin-phonon coupling exists for this probe.
      if (options.include_constants) {
        const double zf = p.ground_state_spread() * p.force;
        const double scalar =
            -hb * p.g * p.g / p.omega - zf * zf / (4.0 * hb * p.omega);
        h = h + hb * p.omega * mode_number(space, 0) + scalar * identity_op(space);
      }
      return h;
    }
    case EffectiveKind::JtEff: {
      require_modes(space, 2, "JtEff");
      const TransverseForce tf = transverse_force_parameters(p);
      Operator h = (-hb * tf.omega_x) * spin_operator(space, Pauli::X) +
                   (-hb * tf.omega_y) * spin_operator(space, Pauli::Y);
      if (options.include_residual) {
        Operator ax = mode_lowering(space, 0);
        Operator ay = mode_lowering(space, 1);
        h = h + (2.0 * i * hb * p.g * p.g / p.omega) *
                    (spin_operator(space, Pauli::Z) *
                     (adjoint(ax) * ay - ax * adjoint(ay)));
      }
      if (options.include_constants) {
        const double zt = p.ground_state_spread();
        const double f2 = p.force_x * p.force_x + p.force_y * p.force_y;
        const double scalar = -2.0 * hb * p.g * p.g / p.omega -
                              zt * zt * f2 / (4.0 * hb * p.omega);
        h = h + hb * p.omega * (mode_number(space, 0) + mode_number(space, 1)) +
            scalar * identity_op(space);
      }
      return h;
    }
  }
  throw std::invalid_argument("build_effective_hamiltonian: unknown kind");
}

double rabi_frequency_axial(const ProbeParams& p) {
  return p.g * p.ground_state_spread() * p.force / (2.0 * p.hbar * p.omega);
}

TransverseForce transverse_force_parameters(const ProbeParams& p) {
  TransverseForce out;
  const double scale = p.g * p.ground_state_spread() / (p.hbar * p.omega);
  out.omega_x = scale * p.force_x;
  out.omega_y = scale * p.force_y;
  out.omega_rms = scale * std::hypot(p.force_x, p.force_y);
  if (p.force_x != 0.0 || p.force_y != 0.0) {
    out.xi = std::atan2(p.force_y, p.force_x);
  }
  return out;
}

}  // namespace ionsense
