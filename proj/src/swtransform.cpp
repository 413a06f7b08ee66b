#include "ionsense/swtransform.hpp"

#include <cmath>

#include "ionsense/fit.hpp"

namespace ionsense {

namespace {

void require_probe_space(ProbeKind kind, const HilbertSpace& space) {
  const int want = kind == ProbeKind::JT ? 2 : 1;
  if (space.mode_count() != want) {
    throw std::invalid_argument("swtransform: space/probe mode count mismatch");
  }
}

}  // namespace

Operator build_generator(ProbeKind kind, const ProbeParams& p,
                         const HilbertSpace& space) {
  require_probe_space(kind, space);
  const double hb = p.hbar;
  const double z = p.ground_state_spread();

  switch (kind) {
    case ProbeKind::JC: {
      Operator a = mode_lowering(space, 0);
      return (p.g / p.omega) * (spin_operator(space, Pauli::Plus) * a -
                                spin_operator(space, Pauli::Minus) * adjoint(a)) +
             (z * p.force / (2.0 * hb * p.omega)) * (a - adjoint(a));
    }
    case ProbeKind::QR: {
      Operator a = mode_lowering(space, 0);
      Operator quad = a - adjoint(a);
      return (p.g / p.omega) * (spin_operator(space, Pauli::X) * quad) +
             (z * p.force / (2.0 * hb * p.omega)) * quad;
    }
    case ProbeKind::JT: {
      Operator qx = mode_lowering(space, 0) - mode_raising(space, 0);
      Operator qy = mode_lowering(space, 1) - mode_raising(space, 1);
      return (p.g / p.omega) * (spin_operator(space, Pauli::X) * qx) +
             (p.g / p.omega) * (spin_operator(space, Pauli::Y) * qy) +
             (z * p.force_x / (2.0 * hb * p.omega)) * qx +
             (z * p.force_y / (2.0 * hb * p.omega)) * qy;
    }
  }
  throw std::invalid_argument("build_generator: unknown kind");
}

Operator conjugate(const Operator& hamiltonian, const Operator& generator) {
  require_same_space(hamiltonian.space, generator.space, "conjugate");
  Operator u = matrix_exponential(generator, 1.0);
  Operator u_inv = matrix_exponential(generator, -1.0);
  return u_inv * hamiltonian * u;
}

Operator sw_free_part(ProbeKind kind, const ProbeParams& p,
                      const HilbertSpace& space) {
  require_probe_space(kind, space);
  if (kind == ProbeKind::JT) {
    return p.hbar * p.omega * (mode_number(space, 0) + mode_number(space, 1));
  }
  return p.hbar * p.omega * mode_number(space, 0);
}

Operator sw_interaction_part(ProbeKind kind, const ProbeParams& p,
                             const HilbertSpace& space) {
  require_probe_space(kind, space);
  const double z = p.ground_state_spread();
  switch (kind) {
    case ProbeKind::JC: {
      Operator a = mode_lowering(space, 0);
      return p.hbar * p.g * (spin_operator(space, Pauli::Minus) * adjoint(a) +
                             spin_operator(space, Pauli::Plus) * a) +
             (z * p.force / 2.0) * (a + adjoint(a));
    }
    case ProbeKind::QR: {
      Operator a = mode_lowering(space, 0);
      Operator quad = a + adjoint(a);
      return p.hbar * p.g * (spin_operator(space, Pauli::X) * quad) +
             (z * p.force / 2.0) * quad;
    }
    case ProbeKind::JT: {
      Operator qx = mode_lowering(space, 0) + mode_raising(space, 0);
      Operator qy = mode_lowering(space, 1) + mode_raising(space, 1);
      return p.hbar * p.g * (spin_operator(space, Pauli::X) * qx) +
             p.hbar * p.g * (spin_operator(space, Pauli::Y) * qy) +
             (z * p.force_x / 2.0) * qx + (z * p.force_y / 2.0) * qy;
    }
  }
  throw std::invalid_argument("sw_interaction_part: unknown kind");
}

double sw_first_order_residual(ProbeKind kind, const ProbeParams& p,
                               const HilbertSpace& space) {
  Operator h0 = sw_free_part(kind, p, space);
  Operator h_int = sw_interaction_part(kind, p, space);
  Operator s = build_generator(kind, p, space);
  Operator condition = h_int + commutator(h0, s);
  const auto keep = safe_subspace_indices(space, 2);
  const double num = operator_norm(restrict_to(condition.matrix, keep));
  const double den = operator_norm(restrict_to(h_int.matrix, keep));
  return num / den;
}

Operator effective_hamiltonian_full(ProbeKind kind, const ProbeParams& p,
                                    const HilbertSpace& space,
                                    bool include_third_order) {
  require_probe_space(kind, space);
  const double hb = p.hbar;
  const double z = p.ground_state_spread();
  EffectiveOptions opts{.include_residual = true, .include_constants = true};

  switch (kind) {
    case ProbeKind::JC: {
      Operator h = build_effective_hamiltonian(EffectiveKind::JcEff, p, space, opts);
      if (include_third_order) {
        Operator a = mode_lowering(space, 0);
        Operator ad = adjoint(a);
        Operator sz = spin_operator(space, Pauli::Z);
        Operator sm = spin_operator(space, Pauli::Minus);
        Operator sp = spin_operator(space, Pauli::Plus);
        const double g = p.g, w = p.omega;
        h = h +
            (2.0 * g * g * z * p.force / (3.0 * w * w)) * (sz * (ad + a)) -
            (4.0 * hb * g * g * g / (3.0 * w * w)) * (sm * ad + sp * a) -
            (4.0 * hb * g * g * g / (3.0 * w * w)) *
                (sm * ad * ad * a + sp * ad * a * a);
      }
      return h;
    }
    case ProbeKind::QR:
      // Closes exactly at second order; no correction exists.
      return build_effective_hamiltonian(EffectiveKind::QrEff, p, space, opts);
    case ProbeKind::JT: {
      Operator h = build_effective_hamiltonian(EffectiveKind::JtEff, p, space, opts);
      if (include_third_order) {
        const Complex i(0.0, 1.0);
        Operator ax = mode_lowering(space, 0);
        Operator ay = mode_lowering(space, 1);
        Operator axd = adjoint(ax);
        Operator ayd = adjoint(ay);
        Operator nx = mode_number(space, 0);
        Operator ny = mode_number(space, 1);
        Operator sx = spin_operator(space, Pauli::X);
        Operator sy = spin_operator(space, Pauli::Y);
        Operator sz = spin_operator(space, Pauli::Z);
        Operator one = identity_op(space);
        const double g = p.g, w = p.omega;
        h = h +
            (2.0 * i * g * g * z * p.force_x / (w * w)) * (sz * (ayd - ay)) -
            (2.0 * i * g * g * z * p.force_y / (w * w)) * (sz * (axd - ax)) -
            (4.0 * hb * g * g * g / (w * w)) *
                (sy * ((ayd + ay) * (one + 2.0 * nx) - 2.0 * (axd * axd * ay) -
                       2.0 * (ax * ax * ayd))) -
            (4.0 * hb * g * g * g / (w * w)) *
                (sx * ((axd + ax) * (one + 2.0 * ny) - 2.0 * (ayd * ayd * ax) -
                       2.0 * (ay * ay * axd)));
      }
      return h;
    }
  }
  throw std::invalid_argument("effective_hamiltonian_full: unknown kind");
}

SwScaling sw_scaling(ProbeKind kind, const ProbeParams& params,
                     const HilbertSpace& space, std::span<const double> g_values,
                     bool include_third_order, int margin) {
  if (g_values.empty()) {
    throw std::invalid_argument("sw_scaling: no coupling values");
  }
  const auto keep = safe_subspace_indices(space, margin);
  if (keep.empty()) {
    throw std::invalid_argument("sw_scaling: margin swallows the whole space");
  }

  SwScaling out;
  std::vector<double> log_g, log_r;
  for (double g : g_values) {
    ProbeParams p = params;
    p.kind = kind;
    p.g = g;
    if (kind == ProbeKind::JC) p.delta = 0.0;
    Operator h_total = build_total_hamiltonian(p, space);
    Operator s = build_generator(kind, p, space);
    Operator transformed = conjugate(h_total, s);
    Operator target = effective_hamiltonian_full(kind, p, space, include_third_order);
    const double r =
        operator_norm(restrict_to((transformed - target).matrix, keep));

    SwReport rep;
    rep.kind = kind;
    rep.g_value = g;
    rep.residual_norm = r;
    rep.predicted_order =
        kind == ProbeKind::JC && include_third_order ? 4 : 3;
    out.reports.push_back(rep);
    if (r > 0) {
      log_g.push_back(std::log(g));
      log_r.push_back(std::log(r));
    }
  }
  if (log_g.size() >= 2) {
    out.slope = fit_line(log_g, log_r).slope;
  }
  return out;
}

double sw_double_commutator_norm(ProbeKind kind, const ProbeParams& params,
                                 const HilbertSpace& space) {
  ProbeParams p = params;
  p.kind = kind;
  Operator h_int = sw_interaction_part(kind, p, space);
  Operator s = build_generator(kind, p, space);
  Operator dbl = commutator(commutator(h_int, s), s);
  const auto keep = safe_subspace_indices(space, 2);
  return operator_norm(restrict_to(dbl.matrix, keep)) /
         operator_norm(restrict_to(h_int.matrix, keep));
}

double qr_double_commutator_norm(const ProbeParams& params,
                                 const HilbertSpace& space) {
  return sw_double_commutator_norm(ProbeKind::QR, params, space);
}

double operator_norm(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  const Matrix gram = m.adjoint() * m;
  Vector v = Vector::Ones(gram.rows()).normalized();
  double lambda = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    Vector w = gram * v;
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    if (iter > 2 && std::abs(next - lambda) <= 1e-6 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

}  // namespace ionsense
