// swtransform.hpp — numerical verification of the canonical transformations
// that eliminate the first-order spin-phonon coupling: generator
// construction, exponential conjugation, and residual-order scaling checks.

#pragma once

#include <span>
#include <vector>

#include "ionsense/models.hpp"

namespace ionsense {

struct SwReport {
  ProbeKind kind = ProbeKind::JC;
  double g_value = 0.0;
  double residual_norm = 0.0;  // operator norm on the safe subspace
  int predicted_order = 3;     // expected power of g in the residual
};

struct SwScaling {
  std::vector<SwReport> reports;
  double slope = 0.0;  // log-log fit of residual_norm against g
};

// Anti-Hermitian generator S solving H_int + [H0, S] = 0, built term by term
// from the ladder operators; the force contribution is a pure displacement.
Operator build_generator(ProbeKind kind, const ProbeParams& params,
                         const HilbertSpace& space);

// e^{-S} H e^{S} via two matrix exponentials.
Operator conjugate(const Operator& hamiltonian, const Operator& generator);

// H0 and H_int of the transformation split (H_total = H0 + spin term + H_int).
Operator sw_free_part(ProbeKind kind, const ProbeParams& params,
                      const HilbertSpace& space);
Operator sw_interaction_part(ProbeKind kind, const ProbeParams& params,
                             const HilbertSpace& space);

// ||H_int + [H0, S]|| / ||H_int|| on the safe subspace (top two Fock levels
// per mode projected out); exact zero up to roundoff by construction.
double sw_first_order_residual(ProbeKind kind, const ProbeParams& params,
                               const HilbertSpace& space);

// The closed-form effective Hamiltonian including the free-oscillator term
// and scalar offsets; optionally adds the explicit third-order commutator
// correction (JC and JT carry one, QR closes exactly at second order).
Operator effective_hamiltonian_full(ProbeKind kind, const ProbeParams& params,
                                    const HilbertSpace& space,
                                    bool include_third_order = false);

// Residual ||conjugate(H_total, S) - H_eff_full|| per g value, with a log-log
// slope fit. The JC scan forces delta = 0 so that the spin-frequency term is
// carried through the transformation exactly and the residual isolates the
// commutator series. Exponential conjugation smears truncation damage
// several levels below the cutoff, so these norms project out `margin`
// levels per mode rather than the two that suffice for polynomial checks.
SwScaling sw_scaling(ProbeKind kind, const ProbeParams& params,
                     const HilbertSpace& space, std::span<const double> g_values,
                     bool include_third_order = false, int margin = 8);

// ||[[H_int, S], S]|| / ||H_int|| on the safe subspace.
double sw_double_commutator_norm(ProbeKind kind, const ProbeParams& params,
                                 const HilbertSpace& space);

// Vanishes identically for the counter-rotating probe.
double qr_double_commutator_norm(const ProbeParams& params,
                                 const HilbertSpace& space);

// Largest singular value by power iteration on A^dag A (1e-6 relative).
double operator_norm(const Matrix& m);

}  // namespace ionsense
