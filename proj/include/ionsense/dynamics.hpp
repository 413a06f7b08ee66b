// dynamics.hpp — time evolution under piecewise-constant Hamiltonians,
// instantaneous unitaries, and heating (Lindblad) channels.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ionsense/hilbert.hpp"

namespace ionsense {

struct Segment {
  Operator hamiltonian;  // J; must be Hermitian
  double duration;       // s
};

struct Kick {
  Operator unitary;  // applied instantaneously
};

class PulseSequence {
 public:
  using Element = std::variant<Segment, Kick>;

  explicit PulseSequence(HilbertSpace space) : space_(std::move(space)) {}

  static PulseSequence single(Operator hamiltonian, double duration);

  void append_segment(Operator hamiltonian, double duration);
  void append_kick(Operator unitary);
  void append(const PulseSequence& other);

  const std::vector<Element>& elements() const { return elements_; }
  const HilbertSpace& space() const { return space_; }
  double total_duration() const;
  int kick_count() const;

 private:
  HilbertSpace space_;
  std::vector<Element> elements_;
};

struct SignalTrace {
  std::vector<double> times;                   // s, strictly increasing
  std::vector<double> p_up;                    // spin-up probability
  std::vector<std::vector<double>> mode_tails; // per mode, per sample
  std::string metadata;                        // parameter echo
};

struct HeatingChannel {
  int mode_index = 0;
  double rate = 0.0;  // Gamma [1/s]: d<n>/dt at free evolution
};

struct EvolveResult {
  SignalTrace trace;
  QuantumState final_state;
};

// Propagates through the sequence, sampling P_up and the per-mode tail
// populations at each requested time. Sample times must be strictly
// increasing and lie within the total duration.
EvolveResult evolve(const PulseSequence& sequence, const QuantumState& initial,
                    std::span<const double> sample_times,
                    double hbar = kHbarCodata);

// Lindblad master equation with symmetric up/down jumps per channel:
//   drho/dt = -i/hbar [H, rho] + sum_c Gamma_c (D[a_c] + D[a_c^dag]) rho.
// Fixed-step RK4; restarts with a finer step if the trace drifts.
EvolveResult evolve_lindblad(const Operator& hamiltonian,
                             std::span<const HeatingChannel> channels,
                             const QuantumState& initial,
                             std::span<const double> sample_times,
                             double hbar = kHbarCodata);

// P_up(t) = 1/2 [1 + exp(-gamma t) cos(2 omega_f t)], evaluated exactly.
SignalTrace analytic_damped_signal(double omega_f, double gamma,
                                   std::span<const double> times);

}  // namespace ionsense
