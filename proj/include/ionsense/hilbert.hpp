// hilbert.hpp — truncated-Fock-space linear algebra: spaces, operators, states.

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ionsense {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHbarCodata = 1.054571817e-34;  // J s

// Spin-1/2 tensored with one or two bosonic modes, each truncated to
// Fock levels |0> ... |N-1>. Basis ordering is fixed: spin index slowest,
// then mode x, then mode y. CSV dumps of states depend on this ordering.
class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<int> mode_cutoffs);

  static constexpr int spin_dim() { return 2; }
  const std::vector<int>& mode_cutoffs() const { return cutoffs_; }
  int mode_count() const { return static_cast<int>(cutoffs_.size()); }
  Eigen::Index mode_dim() const { return mode_dim_; }  // product of cutoffs
  Eigen::Index dim() const { return 2 * mode_dim_; }

  // spin: 0 = |up>, 1 = |down>
  Eigen::Index basis_index(int spin, std::span<const int> occupations) const;

  bool operator==(const HilbertSpace& other) const {
    return cutoffs_ == other.cutoffs_;
  }
  bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

 private:
  std::vector<int> cutoffs_;
  Eigen::Index mode_dim_;
};

// Dense complex operator tagged with its space.
struct Operator {
  HilbertSpace space;
  Matrix matrix;

  Operator(HilbertSpace s, Matrix m);
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(Complex scale, const Operator& a);
Operator operator*(double scale, const Operator& a);
Operator operator-(const Operator& a);
Operator adjoint(const Operator& a);
Operator commutator(const Operator& a, const Operator& b);

double max_abs(const Matrix& m);
bool is_hermitian(const Operator& a, double tol = 1e-12);
void require_same_space(const HilbertSpace& a, const HilbertSpace& b,
                        const std::string& what);

// Pure state vector or density matrix on a space.
enum class StateKind { Pure, Mixed };

struct QuantumState {
  HilbertSpace space;
  StateKind kind;
  Vector amplitudes;  // pure only
  Matrix density;     // mixed only

  static QuantumState pure(HilbertSpace s, Vector psi);
  static QuantumState mixed(HilbertSpace s, Matrix rho);

  // Promote to a density matrix view regardless of kind.
  Matrix density_matrix() const;
  void validate(double tol = 1e-10) const;
};

// ---- operator builders ------------------------------------------------

enum class Pauli { X, Y, Z, Plus, Minus };
enum class Spin { Up = 0, Down = 1 };

Operator identity_op(const HilbertSpace& space);
Operator zero_op(const HilbertSpace& space);

// Annihilation operator on one mode, identity elsewhere: a[n-1,n] = sqrt(n).
Operator mode_lowering(const HilbertSpace& space, int mode_index);
Operator mode_raising(const HilbertSpace& space, int mode_index);
Operator mode_number(const HilbertSpace& space, int mode_index);

// Pauli / ladder operator on the spin factor. Conventions:
// sigma_z |up> = +|up>, sigma_plus = |up><down|, sigma_y = i(sigma_- - sigma_+).
Operator spin_operator(const HilbertSpace& space, Pauli which);

// exp(scale * A) via Pade scaling-and-squaring.
Operator matrix_exponential(const Operator& a, Complex scale = 1.0);

// ---- state builders ---------------------------------------------------

QuantumState fock_state(const HilbertSpace& space, Spin spin,
                        std::span<const int> occupations);

// Geometric (thermal) Fock distribution p_n = nbar^n / (1+nbar)^(n+1) on the
// addressed mode, renormalized after truncation; spin |up>, other modes |0>.
QuantumState thermal_state(const HilbertSpace& space, int mode_index,
                           double nbar);
// Probability mass beyond the cutoff before renormalization.
double thermal_tail_mass(double nbar, int cutoff);

// Replaces the spin factor of `motional` (which must be spin-up polarized)
// with c_up|up> + c_down|down>; mixed if motional is mixed.
QuantumState spin_superposition(const HilbertSpace& space, Complex c_up,
                                Complex c_down, const QuantumState& motional);

// ---- observables ------------------------------------------------------

double expectation(const QuantumState& state, const Operator& op);
double probability_up(const QuantumState& state);
double purity(const QuantumState& state);
// Population of the top Fock level of one mode (truncation-tail diagnostic).
double mode_tail_population(const QuantumState& state, int mode_index);
// Indices of basis states whose occupations stay below cutoff - levels_cut
// for every mode (used to project truncation-corrupted rows out of checks).
std::vector<Eigen::Index> safe_subspace_indices(const HilbertSpace& space,
                                                int levels_cut);
Matrix restrict_to(const Matrix& m, const std::vector<Eigen::Index>& keep);

}  // namespace ionsense
