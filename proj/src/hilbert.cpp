#include "ionsense/hilbert.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace ionsense {

HilbertSpace::HilbertSpace(std::vector<int> mode_cutoffs)
    : cutoffs_(std::move(mode_cutoffs)) {
  if (cutoffs_.empty()) {
    throw std::invalid_argument("HilbertSpace: at least one bosonic mode required");
  }
  mode_dim_ = 1;
  for (int n : cutoffs_) {
    if (n < 2) {
      throw std::invalid_argument("HilbertSpace: mode cutoff must be >= 2");
    }
    mode_dim_ *= n;
  }
}

Eigen::Index HilbertSpace::basis_index(int spin,
                                       std::span<const int> occupations) const {
  if (spin < 0 || spin > 1) {
    throw std::invalid_argument("basis_index: spin must be 0 (up) or 1 (down)");
  }
  if (static_cast<int>(occupations.size()) != mode_count()) {
    throw std::invalid_argument("basis_index: one occupation per mode required");
  }
  Eigen::Index idx = spin;
  for (int k = 0; k < mode_count(); ++k) {
    if (occupations[k] < 0 || occupations[k] >= cutoffs_[k]) {
      throw std::invalid_argument("basis_index: occupation outside cutoff");
    }
    idx = idx * cutoffs_[k] + occupations[k];
  }
  return idx;
}

Operator::Operator(HilbertSpace s, Matrix m) : space(std::move(s)), matrix(std::move(m)) {
  if (matrix.rows() != space.dim() || matrix.cols() != space.dim()) {
    throw std::invalid_argument("Operator: matrix dimension does not match space");
  }
}

void require_same_space(const HilbertSpace& a, const HilbertSpace& b,
                        const std::string& what) {
  if (a != b) {
    throw std::invalid_argument(what + ": operands live on different spaces");
  }
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space, "operator+");
  return {a.space, a.matrix + b.matrix};
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space, "operator-");
  return {a.space, a.matrix - b.matrix};
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space, "operator*");
  return {a.space, a.matrix * b.matrix};
}

Operator operator*(Complex scale, const Operator& a) {
  return {a.space, scale * a.matrix};
}

Operator operator*(double scale, const Operator& a) {
  return {a.space, scale * a.matrix};
}

Operator operator-(const Operator& a) { return {a.space, -a.matrix}; }

Operator adjoint(const Operator& a) { return {a.space, a.matrix.adjoint()}; }

Operator commutator(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space, "commutator");
  return {a.space, a.matrix * b.matrix - b.matrix * a.matrix};
}

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& a, double tol) {
  const double scale = std::max(max_abs(a.matrix), 1e-300);
  return max_abs(a.matrix - a.matrix.adjoint()) <= tol * scale;
}

QuantumState QuantumState::pure(HilbertSpace s, Vector psi) {
  if (psi.size() != s.dim()) {
    throw std::invalid_argument("QuantumState: vector dimension mismatch");
  }
  QuantumState st{std::move(s), StateKind::Pure, std::move(psi), Matrix()};
  st.validate();
  return st;
}

QuantumState QuantumState::mixed(HilbertSpace s, Matrix rho) {
  if (rho.rows() != s.dim() || rho.cols() != s.dim()) {
    throw std::invalid_argument("QuantumState: density dimension mismatch");
  }
  QuantumState st{std::move(s), StateKind::Mixed, Vector(), std::move(rho)};
  st.validate();
  return st;
}

Matrix QuantumState::density_matrix() const {
  if (kind == StateKind::Pure) return amplitudes * amplitudes.adjoint();
  return density;
}

void QuantumState::validate(double tol) const {
  if (kind == StateKind::Pure) {
    if (std::abs(amplitudes.norm() - 1.0) > tol) {
      throw std::invalid_argument("QuantumState: pure state not normalized");
    }
    return;
  }
  if (std::abs(density.trace().real() - 1.0) > tol ||
      std::abs(density.trace().imag()) > tol) {
    throw std::invalid_argument("QuantumState: density trace is not 1");
  }
  if (max_abs(density - density.adjoint()) > 1e-9 * std::max(1.0, max_abs(density))) {
    throw std::invalid_argument("QuantumState: density not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(density, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("QuantumState: density has a negative eigenvalue");
  }
}

namespace {

Matrix mode_lowering_block(int cutoff) {
  Matrix a = Matrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

// kron(spin_block, mode0_block, mode1_block, ...) with the fixed ordering.
Matrix embed(const HilbertSpace& space, const Matrix& spin_block,
             int mode_index, const Matrix& mode_block) {
  Matrix full = spin_block;
  for (int k = 0; k < space.mode_count(); ++k) {
    const int n = space.mode_cutoffs()[k];
    if (k == mode_index) {
      full = Eigen::kroneckerProduct(full, mode_block).eval();
    } else {
      full = Eigen::kroneckerProduct(full, Matrix::Identity(n, n)).eval();
    }
  }
  return full;
}

void check_mode_index(const HilbertSpace& space, int mode_index) {
  if (mode_index < 0 || mode_index >= space.mode_count()) {
    throw std::invalid_argument("invalid mode index");
  }
}

}  // namespace

Operator identity_op(const HilbertSpace& space) {
  return {space, Matrix::Identity(space.dim(), space.dim())};
}

Operator zero_op(const HilbertSpace& space) {
  return {space, Matrix::Zero(space.dim(), space.dim())};
}

Operator mode_lowering(const HilbertSpace& space, int mode_index) {
  check_mode_index(space, mode_index);
  return {space, embed(space, Matrix::Identity(2, 2), mode_index,
                       mode_lowering_block(space.mode_cutoffs()[mode_index]))};
}

Operator mode_raising(const HilbertSpace& space, int mode_index) {
  return adjoint(mode_lowering(space, mode_index));
}

Operator mode_number(const HilbertSpace& space, int mode_index) {
  check_mode_index(space, mode_index);
  const int n = space.mode_cutoffs()[mode_index];
  Matrix num = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) num(i, i) = double(i);
  return {space, embed(space, Matrix::Identity(2, 2), mode_index, num)};
}

Operator spin_operator(const HilbertSpace& space, Pauli which) {
  Matrix s(2, 2);
  const Complex i(0.0, 1.0);
  switch (which) {
    case Pauli::X:
      s << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      s << 0, -i, i, 0;
      break;
    case Pauli::Z:
      s << 1, 0, 0, -1;
      break;
    case Pauli::Plus:
      s << 0, 1, 0, 0;
      break;
    case Pauli::Minus:
      s << 0, 0, 1, 0;
      break;
  }
  return {space, embed(space, s, -1, Matrix())};
}

Operator matrix_exponential(const Operator& a, Complex scale) {
  if (!a.matrix.allFinite()) {
    throw std::invalid_argument("matrix_exponential: non-finite entries");
  }
  Matrix scaled = scale * a.matrix;
  return {a.space, scaled.exp()};
}

QuantumState fock_state(const HilbertSpace& space, Spin spin,
                        std::span<const int> occupations) {
  for (int k = 0; k < space.mode_count(); ++k) {
    if (k < static_cast<int>(occupations.size()) &&
        occupations[k] >= space.mode_cutoffs()[k]) {
      throw std::invalid_argument("fock_state: occupation >= cutoff");
    }
  }
  Vector psi = Vector::Zero(space.dim());
  psi(space.basis_index(static_cast<int>(spin), occupations)) = 1.0;
  return QuantumState::pure(space, std::move(psi));
}

double thermal_tail_mass(double nbar, int cutoff) {
  if (nbar < 0) throw std::invalid_argument("thermal_tail_mass: negative nbar");
  if (nbar == 0) return 0.0;
  return std::pow(nbar / (1.0 + nbar), cutoff);
}

QuantumState thermal_state(const HilbertSpace& space, int mode_index,
                           double nbar) {
  check_mode_index(space, mode_index);
  if (nbar < 0) throw std::invalid_argument("thermal_state: negative nbar");
  const int cutoff = space.mode_cutoffs()[mode_index];
  Eigen::VectorXd p(cutoff);
  for (int n = 0; n < cutoff; ++n) {
    p(n) = std::pow(nbar, n) / std::pow(1.0 + nbar, n + 1);
  }
  p /= p.sum();  // renormalize after truncation

  Matrix mode_rho = Matrix::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) mode_rho(n, n) = p(n);

  Matrix spin_up = Matrix::Zero(2, 2);
  spin_up(0, 0) = 1.0;
  Matrix rho = spin_up;
  for (int k = 0; k < space.mode_count(); ++k) {
    if (k == mode_index) {
      rho = Eigen::kroneckerProduct(rho, mode_rho).eval();
    } else {
      const int n = space.mode_cutoffs()[k];
      Matrix ground = Matrix::Zero(n, n);
      ground(0, 0) = 1.0;
      rho = Eigen::kroneckerProduct(rho, ground).eval();
    }
  }
  return QuantumState::mixed(space, std::move(rho));
}

QuantumState spin_superposition(const HilbertSpace& space, Complex c_up,
                                Complex c_down, const QuantumState& motional) {
  require_same_space(space, motional.space, "spin_superposition");
  const double norm2 = std::norm(c_up) + std::norm(c_down);
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument("spin_superposition: coefficients not normalized");
  }
  const Eigen::Index m = space.mode_dim();
  Matrix chi(2, 1);
  chi << c_up, c_down;

  if (motional.kind == StateKind::Pure) {
    const Vector up_block = motional.amplitudes.head(m);
    const double up_weight = up_block.squaredNorm();
    if (std::abs(up_weight - 1.0) > 1e-10) {
      throw std::invalid_argument(
          "spin_superposition: motional state must be spin-up polarized");
    }
    Vector psi(space.dim());
    psi.head(m) = c_up * up_block;
    psi.tail(m) = c_down * up_block;
    return QuantumState::pure(space, std::move(psi));
  }

  const Matrix osc = motional.density.topLeftCorner(m, m);
  if (std::abs(osc.trace().real() - 1.0) > 1e-10) {
    throw std::invalid_argument(
        "spin_superposition: motional state must be spin-up polarized");
  }
  Matrix spin_rho = chi * chi.adjoint();
  return QuantumState::mixed(space,
                             Eigen::kroneckerProduct(spin_rho, osc).eval());
}

double expectation(const QuantumState& state, const Operator& op) {
  require_same_space(state.space, op.space, "expectation");
  if (state.kind == StateKind::Pure) {
    return (state.amplitudes.adjoint() * op.matrix * state.amplitudes)(0).real();
  }
  return (op.matrix * state.density).trace().real();
}

double probability_up(const QuantumState& state) {
  const Eigen::Index m = state.space.mode_dim();
  if (state.kind == StateKind::Pure) {
    return state.amplitudes.head(m).squaredNorm();
  }
  return state.density.topLeftCorner(m, m).trace().real();
}

double purity(const QuantumState& state) {
  if (state.kind == StateKind::Pure) return 1.0;
  return (state.density * state.density).trace().real();
}

double mode_tail_population(const QuantumState& state, int mode_index) {
  check_mode_index(state.space, mode_index);
  const auto& cutoffs = state.space.mode_cutoffs();
  const int top = cutoffs[mode_index] - 1;

  double pop = 0.0;
  std::vector<int> occ(cutoffs.size(), 0);
  // Walk the full basis; cheap at desk-scale dimensions.
  for (int spin = 0; spin < 2; ++spin) {
    std::fill(occ.begin(), occ.end(), 0);
    while (true) {
      if (occ[mode_index] == top) {
        const Eigen::Index idx = state.space.basis_index(spin, occ);
        if (state.kind == StateKind::Pure) {
          pop += std::norm(state.amplitudes(idx));
        } else {
          pop += state.density(idx, idx).real();
        }
      }
      int k = static_cast<int>(occ.size()) - 1;
      while (k >= 0 && ++occ[k] == cutoffs[k]) occ[k--] = 0;
      if (k < 0) break;
    }
  }
  return pop;
}

std::vector<Eigen::Index> safe_subspace_indices(const HilbertSpace& space,
                                                int levels_cut) {
  const auto& cutoffs = space.mode_cutoffs();
  std::vector<Eigen::Index> keep;
  std::vector<int> occ(cutoffs.size(), 0);
  for (int spin = 0; spin < 2; ++spin) {
    std::fill(occ.begin(), occ.end(), 0);
    while (true) {
      bool safe = true;
      for (size_t k = 0; k < occ.size(); ++k) {
        if (occ[k] >= cutoffs[k] - levels_cut) safe = false;
      }
      if (safe) keep.push_back(space.basis_index(spin, occ));
      int k = static_cast<int>(occ.size()) - 1;
      while (k >= 0 && ++occ[k] == cutoffs[k]) occ[k--] = 0;
      if (k < 0) break;
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

Matrix restrict_to(const Matrix& m, const std::vector<Eigen::Index>& keep) {
  Matrix out(keep.size(), keep.size());
  for (size_t i = 0; i < keep.size(); ++i) {
    for (size_t j = 0; j < keep.size(); ++j) {
      out(i, j) = m(keep[i], keep[j]);
    }
  }
  return out;
}

}  // namespace ionsense
