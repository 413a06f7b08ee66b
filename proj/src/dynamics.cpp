#include "ionsense/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>

namespace ionsense {

PulseSequence PulseSequence::single(Operator hamiltonian, double duration) {
  PulseSequence seq(hamiltonian.space);
  seq.append_segment(std::move(hamiltonian), duration);
  return seq;
}

void PulseSequence::append_segment(Operator hamiltonian, double duration) {
  require_same_space(space_, hamiltonian.space, "PulseSequence::append_segment");
  if (duration < 0) {
    throw std::invalid_argument("PulseSequence: negative segment duration");
  }
  elements_.push_back(Segment{std::move(hamiltonian), duration});
}

void PulseSequence::append_kick(Operator unitary) {
  require_same_space(space_, unitary.space, "PulseSequence::append_kick");
  elements_.push_back(Kick{std::move(unitary)});
}

void PulseSequence::append(const PulseSequence& other) {
  require_same_space(space_, other.space_, "PulseSequence::append");
  for (const auto& el : other.elements_) elements_.push_back(el);
}

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const auto& el : elements_) {
    if (const auto* seg = std::get_if<Segment>(&el)) t += seg->duration;
  }
  return t;
}

int PulseSequence::kick_count() const {
  int n = 0;
  for (const auto& el : elements_) {
    if (std::holds_alternative<Kick>(el)) ++n;
  }
  return n;
}

namespace {

// Spectral propagator for a Hermitian segment Hamiltonian: one
// eigendecomposition serves every requested time step.
class SpectralPropagator {
 public:
  SpectralPropagator(const Matrix& h, double hbar) : hbar_(hbar) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("evolve: eigendecomposition failed");
    }
    vectors_ = es.eigenvectors();
    values_ = es.eigenvalues();
  }

  Matrix unitary(double dt) const {
    const Complex i(0.0, 1.0);
    Vector phases(values_.size());
    for (Eigen::Index k = 0; k < values_.size(); ++k) {
      phases(k) = std::exp(-i * values_(k) * dt / hbar_);
    }
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

  void advance_pure(Vector& psi, double dt) const {
    const Complex i(0.0, 1.0);
    Vector coeffs = vectors_.adjoint() * psi;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      coeffs(k) *= std::exp(-i * values_(k) * dt / hbar_);
    }
    psi = vectors_ * coeffs;
  }

  void advance_mixed(Matrix& rho, double dt) const {
    const Matrix u = unitary(dt);
    rho = u * rho * u.adjoint();
  }

 private:
  double hbar_;
  Matrix vectors_;
  Eigen::VectorXd values_;
};

struct StateCarrier {
  bool pure;
  Vector psi;
  Matrix rho;

  explicit StateCarrier(const QuantumState& s)
      : pure(s.kind == StateKind::Pure) {
    if (pure) {
      psi = s.amplitudes;
    } else {
      rho = s.density;
    }
  }

  QuantumState to_state(const HilbertSpace& space) const {
    if (pure) {
      Vector normalized = psi / psi.norm();
      return QuantumState::pure(space, normalized);
    }
    Matrix rh = rho;
    rh = 0.5 * (rh + Matrix(rh.adjoint()));  // squash roundoff asymmetry
    rh /= rh.trace().real();
    return QuantumState::mixed(space, rh);
  }

  double p_up(const HilbertSpace& space) const {
    const Eigen::Index m = space.mode_dim();
    if (pure) return psi.head(m).squaredNorm();
    return rho.topLeftCorner(m, m).trace().real();
  }
};

void record_sample(const HilbertSpace& space, const StateCarrier& st, double t,
                   SignalTrace& trace) {
  trace.times.push_back(t);
  trace.p_up.push_back(st.p_up(space));
  // Tail populations via a lightweight temporary state (no validation cost).
  for (int k = 0; k < space.mode_count(); ++k) {
    QuantumState tmp{space, st.pure ? StateKind::Pure : StateKind::Mixed,
                     st.pure ? st.psi : Vector(), st.pure ? Matrix() : st.rho};
    trace.mode_tails[k].push_back(mode_tail_population(tmp, k));
  }
}

void check_sample_times(std::span<const double> sample_times, double total) {
  for (size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0) {
      throw std::invalid_argument("evolve: negative sample time");
    }
    if (i > 0 && sample_times[i] <= sample_times[i - 1]) {
      throw std::invalid_argument("evolve: sample times must be strictly increasing");
    }
    if (sample_times[i] > total * (1.0 + 1e-12) + 1e-15) {
      throw std::invalid_argument("evolve: sample time beyond sequence duration");
    }
  }
}

}  // namespace

EvolveResult evolve(const PulseSequence& sequence, const QuantumState& initial,
                    std::span<const double> sample_times, double hbar) {
  require_same_space(sequence.space(), initial.space, "evolve");
  const double total = sequence.total_duration();
  check_sample_times(sample_times, total);

  const HilbertSpace& space = sequence.space();
  SignalTrace trace;
  trace.mode_tails.resize(space.mode_count());

  StateCarrier st(initial);
  size_t next = 0;
  double t_cursor = 0.0;

  // t = 0 samples refer to the initial state, before any kick.
  while (next < sample_times.size() && sample_times[next] <= 0.0) {
    record_sample(space, st, sample_times[next], trace);
    ++next;
  }

  for (const auto& element : sequence.elements()) {
    if (const auto* kick = std::get_if<Kick>(&element)) {
      if (st.pure) {
        st.psi = kick->unitary.matrix * st.psi;
      } else {
        st.rho = kick->unitary.matrix * st.rho * kick->unitary.matrix.adjoint();
      }
      continue;
    }
    const auto& seg = std::get<Segment>(element);
    if (seg.duration == 0.0) continue;
    const double t_end = t_cursor + seg.duration;
    SpectralPropagator prop(seg.hamiltonian.matrix, hbar);

    double t_local = t_cursor;
    while (next < sample_times.size() &&
           sample_times[next] <= t_end * (1.0 + 1e-15)) {
      const double dt = sample_times[next] - t_local;
      if (dt > 0) {
        if (st.pure) {
          prop.advance_pure(st.psi, dt);
        } else {
          prop.advance_mixed(st.rho, dt);
        }
      }
      t_local = sample_times[next];
      record_sample(space, st, sample_times[next], trace);
      ++next;
    }
    if (t_end > t_local) {
      if (st.pure) {
        prop.advance_pure(st.psi, t_end - t_local);
      } else {
        prop.advance_mixed(st.rho, t_end - t_local);
      }
    }
    t_cursor = t_end;
  }

  return {std::move(trace), st.to_state(space)};
}

namespace {

double infinity_norm(const Matrix& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    best = std::max(best, m.row(r).cwiseAbs().sum());
  }
  return best;
}

using Sparse = Eigen::SparseMatrix<Complex>;

// One sqrt(rate)-scaled jump operator stored by its nonzero band:
// L(target[m], source[m]) = amp[m]. The heating jumps are single-band, so
// L rho L^dag reduces to a double loop over the band.
struct BandedJump {
  std::vector<Eigen::Index> target;
  std::vector<Eigen::Index> source;
  std::vector<double> amp;

  static BandedJump from_dense(const Matrix& l) {
    BandedJump j;
    for (Eigen::Index c = 0; c < l.cols(); ++c) {
      for (Eigen::Index r = 0; r < l.rows(); ++r) {
        if (l(r, c) != Complex(0.0)) {
          j.target.push_back(r);
          j.source.push_back(c);
          j.amp.push_back(l(r, c).real());
        }
      }
    }
    return j;
  }

  void accumulate_sandwich(const Matrix& rho, Matrix& out) const {
    const size_t n = amp.size();
    for (size_t mc = 0; mc < n; ++mc) {
      for (size_t mr = 0; mr < n; ++mr) {
        out(target[mr], target[mc]) +=
            amp[mr] * amp[mc] * rho(source[mr], source[mc]);
      }
    }
  }
};

struct LindbladGenerator {
  Sparse h;  // J
  double hbar;
  std::vector<BandedJump> jumps;
  Matrix anticommutator_weights;  // W_ij = sum_k (w_k(i) + w_k(j)) / 2

  Matrix derivative(const Matrix& rho) const {
    const Complex i(0.0, 1.0);
    Matrix d = Matrix(h * rho);
    d -= Matrix((h * rho.adjoint()).adjoint());  // rho h, using h = h^dag
    d *= -(i / hbar);
    for (const auto& jump : jumps) jump.accumulate_sandwich(rho, d);
    d -= anticommutator_weights.cwiseProduct(rho);
    return d;
  }
};

}  // namespace

EvolveResult evolve_lindblad(const Operator& hamiltonian,
                             std::span<const HeatingChannel> channels,
                             const QuantumState& initial,
                             std::span<const double> sample_times,
                             double hbar) {
  require_same_space(hamiltonian.space, initial.space, "evolve_lindblad");
  const HilbertSpace& space = hamiltonian.space;
  const double total =
      sample_times.empty() ? 0.0 : sample_times[sample_times.size() - 1];
  check_sample_times(sample_times, total);

  LindbladGenerator gen;
  gen.h = hamiltonian.matrix.sparseView(1.0, 1e-300);
  gen.hbar = hbar;
  gen.anticommutator_weights = Matrix::Zero(space.dim(), space.dim());
  double dissipator_scale = 0.0;
  for (const auto& ch : channels) {
    if (ch.rate < 0) {
      throw std::invalid_argument("evolve_lindblad: negative heating rate");
    }
    if (ch.rate == 0) continue;
    const Matrix a = std::sqrt(ch.rate) * mode_lowering(space, ch.mode_index).matrix;
    const Matrix ad = a.adjoint();
    gen.jumps.push_back(BandedJump::from_dense(a));
    gen.jumps.push_back(BandedJump::from_dense(ad));
    const Eigen::VectorXd w =
        ((ad * a).diagonal() + (a * ad).diagonal()).real();
    for (Eigen::Index r = 0; r < space.dim(); ++r) {
      for (Eigen::Index c = 0; c < space.dim(); ++c) {
        gen.anticommutator_weights(r, c) += 0.5 * (w(r) + w(c));
      }
    }
    dissipator_scale +=
        ch.rate * 2.0 * (space.mode_cutoffs()[ch.mode_index] + 1.0);
  }

  const double h_scale = infinity_norm(hamiltonian.matrix) / hbar;

  for (int attempt = 0; attempt < 3; ++attempt) {
    // The coherent part keeps h <= 0.01 hbar/|H|; the dissipator tolerates a
    // looser 0.05/rate bound at RK4 accuracy.
    const double h_max =
        1.0 / std::max(100.0 * h_scale + 20.0 * dissipator_scale, 1e-6) /
        std::pow(4.0, attempt);

    SignalTrace trace;
    trace.mode_tails.resize(space.mode_count());
    Matrix rho = initial.density_matrix();
    double t = 0.0;
    bool drifted = false;

    auto sample = [&](double ts) {
      StateCarrier st{QuantumState{space, StateKind::Mixed, Vector(), rho}};
      record_sample(space, st, ts, trace);
    };

    size_t next = 0;
    while (next < sample_times.size() && sample_times[next] <= 0.0) {
      sample(sample_times[next]);
      ++next;
    }
    for (; next < sample_times.size() && !drifted; ++next) {
      const double span = sample_times[next] - t;
      const int steps = std::max(1, static_cast<int>(std::ceil(span / h_max)));
      const double dt = span / steps;
      for (int s = 0; s < steps; ++s) {
        const Matrix k1 = gen.derivative(rho);
        const Matrix k2 = gen.derivative(rho + 0.5 * dt * k1);
        const Matrix k3 = gen.derivative(rho + 0.5 * dt * k2);
        const Matrix k4 = gen.derivative(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t = sample_times[next];
      if (std::abs(rho.trace().real() - 1.0) > 1e-8) {
        drifted = true;
        break;
      }
      sample(sample_times[next]);
    }
    if (!drifted) {
      rho = 0.5 * (rho + Matrix(rho.adjoint()));
      rho /= rho.trace().real();
      return {std::move(trace), QuantumState::mixed(space, rho)};
    }
  }
  throw std::runtime_error(
      "evolve_lindblad: step-size failure (trace drift exceeded 1e-8)");
}

SignalTrace analytic_damped_signal(double omega_f, double gamma,
                                   std::span<const double> times) {
  if (gamma < 0) {
    throw std::invalid_argument("analytic_damped_signal: negative gamma");
  }
  SignalTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.p_up.reserve(times.size());
  for (double t : times) {
    trace.p_up.push_back(
        0.5 * (1.0 + std::exp(-gamma * t) * std::cos(2.0 * omega_f * t)));
  }
  return trace;
}

}  // namespace ionsense
