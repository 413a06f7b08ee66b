#include "ionsense/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace ionsense {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two points");
  }
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

namespace {

double damped_cosine_sse(std::span<const double> t, std::span<const double> p,
                         double omega, double gamma) {
  double sse = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    const double model =
        0.5 * (1.0 + std::exp(-gamma * t[i]) * std::cos(2.0 * omega * t[i]));
    const double r = p[i] - model;
    sse += r * r;
  }
  return sse;
}

}  // namespace

DampedCosineFit fit_damped_cosine(std::span<const double> times,
                                  std::span<const double> p_up) {
  if (times.size() != p_up.size() || times.size() < 4) {
    throw std::invalid_argument("fit_damped_cosine: too few samples");
  }
  double p_min = 1.0, p_max = 0.0;
  for (double p : p_up) {
    p_min = std::min(p_min, p);
    p_max = std::max(p_max, p);
  }
  if (p_max - p_min < 1e-6) {
    throw std::invalid_argument("fit_damped_cosine: signal has no modulation");
  }
  const double span = times[times.size() - 1] - times[0];
  double dt_min = std::numeric_limits<double>::max();
  for (size_t i = 1; i < times.size(); ++i) {
    dt_min = std::min(dt_min, times[i] - times[i - 1]);
  }
  if (span <= 0) throw std::invalid_argument("fit_damped_cosine: bad time grid");

  // Coarse scan: lowest omega wins ties by scanning upward with strict
  // improvement only.
  const double omega_lo = 0.25 * kPi / span;
  const double omega_hi = 0.5 * kPi / dt_min;  // half the sampling Nyquist
  const int n_scan = 4000;
  double best_omega = omega_lo;
  double best_sse = std::numeric_limits<double>::max();
  for (int k = 0; k <= n_scan; ++k) {
    const double w = omega_lo + (omega_hi - omega_lo) * k / n_scan;
    const double sse = damped_cosine_sse(times, p_up, w, 0.0);
    if (sse < best_sse * (1.0 - 1e-12)) {
      best_sse = sse;
      best_omega = w;
    }
  }

  // Levenberg-Marquardt on (omega, gamma).
  double omega = best_omega, gamma = 0.0;
  double lambda = 1e-3;
  double sse = damped_cosine_sse(times, p_up, omega, gamma);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      const double e = std::exp(-gamma * t);
      const double c = std::cos(2.0 * omega * t);
      const double s = std::sin(2.0 * omega * t);
      const double model = 0.5 * (1.0 + e * c);
      const double r = p_up[i] - model;
      const double d_omega = -t * e * s;       // dP/domega
      const double d_gamma = -0.5 * t * e * c; // dP/dgamma
      jtj(0, 0) += d_omega * d_omega;
      jtj(0, 1) += d_omega * d_gamma;
      jtj(1, 1) += d_gamma * d_gamma;
      jtr(0) += d_omega * r;
      jtr(1) += d_gamma * r;
    }
    jtj(1, 0) = jtj(0, 1);
    Eigen::Matrix2d damped = jtj;
    damped(0, 0) *= (1.0 + lambda);
    damped(1, 1) *= (1.0 + lambda);
    const Eigen::Vector2d step = damped.ldlt().solve(jtr);
    const double omega_try = omega + step(0);
    const double gamma_try = std::max(0.0, gamma + step(1));
    const double sse_try = damped_cosine_sse(times, p_up, omega_try, gamma_try);
    if (sse_try < sse) {
      omega = omega_try;
      gamma = gamma_try;
      const bool converged = (sse - sse_try) < 1e-16 + 1e-12 * sse;
      sse = sse_try;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (converged) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }

  DampedCosineFit fit;
  fit.omega = std::abs(omega);
  fit.gamma = gamma;
  fit.rms_residual = std::sqrt(sse / double(times.size()));
  fit.aliased = 2.0 * fit.omega * dt_min > 0.9 * kPi;
  if (2.0 * fit.omega * span < kPi) {
    throw std::invalid_argument(
        "fit_damped_cosine: trace spans less than half an oscillation period");
  }
  return fit;
}

namespace {

// For fixed W the fringe model is linear in (alpha, beta) = (sin xi, -cos xi)/2:
//   P - 1/2 = sin(2 W t) (alpha cos phi + beta sin phi).
double fringe_linear_solve(std::span<const PhaseTrace> traces, double w,
                           double* alpha_out, double* beta_out) {
  double m11 = 0, m12 = 0, m22 = 0, v1 = 0, v2 = 0, yy = 0;
  for (const auto& tr : traces) {
    const double c = std::cos(tr.phi), s = std::sin(tr.phi);
    for (size_t i = 0; i < tr.times.size(); ++i) {
      const double basis = std::sin(2.0 * w * tr.times[i]);
      const double y = tr.p_up[i] - 0.5;
      const double b1 = basis * c, b2 = basis * s;
      m11 += b1 * b1;
      m12 += b1 * b2;
      m22 += b2 * b2;
      v1 += b1 * y;
      v2 += b2 * y;
      yy += y * y;
    }
  }
  const double det = m11 * m22 - m12 * m12;
  double alpha = 0, beta = 0;
  if (std::abs(det) > 1e-30) {
    alpha = (m22 * v1 - m12 * v2) / det;
    beta = (m11 * v2 - m12 * v1) / det;
  } else if (m11 + m22 > 0) {
    // Rank-1 system (single phase value); solve along the populated direction.
    if (m11 >= m22) {
      alpha = v1 / std::max(m11, 1e-30);
    } else {
      beta = v2 / std::max(m22, 1e-30);
    }
  }
  if (alpha_out) *alpha_out = alpha;
  if (beta_out) *beta_out = beta;
  return yy - 2.0 * (alpha * v1 + beta * v2) +
         alpha * alpha * m11 + 2.0 * alpha * beta * m12 + beta * beta * m22;
}

}  // namespace

RamseyFringeFit fit_ramsey_fringe(std::span<const PhaseTrace> traces) {
  if (traces.empty()) {
    throw std::invalid_argument("fit_ramsey_fringe: no traces");
  }
  size_t total = 0;
  double t_span = 0, dt_min = std::numeric_limits<double>::max();
  for (const auto& tr : traces) {
    if (tr.times.size() != tr.p_up.size()) {
      throw std::invalid_argument("fit_ramsey_fringe: trace size mismatch");
    }
    total += tr.times.size();
    if (tr.times.size() >= 2) {
      t_span = std::max(t_span, tr.times.back() - tr.times.front());
      for (size_t i = 1; i < tr.times.size(); ++i) {
        dt_min = std::min(dt_min, tr.times[i] - tr.times[i - 1]);
      }
    }
  }
  if (total < 6 || t_span <= 0) {
    throw std::invalid_argument("fit_ramsey_fringe: degenerate scan");
  }

  const double w_lo = 0.25 * kPi / t_span;
  const double w_hi = 0.5 * kPi / dt_min;
  const int n_scan = 4000;
  double best_w = w_lo, best_sse = std::numeric_limits<double>::max();
  for (int k = 0; k <= n_scan; ++k) {
    const double w = w_lo + (w_hi - w_lo) * k / n_scan;
    const double sse = fringe_linear_solve(traces, w, nullptr, nullptr);
    if (sse < best_sse * (1.0 - 1e-12)) {
      best_sse = sse;
      best_w = w;
    }
  }
  // Golden-section polish around the scan winner.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = best_w * 0.995, b = best_w * 1.005;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = fringe_linear_solve(traces, x1, nullptr, nullptr);
  double f2 = fringe_linear_solve(traces, x2, nullptr, nullptr);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = fringe_linear_solve(traces, x1, nullptr, nullptr);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = fringe_linear_solve(traces, x2, nullptr, nullptr);
    }
  }
  const double w = 0.5 * (a + b);
  double alpha = 0, beta = 0;
  const double sse = fringe_linear_solve(traces, w, &alpha, &beta);
  const double amplitude = std::hypot(alpha, beta);
  if (amplitude < 1e-9) {
    throw std::invalid_argument(
        "fit_ramsey_fringe: fringe amplitude is zero (all phases at the null?)");
  }
  RamseyFringeFit fit;
  fit.omega_rms = w;
  fit.xi = std::atan2(alpha, -beta);
  fit.rms_residual = std::sqrt(std::max(0.0, sse) / double(total));
  return fit;
}

NullPhaseResult null_phase_from_scan(std::span<const double> phis,
                                     std::span<const double> p_up) {
  if (phis.size() != p_up.size() || phis.size() < 3) {
    throw std::invalid_argument("null_phase_from_scan: need >= 3 phases");
  }
  // P - 1/2 = a cos(phi) + b sin(phi); the null sits where sin(xi - phi) = 0.
  double m11 = 0, m12 = 0, m22 = 0, v1 = 0, v2 = 0;
  for (size_t i = 0; i < phis.size(); ++i) {
    const double c = std::cos(phis[i]), s = std::sin(phis[i]);
    const double y = p_up[i] - 0.5;
    m11 += c * c;
    m12 += c * s;
    m22 += s * s;
    v1 += c * y;
    v2 += s * y;
  }
  const double det = m11 * m22 - m12 * m12;
  if (std::abs(det) < 1e-30) {
    throw std::invalid_argument("null_phase_from_scan: degenerate phase grid");
  }
  const double a = (m22 * v1 - m12 * v2) / det;
  const double b = (m11 * v2 - m12 * v1) / det;
  if (std::hypot(a, b) < 1e-9) {
    throw std::invalid_argument("null_phase_from_scan: no fringe to locate");
  }
  NullPhaseResult res;
  res.phi0 = std::atan2(a, -b);  // equals xi modulo pi
  res.mod_pi_ambiguous = true;
  return res;
}

}  // namespace ionsense
