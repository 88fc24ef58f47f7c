#ifndef HOMODYNE_FOCK_HPP
#define HOMODYNE_FOCK_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace homodyne {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

/// Hermiticity tolerance scales with dimension (entry accumulation).
inline double herm_tol(Eigen::Index dim) { return 1e-12 * static_cast<double>(dim); }

/// Single-mode state on a truncated photon-number basis.
/// amps[n] is the amplitude of |n>; trunc_deficit is the norm-squared mass
/// lost to truncation when the vector represents a truncated unit vector.
struct FockVector {
  Vector amps;
  double trunc_deficit = 0.0;

  Eigen::Index dim() const { return amps.size(); }
  double norm2() const { return amps.squaredNorm(); }
};

/// Truncation dimension for a coherent-like state of mean photon number mu;
/// keeps the Poisson tail below ~1e-12.
inline Eigen::Index auto_dim(double mu) {
  return static_cast<Eigen::Index>(std::ceil(mu + 10.0 * std::sqrt(mu) + 20.0));
}

/// Coherent state |beta> truncated to dim levels.
/// Amplitudes by the recurrence amps[n+1] = amps[n] * beta / sqrt(n+1),
/// which avoids factorial overflow.
inline FockVector coherent_state(Complex beta, Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("coherent_state: dim must be >= 1");
  if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
    throw std::invalid_argument("coherent_state: beta must be finite");
  FockVector s;
  s.amps.resize(dim);
  s.amps[0] = std::exp(-0.5 * std::norm(beta));
  for (Eigen::Index n = 0; n + 1 < dim; ++n)
    s.amps[n + 1] = s.amps[n] * beta / std::sqrt(static_cast<double>(n + 1));
  s.trunc_deficit = std::max(0.0, 1.0 - s.amps.squaredNorm());
  return s;
}

/// Basis state |n>.
inline FockVector fock_state(Eigen::Index n, Eigen::Index dim) {
  if (dim < 1 || n >= dim) throw std::invalid_argument("fock_state: need n < dim");
  FockVector s;
  s.amps = Vector::Zero(dim);
  s.amps[n] = 1.0;
  return s;
}

struct LadderOps {
  Matrix a;       // annihilation
  Matrix a_dag;   // creation
  Matrix number;  // diag(0..dim-1)
};

inline LadderOps ladder_ops(Eigen::Index dim) {
  if (dim < 2) throw std::invalid_argument("ladder_ops: dim must be >= 2");
  LadderOps ops;
  ops.a = Matrix::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n)
    ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ops.a_dag = ops.a.adjoint();
  ops.number = Matrix::Zero(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) ops.number(n, n) = static_cast<double>(n);
  return ops;
}

/// Truncation of (e^{-i theta} a + e^{i theta} a*) / sqrt(2).
inline Matrix rotated_quadrature(double theta, Eigen::Index dim) {
  if (dim < 2) throw std::invalid_argument("rotated_quadrature: dim must be >= 2");
  const Complex phase = std::exp(Complex(0.0, -theta));
  Matrix q = Matrix::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) {
    const double v = std::sqrt(static_cast<double>(n) / 2.0);
    q(n - 1, n) = phase * v;
    q(n, n - 1) = std::conj(phase) * v;
  }
  return q;
}

/// Closed-form overlap <z|z'> = exp(-(|z|^2+|z'|^2)/2 + conj(z) z').
inline Complex coherent_overlap(Complex z, Complex zp) {
  return std::exp(-0.5 * (std::norm(z) + std::norm(zp)) + std::conj(z) * zp);
}

/// Phase rotation e^{-i theta N} applied to a state (diagonal in the Fock basis).
inline FockVector phase_rotate(const FockVector& state, double theta) {
  FockVector out = state;
  for (Eigen::Index n = 0; n < out.dim(); ++n)
    out.amps[n] *= std::exp(Complex(0.0, -theta * static_cast<double>(n)));
  return out;
}

/// Orthonormal Hermite functions h_0..h_{nmax} at a single point, by the
/// three-term recurrence h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}.
inline void hermite_functions(double x, Eigen::Index nmax, RealVector& h) {
  h.resize(nmax + 1);
  h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (nmax >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (Eigen::Index n = 1; n < nmax; ++n) {
    const double np1 = static_cast<double>(n + 1);
    h[n + 1] = std::sqrt(2.0 / np1) * x * h[n] - std::sqrt(static_cast<double>(n) / np1) * h[n - 1];
  }
}

/// Position representation of the rotated state e^{-i theta N} |state> on a grid:
/// psi(x) = sum_n amps[n] e^{-i theta n} h_n(x).
inline Vector position_wavefunction(const FockVector& state, double theta,
                                    const RealVector& xgrid) {
  const Eigen::Index dim = state.dim();
  Vector psi(xgrid.size());
  Vector rotated = phase_rotate(state, theta).amps;
  RealVector h;
  for (Eigen::Index i = 0; i < xgrid.size(); ++i) {
    if (!std::isfinite(xgrid[i]))
      throw std::invalid_argument("position_wavefunction: non-finite grid point");
    hermite_functions(xgrid[i], dim - 1, h);
    Complex acc = 0.0;
    for (Eigen::Index n = 0; n < dim; ++n) acc += rotated[n] * h[n];
    psi[i] = acc;
  }
  return psi;
}

/// Mean photon number <N> of a (possibly truncated) state.
inline double mean_photon_number(const FockVector& state) {
  double mu = 0.0;
  for (Eigen::Index n = 0; n < state.dim(); ++n)
    mu += static_cast<double>(n) * std::norm(state.amps[n]);
  return mu;
}

}  // namespace homodyne

#endif  // HOMODYNE_FOCK_HPP
