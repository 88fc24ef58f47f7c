#ifndef HOMODYNE_MOMENTS_HPP
#define HOMODYNE_MOMENTS_HPP

#include <limits>
#include <vector>

#include "homodyne/homodyne.hpp"
#include "homodyne/quadrature.hpp"

namespace homodyne {

/// kth raw moment of a lattice distribution. Raises if the truncated tail
/// could dominate the requested moment.
inline double empirical_moment(const LatticeDistribution& dist, Eigen::Index k) {
  if (k < 0) throw std::invalid_argument("empirical_moment: k must be >= 0");
  const double xmax =
      std::max(std::abs(dist.atom_position(dist.kmin)), std::abs(dist.atom_position(dist.kmax)));
  // Deficits below 1e-12 are rounding-level (1 - sum of ~1e4 doubles cannot
  // resolve genuine tail mass there) and are not treated as tail.
  const double tail = dist.deficit < 1e-12 ? 0.0 : dist.deficit;
  if (tail * std::pow(xmax, static_cast<double>(k)) >= 1e-8)
    throw std::runtime_error("empirical_moment: tail-dominated moment, k too large");
  double m = 0.0;
  for (Eigen::Index j = dist.kmin; j <= dist.kmax; ++j)
    m += dist.weight_at(j) * std::pow(dist.atom_position(j), static_cast<double>(k));
  return m;
}

namespace detail {

/// Dilation-side data for the moment operators: U(|n> x |z>) for n < dim.
inline std::vector<TwoModeVector> dilated_basis(double r, double theta, Eigen::Index dim) {
  const Complex z = r * std::exp(Complex(0.0, theta));
  std::vector<TwoModeVector> basis;
  basis.reserve(dim);
  for (Eigen::Index n = 0; n < dim; ++n)
    basis.push_back(signal_with_oscillator(fock_state(n, dim), z));
  return basis;
}

inline Complex sector_weighted_overlap(const TwoModeVector& vm, const TwoModeVector& vn,
                                       double scale, Eigen::Index k) {
  const Eigen::Index d1 = std::min(vm.dim1(), vn.dim1());
  const Eigen::Index d2 = std::min(vm.dim2(), vn.dim2());
  Complex acc = 0.0;
  for (Eigen::Index n1 = 0; n1 < d1; ++n1) {
    for (Eigen::Index n2 = 0; n2 < d2; ++n2) {
      const double x = static_cast<double>(n2 - n1) * scale;
      acc += std::conj(vm.amps(n1, n2)) * vn.amps(n1, n2) *
             std::pow(x, static_cast<double>(k));
    }
  }
  return acc;
}

}  // namespace detail

/// Moment operator L(x^k, E^z) on the truncated signal space, computed in the
/// dilation basis where ((sqrt2 r)^{-1} N_-)^k is diagonal:
/// entries[m][n] = <U(|m> x |z>)| ((sqrt2 r)^{-1} N_-)^k |U(|n> x |z>)>.
inline Matrix moment_operator_matrix(double r, double theta, Eigen::Index k, Eigen::Index dim) {
  if (!(r > 0.0)) throw std::invalid_argument("moment_operator_matrix: r must be positive");
  if (k < 0) throw std::invalid_argument("moment_operator_matrix: k must be >= 0");
  const auto basis = detail::dilated_basis(r, theta, dim);
  const double scale = 1.0 / (std::sqrt(2.0) * r);
  Matrix mk(dim, dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = m; n < dim; ++n) {
      mk(m, n) = detail::sector_weighted_overlap(basis[m], basis[n], scale, k);
      if (n != m) mk(n, m) = std::conj(mk(m, n));
    }
  }
  return mk;
}

/// Intrinsic noise M2 - M1^2; equals N / (2 r^2) on the low-Fock block.
inline Matrix intrinsic_noise_matrix(double r, double theta, Eigen::Index dim) {
  const Matrix m1 = moment_operator_matrix(r, theta, 1, dim);
  const Matrix m2 = moment_operator_matrix(r, theta, 2, dim);
  return m2 - m1 * m1;
}

/// Highest index of the block where truncated matrix identities are reliable.
inline Eigen::Index low_fock_block(Eigen::Index dim, Eigen::Index k) {
  return std::max<Eigen::Index>(1, dim - k - 2);
}

struct ResidualEntry {
  double r;
  Eigen::Index k;
  double value;
};

/// |<psi| (L(x^k, E^z) - Q_theta^k) |phi>| over a list of amplitudes; probes
/// must live on low Fock levels so the truncated power of Q_theta is exact.
inline std::vector<ResidualEntry> residual_scaling_probe(Eigen::Index k, double theta,
                                                         const std::vector<double>& r_list,
                                                         const Vector& phi, const Vector& psi) {
  const Eigen::Index support = std::max(phi.size(), psi.size());
  const Eigen::Index dim = support + 2 * k + 4;
  const Matrix q = rotated_quadrature(theta, dim);
  Matrix qk = Matrix::Identity(dim, dim);
  for (Eigen::Index i = 0; i < k; ++i) qk = q * qk;

  Vector phi_p = Vector::Zero(dim);
  phi_p.head(phi.size()) = phi;
  Vector psi_p = Vector::Zero(dim);
  psi_p.head(psi.size()) = psi;

  std::vector<ResidualEntry> table;
  for (double r : r_list) {
    const Matrix mk = moment_operator_matrix(r, theta, k, dim);
    const Complex val = psi_p.dot((mk - qk) * phi_p);
    table.push_back({r, k, std::abs(val)});
  }
  return table;
}

struct ExpBoundResult {
  double lhs;
  double rhs;
  bool holds;
};

/// Exponential moment of the coherent-state statistics against the closed-form
/// bound exp[(|beta|^2 + r^2)(e^{a/(sqrt2 r)} - 1)].
inline ExpBoundResult exp_moment_bound_check(Complex beta, double r, double theta, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("exp_moment_bound_check: a must be positive");
  const SignalStateSpec state =
      SignalStateSpec::pure(coherent_state(beta, auto_dim(std::norm(beta))));
  const LatticeDistribution dist = homodyne_distribution(state, r, theta);
  double lhs = 0.0;
  for (Eigen::Index j = dist.kmin; j <= dist.kmax; ++j)
    lhs += dist.weight_at(j) * std::exp(a * std::abs(dist.atom_position(j)));
  const double rhs =
      std::exp((std::norm(beta) + r * r) * (std::exp(a / (std::sqrt(2.0) * r)) - 1.0));
  return {lhs, rhs, lhs <= rhs + 1e-9};
}

struct DeterminacyProbeResult {
  std::vector<double> statistic;    // s_k = (1/2k) M_{2k}^{1/(2k)}, k = 1..K
  std::vector<double> running_min;
  bool consistent_with_determinacy;
};

/// Carleman-type diagnostic on even moments M_0..M_{2K}: the sequence
/// s_k = (1/2k) M_{2k}^{1/(2k)}. A bounded tail is consistent with
/// determinacy; a tail growing past twice the running minimum is flagged.
inline DeterminacyProbeResult determinacy_probe(const std::vector<double>& moments) {
  if (moments.size() < 9)
    throw std::invalid_argument("determinacy_probe: need even moments up to 2K, K >= 4");
  DeterminacyProbeResult res;
  double run_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; 2 * k < moments.size(); ++k) {
    const double m2k = moments[2 * k];
    if (!std::isfinite(m2k) || m2k < 0.0)
      throw std::invalid_argument("determinacy_probe: even moments must be finite and >= 0");
    const double s =
        std::pow(m2k, 1.0 / (2.0 * static_cast<double>(k))) / (2.0 * static_cast<double>(k));
    res.statistic.push_back(s);
    run_min = std::min(run_min, s);
    res.running_min.push_back(run_min);
  }
  const std::size_t n = res.statistic.size();
  const bool tail_growing = n >= 3 && res.statistic[n - 1] > res.statistic[n - 2] &&
                            res.statistic[n - 2] > res.statistic[n - 3] &&
                            res.statistic[n - 1] > 2.0 * res.running_min[n - 1];
  res.consistent_with_determinacy = !tail_growing;
  return res;
}

}  // namespace homodyne

#endif  // HOMODYNE_MOMENTS_HPP
