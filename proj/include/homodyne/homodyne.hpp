#ifndef HOMODYNE_HOMODYNE_HPP
#define HOMODYNE_HOMODYNE_HPP

#include <utility>
#include <vector>

#include "homodyne/beamsplitter.hpp"
#include "homodyne/fock.hpp"

namespace homodyne {

/// A pure component of a signal state with its mixture weight.
struct WeightedComponent {
  double weight = 1.0;
  FockVector state;
};

/// Parsed signal state: a finite mixture of pure components (a pure state is
/// a single component of weight one).
struct SignalStateSpec {
  std::vector<WeightedComponent> components;

  static SignalStateSpec pure(FockVector state) {
    SignalStateSpec s;
    s.components.push_back({1.0, std::move(state)});
    return s;
  }

  double mean_photon_number() const {
    double mu = 0.0;
    for (const auto& c : components) mu += c.weight * homodyne::mean_photon_number(c.state);
    return mu;
  }
};

/// Outcome statistics of E^z: atoms at x_k = k / (sqrt2 r), k in [kmin, kmax].
/// The sign convention is k = n2 - n1 (auxiliary minus signal photons).
struct LatticeDistribution {
  double r = 0.0;
  double theta = 0.0;
  double spacing = 0.0;  // 1 / (sqrt2 r)
  Eigen::Index kmin = 0;
  Eigen::Index kmax = 0;
  RealVector weights;  // index i corresponds to k = kmin + i
  double deficit = 0.0;

  double atom_position(Eigen::Index k) const { return static_cast<double>(k) * spacing; }
  double weight_at(Eigen::Index k) const {
    return (k >= kmin && k <= kmax) ? weights[k - kmin] : 0.0;
  }
  double total_mass() const { return weights.sum(); }
};

/// Retained k-range: |k| <= ceil(mu_tot + 12 sqrt(mu_tot)), mu_tot the combined
/// mean photon number. Poisson tails beyond are below 1e-10.
inline Eigen::Index lattice_k_cap(double mu_tot) {
  return static_cast<Eigen::Index>(std::ceil(mu_tot + 12.0 * std::sqrt(mu_tot)));
}

/// Detection statistics of E^z for z = r e^{i theta}. The oscillator phase is
/// folded onto the signal (e^{-i theta N}), so the dilation always runs at
/// real oscillator amplitude r; this makes phase covariance exact.
inline LatticeDistribution homodyne_distribution(const SignalStateSpec& state, double r,
                                                 double theta) {
  if (!(r > 0.0)) throw std::invalid_argument("homodyne_distribution: r must be positive");
  const double mu_tot = state.mean_photon_number() + r * r;
  const Eigen::Index kcap = lattice_k_cap(mu_tot);

  LatticeDistribution dist;
  dist.r = r;
  dist.theta = theta;
  dist.spacing = 1.0 / (std::sqrt(2.0) * r);
  dist.kmin = -kcap;
  dist.kmax = kcap;
  dist.weights = RealVector::Zero(2 * kcap + 1);

  for (const auto& comp : state.components) {
    const TwoModeVector v = signal_with_oscillator(phase_rotate(comp.state, theta), r);
    for (Eigen::Index k = -kcap; k <= kcap; ++k)
      dist.weights[k + kcap] += comp.weight * difference_projection_mass(v, k);
  }
  dist.deficit = std::max(0.0, 1.0 - dist.weights.sum());
  return dist;
}

inline double lattice_mean(const LatticeDistribution& d) {
  double m = 0.0;
  for (Eigen::Index k = d.kmin; k <= d.kmax; ++k) m += d.weight_at(k) * d.atom_position(k);
  return m;
}

inline double lattice_variance(const LatticeDistribution& d) {
  const double mean = lattice_mean(d);
  double v = 0.0;
  for (Eigen::Index k = d.kmin; k <= d.kmax; ++k) {
    const double dx = d.atom_position(k) - mean;
    v += d.weight_at(k) * dx * dx;
  }
  return v;
}

/// Outcome set for effect queries: explicit lattice atoms and/or half-open
/// real intervals [lo, hi) mapped to the atoms inside them.
struct OutcomeSet {
  std::vector<Eigen::Index> atoms;
  std::vector<std::pair<double, double>> intervals;  // half-open [lo, hi)
  bool whole_line = false;

  static OutcomeSet all() {
    OutcomeSet s;
    s.whole_line = true;
    return s;
  }
  static OutcomeSet single_atom(Eigen::Index k) {
    OutcomeSet s;
    s.atoms.push_back(k);
    return s;
  }

  bool contains(Eigen::Index k, double x) const {
    if (whole_line) return true;
    for (Eigen::Index a : atoms)
      if (a == k) return true;
    for (const auto& [lo, hi] : intervals)
      if (x >= lo && x < hi) return true;
    return false;
  }
};

/// Effect matrix E^z(S) on the truncated signal space, via the Naimark
/// dilation: entries[m][n] = <U(|m> x |z>)| Pi_S |U(|n> x |z>)>.
inline Matrix effect_matrix(const OutcomeSet& set, double r, double theta, Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("effect_matrix: dim must be >= 1");
  const Complex z = r * std::exp(Complex(0.0, theta));
  std::vector<TwoModeVector> dilated;
  dilated.reserve(dim);
  for (Eigen::Index n = 0; n < dim; ++n)
    dilated.push_back(signal_with_oscillator(fock_state(n, dim), z));

  const double spacing = 1.0 / (std::sqrt(2.0) * r);
  Matrix e = Matrix::Zero(dim, dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = m; n < dim; ++n) {
      const TwoModeVector& vm = dilated[m];
      const TwoModeVector& vn = dilated[n];
      const Eigen::Index d1 = std::min(vm.dim1(), vn.dim1());
      const Eigen::Index d2 = std::min(vm.dim2(), vn.dim2());
      Complex acc = 0.0;
      for (Eigen::Index n1 = 0; n1 < d1; ++n1) {
        for (Eigen::Index n2 = 0; n2 < d2; ++n2) {
          const Eigen::Index k = n2 - n1;
          if (!set.contains(k, static_cast<double>(k) * spacing)) continue;
          acc += std::conj(vm.amps(n1, n2)) * vn.amps(n1, n2);
        }
      }
      e(m, n) = acc;
      if (n != m) e(n, m) = std::conj(acc);
    }
  }
  return e;
}

/// Total E^z mass on the lattice (sum of atom weights plus truncation
/// deficit attributed to it) -- identically 1, the counterexample's E side.
inline double lattice_mass(const SignalStateSpec& state, double r, double theta) {
  const LatticeDistribution d = homodyne_distribution(state, r, theta);
  return d.total_mass() + d.deficit;
}

/// Mass the rotated-quadrature law assigns to the same countable lattice:
/// zero, since the law is absolutely continuous.
inline double gaussian_lattice_mass() { return 0.0; }

}  // namespace homodyne

#endif  // HOMODYNE_HOMODYNE_HPP
