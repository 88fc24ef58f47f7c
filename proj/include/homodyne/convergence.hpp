#ifndef HOMODYNE_CONVERGENCE_HPP
#define HOMODYNE_CONVERGENCE_HPP

#include <functional>
#include <string>

#include "homodyne/moments.hpp"

namespace homodyne {

/// Lattice probability of the half-open interval [lo, hi).
inline double lattice_interval_probability(const LatticeDistribution& d, double lo, double hi) {
  double p = 0.0;
  for (Eigen::Index k = d.kmin; k <= d.kmax; ++k) {
    const double x = d.atom_position(k);
    if (x >= lo && x < hi) p += d.weight_at(k);
  }
  return p;
}

/// Lattice CDF F(x) = P(X <= x).
inline double lattice_cdf(const LatticeDistribution& d, double x) {
  double p = 0.0;
  for (Eigen::Index k = d.kmin; k <= d.kmax; ++k) {
    if (d.atom_position(k) <= x) p += d.weight_at(k);
  }
  return p;
}

/// Interval battery used across the diagnostics: (-inf, c] for
/// c in {-2,-1,-0.5,0,0.5,1,2} plus [-1, 1). All have Lebesgue-null boundary.
inline std::vector<std::pair<double, double>> standard_interval_battery() {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> v;
  for (double c : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) v.push_back({-inf, c});
  v.push_back({-1.0, 1.0});
  return v;
}

/// Tolerance schedule for the k-th moment gap at the largest r of a sweep.
inline double moment_tolerance(Eigen::Index k, double target_scale, double r_max,
                               double mean_photons) {
  return std::max(1e-6, 2.0 * target_scale * mean_photons * static_cast<double>(k * k) /
                            (r_max * r_max));
}

struct MomentLimitVerdict {
  Eigen::Index k;
  std::vector<double> empirical;  // per r in r_list
  double target;
  std::vector<double> gaps;
  double tolerance;
  bool pass;
};

/// Per-k check that the empirical moments approach the quadrature moment:
/// final gap below the schedule and non-increasing over the last three r's.
inline std::vector<MomentLimitVerdict> moment_limit_check(const SignalStateSpec& state,
                                                          double theta,
                                                          const std::vector<double>& r_list,
                                                          Eigen::Index kmax) {
  if (r_list.size() < 3)
    throw std::invalid_argument("moment_limit_check: need at least three r values");
  for (std::size_t i = 1; i < r_list.size(); ++i)
    if (!(r_list[i] > r_list[i - 1]))
      throw std::invalid_argument("moment_limit_check: r_list must be increasing");

  std::vector<LatticeDistribution> dists;
  for (double r : r_list) dists.push_back(homodyne_distribution(state, r, theta));
  const double mu = state.mean_photon_number();
  const double r_max = r_list.back();

  std::vector<MomentLimitVerdict> verdicts;
  for (Eigen::Index k = 1; k <= kmax; ++k) {
    MomentLimitVerdict v;
    v.k = k;
    v.target = quadrature_moment(state, theta, k);
    for (const auto& d : dists) {
      const double m = empirical_moment(d, k);
      v.empirical.push_back(m);
      v.gaps.push_back(std::abs(m - v.target));
    }
    const double scale = std::max(1.0, std::abs(v.target));
    v.tolerance = moment_tolerance(k, scale, r_max, std::max(mu, 1.0));
    const std::size_t n = v.gaps.size();
    const bool shrinking = v.gaps[n - 1] <= v.gaps[n - 2] + 1e-12 &&
                           v.gaps[n - 2] <= v.gaps[n - 3] + 1e-12;
    v.pass = shrinking && v.gaps.back() < v.tolerance;
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

/// Condition (i): effect-wise gaps on the interval battery.
inline std::vector<double> cdf_interval_diagnostic(
    const SignalStateSpec& state, double theta, double r,
    const std::vector<std::pair<double, double>>& intervals) {
  const LatticeDistribution latt = homodyne_distribution(state, r, theta);
  const ContinuousDistribution quad = quadrature_law(state, theta);
  std::vector<double> gaps;
  for (const auto& [lo, hi] : intervals) {
    // (-inf, c] entries are closed on the right; finite intervals half-open.
    double pl, pq;
    if (std::isinf(lo) && lo < 0.0) {
      pl = lattice_cdf(latt, hi);
      pq = continuous_cdf(quad, hi);
    } else {
      pl = lattice_interval_probability(latt, lo, hi);
      pq = continuous_interval_probability(quad, lo, hi);
    }
    gaps.push_back(std::abs(pl - pq));
  }
  return gaps;
}

/// Kolmogorov distance between lattice and quadrature laws, evaluated on the
/// refinement grid of all atoms shifted by half a spacing in each direction.
inline double ks_distance(const SignalStateSpec& state, double theta, double r) {
  const LatticeDistribution latt = homodyne_distribution(state, r, theta);
  const ContinuousDistribution quad = quadrature_law(state, theta);
  double sup = 0.0;
  for (Eigen::Index k = latt.kmin; k <= latt.kmax; ++k) {
    const double x = latt.atom_position(k);
    // just after the atom (full step counted) and just before it
    sup = std::max(sup, std::abs(lattice_cdf(latt, x) - continuous_cdf(quad, x)));
    const double xm = x - 0.5 * latt.spacing;
    sup = std::max(sup, std::abs(lattice_cdf(latt, xm) - continuous_cdf(quad, xm)));
  }
  return sup;
}

/// Condition (iv): gaps for the bounded-continuous battery
/// {cos, sin, exp(-x^2), 1/(1+x^2)}.
inline std::vector<double> bounded_function_diagnostic(const SignalStateSpec& state, double theta,
                                                       double r) {
  const LatticeDistribution latt = homodyne_distribution(state, r, theta);
  const ContinuousDistribution quad = quadrature_law(state, theta);
  const std::vector<std::function<double(double)>> battery = {
      [](double x) { return std::cos(x); },
      [](double x) { return std::sin(x); },
      [](double x) { return std::exp(-x * x); },
      [](double x) { return 1.0 / (1.0 + x * x); },
  };
  std::vector<double> gaps;
  for (const auto& f : battery) {
    double lat = 0.0;
    for (Eigen::Index k = latt.kmin; k <= latt.kmax; ++k)
      lat += latt.weight_at(k) * f(latt.atom_position(k));
    gaps.push_back(std::abs(lat - continuous_expectation(quad, f)));
  }
  return gaps;
}

/// Condition (ii): the interval diagnostic applied to a mixture.
inline std::vector<double> mixed_state_diagnostic(
    const SignalStateSpec& mixture, double theta, double r,
    const std::vector<std::pair<double, double>>& intervals) {
  return cdf_interval_diagnostic(mixture, theta, r, intervals);
}

/// Closed-form characteristic function of E^z statistics for the coherent
/// state |beta>, z = r e^{i theta}:
/// phi(t) = exp(-(|c|^2+|d|^2) + |c|^2 e^{-i t s} + |d|^2 e^{i t s}),
/// c = (beta - z)/sqrt2, d = (beta + z)/sqrt2, s = 1/(sqrt2 r).
inline Complex characteristic_function(Complex beta, double r, double theta, double t) {
  const Complex z = r * std::exp(Complex(0.0, theta));
  const double c2 = std::norm((beta - z) / std::sqrt(2.0));
  const double d2 = std::norm((beta + z) / std::sqrt(2.0));
  const double s = 1.0 / (std::sqrt(2.0) * r);
  return std::exp(Complex(-(c2 + d2)) + c2 * std::exp(Complex(0.0, -t * s)) +
                  d2 * std::exp(Complex(0.0, t * s)));
}

/// Empirical characteristic function sum_k p_k e^{i t x_k}.
inline Complex empirical_cf(const LatticeDistribution& dist, double t) {
  Complex acc = 0.0;
  for (Eigen::Index k = dist.kmin; k <= dist.kmax; ++k)
    acc += dist.weight_at(k) * std::exp(Complex(0.0, t * dist.atom_position(k)));
  return acc;
}

struct StateVerdict {
  std::string label;
  std::vector<MomentLimitVerdict> moment_limits;
  std::vector<double> ks_per_r;
  std::vector<std::vector<double>> interval_gaps_per_r;
  std::vector<std::vector<double>> bounded_fn_gaps_per_r;
  DeterminacyProbeResult limit_determinacy;             // on quadrature moments
  std::vector<DeterminacyProbeResult> finite_r_probes;  // per r
  bool all_pass = false;
};

struct ConvergenceReport {
  std::vector<double> r_list;
  double theta = 0.0;
  Eigen::Index kmax = 0;
  std::vector<StateVerdict> states;
  std::vector<std::vector<double>> mixed_gaps_per_r;  // uniform mixture of the states
  double lattice_mass_detector = 1.0;
  double lattice_mass_quadrature = 0.0;
  bool converges_on_lattice = false;  // the counterexample verdict
  bool converges_on_intervals = false;
};

/// The calibration harness: moment tables and limit checks per state, the
/// determinacy probes, the four convergence diagnostics, and the lattice
/// counterexample.
inline ConvergenceReport calibrate(const std::vector<std::pair<std::string, SignalStateSpec>>& states,
                                   double theta, const std::vector<double>& r_list,
                                   Eigen::Index kmax) {
  if (states.empty()) throw std::invalid_argument("calibrate: no calibration states");
  ConvergenceReport report;
  report.r_list = r_list;
  report.theta = theta;
  report.kmax = kmax;

  const auto intervals = standard_interval_battery();
  for (const auto& [label, state] : states) {
    StateVerdict v;
    v.label = label;
    v.moment_limits = moment_limit_check(state, theta, r_list, kmax);

    // determinacy probe on the identified limit (quadrature) moments
    std::vector<double> limit_moments;
    for (Eigen::Index k = 0; k <= 2 * kmax; ++k)
      limit_moments.push_back(quadrature_moment(state, theta, k));
    v.limit_determinacy = determinacy_probe(limit_moments);

    for (double r : r_list) {
      v.ks_per_r.push_back(ks_distance(state, theta, r));
      v.interval_gaps_per_r.push_back(cdf_interval_diagnostic(state, theta, r, intervals));
      v.bounded_fn_gaps_per_r.push_back(bounded_function_diagnostic(state, theta, r));

      const LatticeDistribution d = homodyne_distribution(state, r, theta);
      std::vector<double> finite_moments;
      for (Eigen::Index k = 0; k <= 2 * kmax; ++k)
        finite_moments.push_back(empirical_moment(d, k));
      v.finite_r_probes.push_back(determinacy_probe(finite_moments));
    }

    bool pass = true;
    for (const auto& m : v.moment_limits) pass = pass && m.pass;
    for (std::size_t i = 1; i < v.ks_per_r.size(); ++i)
      pass = pass && v.ks_per_r[i] < v.ks_per_r[i - 1];
    pass = pass && v.limit_determinacy.consistent_with_determinacy;
    v.all_pass = pass;
    report.states.push_back(std::move(v));
  }

  // condition (ii) on the uniform mixture of all calibration states
  if (states.size() >= 2) {
    SignalStateSpec mixture;
    const double w = 1.0 / static_cast<double>(states.size());
    for (const auto& [label, state] : states)
      for (const auto& comp : state.components)
        mixture.components.push_back({w * comp.weight, comp.state});
    for (double r : r_list)
      report.mixed_gaps_per_r.push_back(mixed_state_diagnostic(mixture, theta, r, intervals));
  }

  // lattice counterexample: E^z mass 1 on the lattice at every r, Gaussian mass 0
  report.lattice_mass_detector = lattice_mass(states.front().second, r_list.back(), theta);
  report.lattice_mass_quadrature = gaussian_lattice_mass();
  report.converges_on_lattice =
      std::abs(report.lattice_mass_detector - report.lattice_mass_quadrature) < 1e-9;
  bool intervals_ok = true;
  for (const auto& s : report.states) {
    for (std::size_t i = 1; i < s.interval_gaps_per_r.size(); ++i) {
      double prev = 0.0, cur = 0.0;
      for (double g : s.interval_gaps_per_r[i - 1]) prev = std::max(prev, g);
      for (double g : s.interval_gaps_per_r[i]) cur = std::max(cur, g);
      intervals_ok = intervals_ok && cur <= prev + 1e-12;
    }
  }
  report.converges_on_intervals = intervals_ok;
  return report;
}

}  // namespace homodyne

#endif  // HOMODYNE_CONVERGENCE_HPP
