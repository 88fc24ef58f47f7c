#ifndef HOMODYNE_QUADRATURE_HPP
#define HOMODYNE_QUADRATURE_HPP

#include "homodyne/homodyne.hpp"

namespace homodyne {

/// Law of the rotated quadrature Q_theta in a given state: either an exact
/// Gaussian (coherent input) or a density sampled on a grid.
struct ContinuousDistribution {
  enum class Kind { Gaussian, Grid } kind = Kind::Gaussian;
  // Gaussian parameters
  double mean = 0.0;
  double variance = 0.5;
  // Grid representation
  RealVector xgrid;
  RealVector density;
  double trunc_deficit = 0.0;

  double grid_integral() const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < xgrid.size(); ++i)
      acc += 0.5 * (density[i] + density[i + 1]) * (xgrid[i + 1] - xgrid[i]);
    return acc;
  }
};

/// Q_theta statistics of a coherent state: Gaussian with mean
/// sqrt2 Re(e^{-i theta} beta) and variance 1/2.
inline ContinuousDistribution coherent_quadrature_law(Complex beta, double theta) {
  if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
    throw std::invalid_argument("coherent_quadrature_law: beta must be finite");
  ContinuousDistribution d;
  d.kind = ContinuousDistribution::Kind::Gaussian;
  d.mean = std::sqrt(2.0) * (std::exp(Complex(0.0, -theta)) * beta).real();
  d.variance = 0.5;
  return d;
}

/// Default grid: 2001 points over [q-w, q+w], w = 10 + 4 sqrt(<N>).
inline RealVector default_xgrid(double center, double mean_photons) {
  const double w = 10.0 + 4.0 * std::sqrt(std::max(0.0, mean_photons));
  RealVector g(2001);
  for (Eigen::Index i = 0; i < 2001; ++i)
    g[i] = center - w + 2.0 * w * static_cast<double>(i) / 2000.0;
  return g;
}

/// Q_theta density of a general state on a grid:
/// density(x) = sum_j t_j |psi_j(x; theta)|^2 via the Hermite expansion.
inline ContinuousDistribution quadrature_density(const SignalStateSpec& state, double theta,
                                                 const RealVector& xgrid) {
  ContinuousDistribution d;
  d.kind = ContinuousDistribution::Kind::Grid;
  d.xgrid = xgrid;
  d.density = RealVector::Zero(xgrid.size());
  double deficit = 0.0;
  for (const auto& comp : state.components) {
    const Vector psi = position_wavefunction(comp.state, theta, xgrid);
    for (Eigen::Index i = 0; i < xgrid.size(); ++i)
      d.density[i] += comp.weight * std::norm(psi[i]);
    deficit += comp.weight * comp.state.trunc_deficit;
  }
  d.trunc_deficit = deficit;
  if (std::abs(d.grid_integral() - (1.0 - deficit)) > 1e-6)
    throw std::invalid_argument("quadrature_density: grid too narrow for state");
  return d;
}

/// kth moment <(Q_theta)^k> of the state, by truncated matrix powers. The
/// working dimension keeps the state support plus 2k levels clear of the
/// truncation edge, which the power of a tridiagonal matrix never reaches.
inline double quadrature_moment(const SignalStateSpec& state, double theta, Eigen::Index k) {
  if (k < 0) throw std::invalid_argument("quadrature_moment: k must be >= 0");
  if (k == 0) return 1.0;
  double result = 0.0;
  for (const auto& comp : state.components) {
    const Eigen::Index support = comp.state.dim();
    const Eigen::Index dim = support + 2 * k + 2;
    if (dim > 100000)
      throw std::invalid_argument("quadrature_moment: truncation too small for requested k");
    const Matrix q = rotated_quadrature(theta, dim);
    Vector v = Vector::Zero(dim);
    v.head(support) = comp.state.amps;
    for (Eigen::Index i = 0; i < k; ++i) v = q * v;
    Vector w = Vector::Zero(dim);
    w.head(support) = comp.state.amps;
    result += comp.weight * w.dot(v).real();
  }
  return result;
}

/// CDF of the law at x (exact erf for Gaussians, trapezoid for grids).
inline double continuous_cdf(const ContinuousDistribution& d, double x) {
  if (d.kind == ContinuousDistribution::Kind::Gaussian)
    return 0.5 * (1.0 + std::erf((x - d.mean) / std::sqrt(2.0 * d.variance)));
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < d.xgrid.size(); ++i) {
    if (d.xgrid[i + 1] <= x) {
      acc += 0.5 * (d.density[i] + d.density[i + 1]) * (d.xgrid[i + 1] - d.xgrid[i]);
    } else if (d.xgrid[i] < x) {
      const double t = (x - d.xgrid[i]) / (d.xgrid[i + 1] - d.xgrid[i]);
      const double dmid = d.density[i] + t * (d.density[i + 1] - d.density[i]);
      acc += 0.5 * (d.density[i] + dmid) * (x - d.xgrid[i]);
    }
  }
  return acc;
}

/// Probability the law assigns to the half-open interval [lo, hi).
inline double continuous_interval_probability(const ContinuousDistribution& d, double lo,
                                              double hi) {
  return continuous_cdf(d, hi) - continuous_cdf(d, lo);
}

/// Integral of a bounded function f against the law (trapezoid on a grid;
/// Gaussians are sampled on their default grid first).
template <typename F>
double continuous_expectation(const ContinuousDistribution& d, F&& f) {
  if (d.kind == ContinuousDistribution::Kind::Gaussian) {
    const RealVector g = default_xgrid(d.mean, 0.0);
    double acc = 0.0;
    const double norm = 1.0 / std::sqrt(2.0 * kPi * d.variance);
    for (Eigen::Index i = 0; i + 1 < g.size(); ++i) {
      const double pa = norm * std::exp(-0.5 * (g[i] - d.mean) * (g[i] - d.mean) / d.variance);
      const double pb =
          norm * std::exp(-0.5 * (g[i + 1] - d.mean) * (g[i + 1] - d.mean) / d.variance);
      acc += 0.5 * (f(g[i]) * pa + f(g[i + 1]) * pb) * (g[i + 1] - g[i]);
    }
    return acc;
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < d.xgrid.size(); ++i)
    acc += 0.5 * (f(d.xgrid[i]) * d.density[i] + f(d.xgrid[i + 1]) * d.density[i + 1]) *
           (d.xgrid[i + 1] - d.xgrid[i]);
  return acc;
}

/// Q_theta law of a general signal state; coherent pure states get the exact
/// Gaussian, everything else the Hermite-expansion grid density.
inline ContinuousDistribution quadrature_law(const SignalStateSpec& state, double theta) {
  const double mu = state.mean_photon_number();
  double center = 0.0;
  for (const auto& comp : state.components) {
    // first-moment estimate for grid centering
    for (Eigen::Index n = 0; n + 1 < comp.state.dim(); ++n)
      center += comp.weight * std::sqrt(2.0) *
                (std::exp(Complex(0.0, -theta)) * std::conj(comp.state.amps[n]) *
                 comp.state.amps[n + 1] * std::sqrt(static_cast<double>(n + 1)))
                    .real();
  }
  return quadrature_density(state, theta, default_xgrid(center, mu));
}

}  // namespace homodyne

#endif  // HOMODYNE_QUADRATURE_HPP
