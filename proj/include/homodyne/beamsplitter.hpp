#ifndef HOMODYNE_BEAMSPLITTER_HPP
#define HOMODYNE_BEAMSPLITTER_HPP

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "homodyne/fock.hpp"

namespace homodyne {

/// Thrown when a requested two-mode dimension exceeds the configured cap.
struct TruncationBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-mode dimension cap for two-mode arrays. Overridable via HD_MAX_DIM.
inline Eigen::Index max_mode_dim() {
  if (const char* env = std::getenv("HD_MAX_DIM")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<Eigen::Index>(v);
  }
  return 1024;
}

/// Two-mode state; amps(n1, n2) is the amplitude of |n1> (signal) x |n2> (aux).
struct TwoModeVector {
  Matrix amps;  // dim1 x dim2
  double trunc_deficit = 0.0;

  Eigen::Index dim1() const { return amps.rows(); }
  Eigen::Index dim2() const { return amps.cols(); }
  double norm2() const { return amps.squaredNorm(); }
};

inline TwoModeVector product_state(const FockVector& first, const FockVector& second) {
  TwoModeVector v;
  v.amps = first.amps * second.amps.transpose();
  v.trunc_deficit = std::max(0.0, 1.0 - v.amps.squaredNorm());
  return v;
}

namespace detail {

/// log(n!) table, built by direct accumulation.
inline const std::vector<double>& log_factorials(std::size_t upto) {
  static std::vector<double> table{0.0, 0.0};
  while (table.size() <= upto)
    table.push_back(table.back() + std::log(static_cast<double>(table.size())));
  return table;
}

}  // namespace detail

/// 50-50 beam splitter U with U|beta,z> = |(beta-z)/sqrt2, (beta+z)/sqrt2>.
/// On the Fock basis, U|n,m> = ((a*+b*)/sqrt2)^n ((b*-a*)/sqrt2)^m |0,0> / sqrt(n! m!),
/// evaluated term by term via the binomial expansion. Each total-photon-number
/// sector maps to itself, so output dims dim1+dim2-1 lose no amplitude.
inline TwoModeVector apply_beamsplitter(const TwoModeVector& input) {
  const Eigen::Index d1 = input.dim1(), d2 = input.dim2();
  const Eigen::Index dout = d1 + d2 - 1;
  if (dout > max_mode_dim())
    throw TruncationBudgetError("apply_beamsplitter: output dimension exceeds HD_MAX_DIM");

  const auto& lf = detail::log_factorials(static_cast<std::size_t>(dout));
  const double ln2 = std::log(2.0);

  TwoModeVector out;
  out.amps = Matrix::Zero(dout, dout);
  for (Eigen::Index n = 0; n < d1; ++n) {
    for (Eigen::Index m = 0; m < d2; ++m) {
      const Complex c = input.amps(n, m);
      if (c == Complex(0.0)) continue;
      for (Eigen::Index j = 0; j <= n; ++j) {
        for (Eigen::Index l = 0; l <= m; ++l) {
          const Eigen::Index p = j + m - l;      // output signal photons
          const Eigen::Index q = n - j + l;      // output aux photons
          const double lw = 0.5 * (lf[p] + lf[q] + lf[n] + lf[m]) - lf[j] - lf[n - j] -
                            lf[l] - lf[m - l] - 0.5 * static_cast<double>(n + m) * ln2;
          const double sign = ((m - l) % 2 == 0) ? 1.0 : -1.0;
          out.amps(p, q) += c * (sign * std::exp(lw));
        }
      }
    }
  }
  out.trunc_deficit = std::max(0.0, 1.0 - out.amps.squaredNorm());
  return out;
}

/// Inverse beam splitter (U^{-1}|n,m> expansion; signs trade places).
inline TwoModeVector apply_beamsplitter_inverse(const TwoModeVector& input) {
  // U^{-1} = exp(+pi/4 (a*b - a b*)): swap the roles of the two binomial signs
  // by conjugating with the mode swap n <-> m.
  TwoModeVector swapped;
  swapped.amps = input.amps.transpose();
  TwoModeVector res = apply_beamsplitter(swapped);
  TwoModeVector out;
  out.amps = res.amps.transpose();
  out.trunc_deficit = res.trunc_deficit;
  return out;
}

/// U(signal x |z>) via the displaced-Fock expansion: with signal = sum c_n (a*)^n/sqrt(n!)|0>,
/// U(signal x |z>) = sum_n c_n ((a*+b*)/sqrt2)^n / sqrt(n!) |alpha> x |gamma>,
/// alpha = -z/sqrt2, gamma = z/sqrt2, using
/// <m|(a*)^j|alpha> = sqrt(m!/(m-j)!) <m-j|alpha>.
inline TwoModeVector signal_with_oscillator(const FockVector& signal, Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument("signal_with_oscillator: z must be finite");
  const Eigen::Index ds = signal.dim();

  // Output dims per the auto policy at mean photon number (|b_max| + |z|)^2 / 2,
  // with |b_max| the amplitude scale of the highest occupied signal level.
  Eigen::Index top = 0;
  for (Eigen::Index n = 0; n < ds; ++n)
    if (std::norm(signal.amps[n]) > 1e-300) top = n;
  const double bmax = std::sqrt(static_cast<double>(top));
  const double mu_mode = 0.5 * (bmax + std::abs(z)) * (bmax + std::abs(z));
  const Eigen::Index dout = std::max<Eigen::Index>(auto_dim(mu_mode), top + ds + 2);
  if (dout > max_mode_dim())
    throw TruncationBudgetError("signal_with_oscillator: output dimension exceeds HD_MAX_DIM");

  const Complex alpha = -z / std::sqrt(2.0);
  const Complex gamma = z / std::sqrt(2.0);
  const FockVector ca = coherent_state(alpha, dout);
  const FockVector cg = coherent_state(gamma, dout);
  const auto& lf = detail::log_factorials(static_cast<std::size_t>(dout + ds));
  const double ln2 = std::log(2.0);

  TwoModeVector out;
  out.amps = Matrix::Zero(dout, dout);
  for (Eigen::Index n = 0; n <= top; ++n) {
    const Complex cn = signal.amps[n];
    if (cn == Complex(0.0)) continue;
    for (Eigen::Index j = 0; j <= n; ++j) {
      const Eigen::Index k = n - j;  // creation count on the aux mode
      // weight of (a*)^j (b*)^k: 2^{-n/2} sqrt(n!)/ (j! k!)  [C(n,j)/sqrt(n!)]
      const double lw0 = -0.5 * static_cast<double>(n) * ln2 + 0.5 * lf[n] - lf[j] - lf[k];
      for (Eigen::Index m1 = j; m1 < dout; ++m1) {
        const Complex aj = ca.amps[m1 - j];
        if (aj == Complex(0.0)) continue;
        const double lwa = lw0 + 0.5 * (lf[m1] - lf[m1 - j]);
        for (Eigen::Index m2 = k; m2 < dout; ++m2) {
          const Complex gk = cg.amps[m2 - k];
          if (gk == Complex(0.0)) continue;
          const double lwb = lwa + 0.5 * (lf[m2] - lf[m2 - k]);
          out.amps(m1, m2) += cn * aj * gk * std::exp(lwb);
        }
      }
    }
  }
  out.trunc_deficit = std::max(0.0, 1.0 - out.amps.squaredNorm());
  return out;
}

/// Probability mass on the photon-number-difference sector n2 - n1 = k
/// (auxiliary minus signal).
inline double difference_projection_mass(const TwoModeVector& v, Eigen::Index k) {
  double mass = 0.0;
  for (Eigen::Index n1 = 0; n1 < v.dim1(); ++n1) {
    const Eigen::Index n2 = n1 + k;
    if (n2 >= 0 && n2 < v.dim2()) mass += std::norm(v.amps(n1, n2));
  }
  return mass;
}

/// Truncation of the dilation generator A = (a x b* + a* x b) / sqrt(2),
/// returned as a dense matrix on the flattened (n1 * dim2 + n2) index.
inline Matrix dilation_generator(Eigen::Index dim1, Eigen::Index dim2) {
  if (dim1 < 2 || dim2 < 2) throw std::invalid_argument("dilation_generator: dims must be >= 2");
  const Eigen::Index d = dim1 * dim2;
  Matrix a_mat = Matrix::Zero(d, d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index n1 = 1; n1 < dim1; ++n1) {
    for (Eigen::Index n2 = 0; n2 + 1 < dim2; ++n2) {
      // a x b* : |n1-1, n2+1><n1, n2| * sqrt(n1 (n2+1))
      const double v = inv_sqrt2 * std::sqrt(static_cast<double>(n1) * static_cast<double>(n2 + 1));
      const Eigen::Index row = (n1 - 1) * dim2 + (n2 + 1);
      const Eigen::Index col = n1 * dim2 + n2;
      a_mat(row, col) += v;
      a_mat(col, row) += v;
    }
  }
  return a_mat;
}

}  // namespace homodyne

#endif  // HOMODYNE_BEAMSPLITTER_HPP
