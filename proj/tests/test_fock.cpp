#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "homodyne/fock.hpp"

using namespace homodyne;

TEST_CASE("coherent state amplitudes and truncation deficit") {
  SUBCASE("vacuum") {
    const FockVector v = coherent_state(0.0, 8);
    CHECK(v.amps[0] == Complex(1.0));
    for (Eigen::Index n = 1; n < 8; ++n) CHECK(v.amps[n] == Complex(0.0));
    CHECK(v.trunc_deficit == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("beta = 1") {
    const FockVector v = coherent_state(1.0, 32);
    CHECK(v.amps[0].real() == doctest::Approx(0.60653065971263342).epsilon(1e-12));
  }
  SUBCASE("deficit equals the Poisson tail") {
    // P(Poisson(4) >= 4), evaluated independently
    const FockVector v = coherent_state(2.0, 4);
    CHECK(v.trunc_deficit == doctest::Approx(0.566529879633291).epsilon(1e-12));
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(coherent_state(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(coherent_state(Complex(std::nan(""), 0.0), 4), std::invalid_argument);
  }
}

TEST_CASE("ladder operators") {
  SUBCASE("dim 2") {
    const LadderOps ops = ladder_ops(2);
    CHECK(ops.a(0, 1) == Complex(1.0));
    CHECK(ops.a.cwiseAbs().sum() == doctest::Approx(1.0));
  }
  SUBCASE("N = a* a up to squaring roundoff") {
    const LadderOps ops = ladder_ops(8);
    CHECK(((ops.a_dag * ops.a) - ops.number).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("commutator is the identity away from the truncation edge") {
    const LadderOps ops = ladder_ops(8);
    const Matrix comm = ops.a * ops.a_dag - ops.a_dag * ops.a;
    for (Eigen::Index n = 0; n <= 5; ++n)
      CHECK(comm(n, n).real() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("rejects dim < 2") { CHECK_THROWS_AS(ladder_ops(1), std::invalid_argument); }
}

TEST_CASE("rotated quadrature") {
  const Eigen::Index dim = 16;
  const LadderOps ops = ladder_ops(dim);
  SUBCASE("theta = 0 is Q") {
    const Matrix q = rotated_quadrature(0.0, dim);
    const Matrix ref = (ops.a + ops.a_dag) / std::sqrt(2.0);
    CHECK((q - ref).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("theta = pi/2 is P") {
    const Matrix p = rotated_quadrature(kPi / 2.0, dim);
    const Matrix ref = Complex(0.0, 1.0) * (ops.a_dag - ops.a) / std::sqrt(2.0);
    CHECK((p - ref).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("hermiticity and phase conjugation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 5; ++trial) {
      const double theta = angle(rng);
      const Matrix q = rotated_quadrature(theta, dim);
      CHECK((q - q.adjoint()).cwiseAbs().maxCoeff() < herm_tol(dim));
      Matrix phase = Matrix::Zero(dim, dim);
      for (Eigen::Index n = 0; n < dim; ++n)
        phase(n, n) = std::exp(Complex(0.0, theta * static_cast<double>(n)));
      const Matrix conj = phase * rotated_quadrature(0.0, dim) * phase.adjoint();
      CHECK((q - conj).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("coherent overlap closed form vs truncated inner products") {
  CHECK(coherent_overlap(0.0, 0.0) == Complex(1.0));
  CHECK(std::abs(coherent_overlap(1.0, 1.0) - 1.0) < 1e-15);
  CHECK(std::norm(coherent_overlap(0.0, 2.0)) ==
        doctest::Approx(0.018315638888734179).epsilon(1e-12));

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> re(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex b1(re(rng), re(rng) / 2.0), b2(re(rng), re(rng) / 2.0);
    const FockVector v1 = coherent_state(b1, 64);
    const FockVector v2 = coherent_state(b2, 64);
    const Complex inner = v1.amps.dot(v2.amps);
    CHECK(std::abs(inner - coherent_overlap(b1, b2)) < 1e-10);
  }
}

TEST_CASE("position wavefunction") {
  SUBCASE("vacuum at the origin") {
    RealVector x(1);
    x[0] = 0.0;
    const Vector psi = position_wavefunction(coherent_state(0.0, 4), 0.0, x);
    CHECK(psi[0].real() == doctest::Approx(0.75112554446494248).epsilon(1e-12));
  }
  SUBCASE("phase acts trivially on the vacuum") {
    RealVector x(5);
    x << -2.0, -1.0, 0.0, 1.0, 2.0;
    const FockVector vac = coherent_state(0.0, 4);
    const Vector a = position_wavefunction(vac, 0.0, x);
    const Vector b = position_wavefunction(vac, 1.3, x);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("coherent state gives the displaced Gaussian") {
    const Complex beta(0.7, -0.4);
    const double q = std::sqrt(2.0) * beta.real();
    RealVector x(9);
    for (int i = 0; i < 9; ++i) x[i] = q - 2.0 + 0.5 * i;
    const Vector psi = position_wavefunction(coherent_state(beta, 64), 0.0, x);
    for (int i = 0; i < 9; ++i) {
      const double expect = std::exp(-(x[i] - q) * (x[i] - q)) / std::sqrt(kPi);
      CHECK(std::norm(psi[i]) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  SUBCASE("normalization on a wide grid") {
    const FockVector s = coherent_state(Complex(1.0, 0.5), 48);
    RealVector x(4001);
    for (int i = 0; i <= 4000; ++i) x[i] = -12.0 + 24.0 * i / 4000.0;
    const Vector psi = position_wavefunction(s, 0.4, x);
    double integral = 0.0;
    for (int i = 0; i < 4000; ++i)
      integral += 0.5 * (std::norm(psi[i]) + std::norm(psi[i + 1])) * (x[i + 1] - x[i]);
    CHECK(integral == doctest::Approx(1.0 - s.trunc_deficit).epsilon(1e-9));
  }
}

TEST_CASE("auto dimension policy keeps the Poisson tail small") {
  for (double mu : {0.5, 2.0, 16.0, 64.0}) {
    const FockVector v = coherent_state(std::sqrt(mu), auto_dim(mu));
    CHECK(v.trunc_deficit < 1e-12);
  }
}
