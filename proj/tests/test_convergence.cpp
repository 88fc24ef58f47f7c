#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homodyne/convergence.hpp"

using namespace homodyne;

namespace {

SignalStateSpec vacuum() { return SignalStateSpec::pure(fock_state(0, 1)); }
SignalStateSpec coherent_one() {
  return SignalStateSpec::pure(coherent_state(1.0, auto_dim(1.0)));
}
const std::vector<double> kRList{2.0, 4.0, 8.0};

}  // namespace

TEST_CASE("moment limits") {
  SUBCASE("coherent beta = 1: first moment gaps are numerically zero") {
    const auto verdicts = moment_limit_check(coherent_one(), 0.0, kRList, 2);
    for (double g : verdicts[0].gaps) CHECK(g < 1e-8);
    CHECK(verdicts[0].pass);
  }
  SUBCASE("coherent beta = 1: second moment gaps are <N>/(2 r^2)") {
    const auto verdicts = moment_limit_check(coherent_one(), 0.0, kRList, 2);
    const std::vector<double> expect{0.125, 0.03125, 0.0078125};
    for (std::size_t i = 0; i < expect.size(); ++i)
      CHECK(verdicts[1].gaps[i] == doctest::Approx(expect[i]).epsilon(1e-6));
    CHECK(verdicts[1].pass);
  }
  SUBCASE("vacuum second moment has no gap at all") {
    const auto verdicts = moment_limit_check(vacuum(), 0.0, kRList, 2);
    for (double g : verdicts[1].gaps) CHECK(g < 1e-9);
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(moment_limit_check(vacuum(), 0.0, {2.0, 4.0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(moment_limit_check(vacuum(), 0.0, {4.0, 2.0, 1.0}, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("interval diagnostic") {
  SUBCASE("vacuum (-inf, 0] gap at r = 2 is half the central atom") {
    const std::vector<std::pair<double, double>> iv = {
        {-std::numeric_limits<double>::infinity(), 0.0}};
    const auto gaps = cdf_interval_diagnostic(vacuum(), 0.0, 2.0, iv);
    // lattice CDF at 0 counts the atom fully, the Gaussian CDF is 1/2:
    // gap = e^{-4} I_0(4) / 2
    CHECK(gaps[0] == doctest::Approx(0.10350096061199335).epsilon(1e-8));
  }
  SUBCASE("battery gaps shrink with r") {
    const auto iv = standard_interval_battery();
    double prev = 1.0;
    for (double r : kRList) {
      const auto gaps = cdf_interval_diagnostic(coherent_one(), 0.0, r, iv);
      double cur = 0.0;
      for (double g : gaps) cur = std::max(cur, g);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  SUBCASE("the whole line carries all retained mass") {
    const LatticeDistribution d = homodyne_distribution(vacuum(), 2.0, 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(std::abs(lattice_interval_probability(d, -inf, inf) - 1.0) <= d.deficit + 1e-12);
  }
}

TEST_CASE("Kolmogorov distance") {
  for (const SignalStateSpec& s : {vacuum(), coherent_one()}) {
    double prev = 1.0;
    for (double r : kRList) {
      const double ks = ks_distance(s, 0.0, r);
      CHECK(ks < prev);
      prev = ks;
    }
    CHECK(prev <= 0.1);
  }
}

TEST_CASE("bounded function battery") {
  SUBCASE("cos gap at r = 2 on the vacuum, frozen values") {
    const auto gaps = bounded_function_diagnostic(vacuum(), 0.0, 2.0);
    // lattice: exp(-4 + 4 cos(1/(2 sqrt2))); Gaussian: exp(-1/4)
    CHECK(gaps[0] ==
          doctest::Approx(0.7808230995618133 - 0.7788007830714049).epsilon(1e-6));
  }
  SUBCASE("gaps shrink with r") {
    double prev = 1.0;
    for (double r : kRList) {
      const auto gaps = bounded_function_diagnostic(coherent_one(), 0.0, r);
      double cur = 0.0;
      for (double g : gaps) cur = std::max(cur, g);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("mixture diagnostic shrinks with r") {
  SignalStateSpec mix;
  mix.components.push_back({0.5, fock_state(0, 1)});
  mix.components.push_back({0.5, coherent_state(1.0, auto_dim(1.0))});
  const auto iv = standard_interval_battery();
  double prev = 1.0;
  for (double r : kRList) {
    const auto gaps = mixed_state_diagnostic(mix, 0.0, r, iv);
    double cur = 0.0;
    for (double g : gaps) cur = std::max(cur, g);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("characteristic functions") {
  SUBCASE("t = 0 gives 1") {
    CHECK(std::abs(characteristic_function(Complex(1.0, 0.5), 2.0, 0.3, 0.0) - 1.0) < 1e-15);
  }
  SUBCASE("vacuum closed form at r = 2, t = 1") {
    // exp(-4 + 4 cos(1/(2 sqrt2)))
    const Complex phi = characteristic_function(0.0, 2.0, 0.0, 1.0);
    CHECK(phi.real() == doctest::Approx(0.7808230995618133).epsilon(1e-12));
    CHECK(std::abs(phi.imag()) < 1e-15);
  }
  SUBCASE("empirical CF matches the closed form across t") {
    for (Complex beta : {Complex(0.0), Complex(1.0), Complex(1.0, 0.5)}) {
      for (double r : {2.0, 3.0}) {
        const SignalStateSpec s =
            SignalStateSpec::pure(coherent_state(beta, auto_dim(std::norm(beta))));
        const LatticeDistribution d = homodyne_distribution(s, r, 0.0);
        double sup = 0.0;
        for (int i = 0; i <= 200; ++i) {
          const double t = -5.0 + 0.05 * i;
          sup = std::max(sup, std::abs(empirical_cf(d, t) -
                                       characteristic_function(beta, r, 0.0, t)));
        }
        CHECK(sup < 1e-7);
      }
    }
  }
  SUBCASE("central difference of the CF recovers the first moment") {
    const LatticeDistribution d = homodyne_distribution(coherent_one(), 2.0, 0.0);
    const double h = 1e-5;
    const Complex deriv = (empirical_cf(d, h) - empirical_cf(d, -h)) / (2.0 * h);
    CHECK(deriv.imag() == doctest::Approx(lattice_mean(d)).epsilon(1e-6));
    CHECK(std::abs(deriv.real()) < 1e-6);
  }
}

TEST_CASE("calibration harness") {
  SUBCASE("coherent and vacuum states all pass") {
    std::vector<std::pair<std::string, SignalStateSpec>> states = {
        {"vacuum", vacuum()}, {"coherent_1", coherent_one()}};
    const ConvergenceReport rep = calibrate(states, 0.0, kRList, 4);
    CHECK(rep.states.size() == 2);
    for (const auto& s : rep.states) CHECK(s.all_pass);
    CHECK_FALSE(rep.converges_on_lattice);
    CHECK(rep.converges_on_intervals);
    CHECK(rep.lattice_mass_detector == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.lattice_mass_quadrature == 0.0);
    CHECK(rep.mixed_gaps_per_r.size() == kRList.size());
    for (const auto& s : rep.states) {
      CHECK(s.limit_determinacy.consistent_with_determinacy);
      for (const auto& p : s.finite_r_probes) CHECK(p.consistent_with_determinacy);
    }
  }
  SUBCASE("a superposition state passes too") {
    FockVector sup;
    sup.amps.resize(2);
    sup.amps << Complex(std::sqrt(0.5)), Complex(0.0, std::sqrt(0.5));
    std::vector<std::pair<std::string, SignalStateSpec>> states = {
        {"cat01", SignalStateSpec::pure(sup)}};
    const ConvergenceReport rep = calibrate(states, 0.0, kRList, 4);
    CHECK(rep.states.front().all_pass);
  }
  SUBCASE("empty state list is a config error") {
    CHECK_THROWS_AS(calibrate({}, 0.0, kRList, 4), std::invalid_argument);
  }
}
