#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "nmtel/decoherence.hpp"

using namespace nmtel;
using C = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {
// textbook form of the amplitude, valid while cosh stays in range; used to pin
// the production evaluator (which must also survive large lambda*t) and to
// show the square-root branch does not matter
C reference_amplitude(const ReservoirParams<double>& p, double t, int branch_sign) {
  const C a(p.lambda, -p.delta);
  const C d = double(branch_sign) * std::sqrt(a * a - 2.0 * p.gamma0 * p.lambda);
  return std::exp(-a * t / 2.0) * (std::cosh(d * t / 2.0) + a / d * std::sinh(d * t / 2.0));
}
}  // namespace

TEST_SUITE("decoherence") {

TEST_CASE("parameter validation") {
  CHECK_THROWS_WITH_AS(g_analytic(ReservoirParams<double>{0, 0, 1}, 1.0),
                       doctest::Contains("lambda"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(g_analytic(ReservoirParams<double>{1, 0, 0}, 1.0),
                       doctest::Contains("gamma0"), std::invalid_argument);
  CHECK_THROWS_AS(g_analytic(ReservoirParams<double>{1, 0, 1}, -0.5), std::invalid_argument);
}

TEST_CASE("correlation kernel values") {
  CHECK(std::abs(correlation_kernel(ReservoirParams<double>{2, 0, 1}, 0.0) - C(1)) < 1e-15);
  CHECK(std::abs(correlation_kernel(ReservoirParams<double>{1, 1, 1}, 0.0) - C(0.5)) < 1e-15);
  CHECK(std::abs(correlation_kernel(ReservoirParams<double>{2, 0, 1}, 40.0)) < 1e-30);
  // detuning rotates the phase, width sets the decay
  const C v = correlation_kernel(ReservoirParams<double>{1, 2, 1}, 0.7);
  CHECK(std::abs(v - 0.5 * std::exp(C(-0.7, 1.4))) < 1e-15);
}

TEST_CASE("amplitude starts at one and matches the textbook form") {
  for (const auto& [lam, del] : std::vector<std::pair<double, double>>{
           {5, 0}, {5, 5}, {0.01, 0}, {0.01, 2}, {1000, 0}}) {
    const ReservoirParams<double> p{lam, del, 1};
    CHECK(std::abs(g_analytic(p, 0.0) - C(1)) == 0);
  }
  const ReservoirParams<double> p{5, 3, 1};
  for (int i = 1; i <= 40; ++i) {
    const double t = 0.5 * i;  // crosses the small-|dt| / split-exponential border
    const C g = g_analytic(p, t);
    CHECK(std::abs(g - reference_amplitude(p, t, +1)) < 1e-13);
    CHECK(std::abs(g - reference_amplitude(p, t, -1)) < 1e-13);
  }
}

TEST_CASE("amplitude stays inside the unit disc and is real at zero detuning") {
  for (const auto& [lam, del] : std::vector<std::pair<double, double>>{
           {5, 0}, {5, 5}, {0.01, 0}, {0.01, 1}, {0.01, 2}, {1000, 0}, {100, 30}}) {
    const ReservoirParams<double> p{lam, del, 1};
    const double t_max = lam > 50 ? 5.0 : 80.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = t_max * i / 2000;
      const C g = g_analytic(p, t);
      CHECK(std::abs(g) <= 1 + 1e-9);
      if (del == 0) CHECK(std::abs(std::imag(g)) < 1e-12);
    }
  }
}

TEST_CASE("flat-spectrum limit approaches the reference decay") {
  const ReservoirParams<double> wide{1000, 0, 1};
  CHECK(std::abs(std::abs(g_analytic(wide, 2.0)) - std::exp(-1.0)) < 1e-3);
  CHECK(g_markovian(wide, 0.0) == 1.0);
  CHECK(g_markovian(wide, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  const ReservoirParams<double> p{100, 0, 1};
  double worst = 0;
  for (int i = 0; i <= 500; ++i) {
    const double t = 5.0 * i / 500;
    worst = std::max(worst, std::abs(std::abs(g_analytic(p, t)) - g_markovian(p, t)));
  }
  CHECK(worst < 2e-2);
}

TEST_CASE("oscillatory-regime zeros: frozen locations for lambda = 0.01") {
  const ReservoirParams<double> p{0.01, 0, 1};
  const auto zeros = g_zero_crossings(p, 80.0, 4);
  REQUIRE(zeros.size() >= 2);
  // roots of tan(|d|t/2) = -|d|/lambda, bisected independently when frozen
  CHECK(zeros[0] == doctest::Approx(23.27350658328533).epsilon(1e-9));
  CHECK(zeros[1] == doctest::Approx(67.81382630172669).epsilon(1e-9));
}

TEST_CASE("zero crossing exists within one oscillation period for narrow spectra") {
  for (const double lam : {0.01, 0.5, 1.0, 1.9}) {
    const ReservoirParams<double> p{lam, 0, 1};
    const double abs_d = std::abs(detail::char_root(p));
    CHECK_FALSE(g_zero_crossings(p, 4 * pi / abs_d, 1).empty());
  }
}

TEST_CASE("degenerate-point continuity of the closed form") {
  // sqrt argument ~ 1e-16 away from zero: full evaluator vs series limit
  const ReservoirParams<double> near{2, 2.5e-17, 1};
  const C a(near.lambda, -near.delta);
  double worst = 0;
  for (int i = 0; i <= 300; ++i) {
    const double t = 30.0 * i / 300;
    const C limit = std::exp(-a * t / 2.0) * (1.0 + a * t / 2.0);
    worst = std::max(worst, std::abs(g_analytic(near, t) - limit));
  }
  CHECK(worst < 1e-6);

  // and the exactly-degenerate parameter point agrees with a nearby regular one
  const ReservoirParams<double> at{2, 0, 1};
  const ReservoirParams<double> off{2 + 1e-10, 0, 1};
  for (int i = 0; i <= 100; ++i) {
    const double t = 20.0 * i / 100;
    CHECK(std::abs(g_analytic(at, t) - g_analytic(off, t)) < 1e-6);
  }
}

TEST_CASE("integrator reproduces the closed form") {
  const ReservoirParams<double> p{5, 0, 1};
  const SolverConfig<double> cfg{1e-3, 1e-10, 10};
  const auto samples = g_numeric(p, cfg, 501);
  REQUIRE(samples.size() == 501);
  CHECK(samples.front().t == 0.0);
  CHECK(samples.front().g == C(1));
  double worst = 0;
  for (const auto& [t, g] : samples) worst = std::max(worst, std::abs(g - g_analytic(p, t)));
  CHECK(worst < 1e-8);
}

TEST_CASE("integrator hits the requested uniform grid exactly") {
  const ReservoirParams<double> p{0.01, 1, 1};
  const SolverConfig<double> cfg{1e-3, 1e-8, 30};
  const auto samples = g_numeric(p, cfg, 301);
  REQUIRE(samples.size() == 301);
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK(samples[i].t == doctest::Approx(30.0 * double(i) / 300).epsilon(1e-15));
}

TEST_CASE("integrator error tracks the tolerance") {
  const ReservoirParams<double> p{5, 0, 1};
  std::vector<double> errs;
  for (const double tol : {1e-5, 1e-7, 1e-9}) {
    const SolverConfig<double> cfg{1e-3, tol, 30};
    double worst = 0;
    for (const auto& [t, g] : g_numeric(p, cfg, 601))
      worst = std::max(worst, std::abs(g - g_analytic(p, t)));
    errs.push_back(worst);
    CHECK(worst < 10 * tol);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
}

TEST_CASE("integrator zero crossing matches the closed form to 1e-4") {
  const ReservoirParams<double> p{0.01, 0, 1};
  const SolverConfig<double> cfg{1e-3, 1e-10, 30};
  const auto samples = g_numeric(p, cfg, 1201);
  double crossing = -1;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double a = std::real(samples[i - 1].g), b = std::real(samples[i].g);
    if (a > 0 && b <= 0) {
      crossing = samples[i - 1].t + (samples[i].t - samples[i - 1].t) * a / (a - b);
      break;
    }
  }
  REQUIRE(crossing > 0);
  CHECK(std::abs(crossing - 23.27350658328533) < 1e-4);
}

TEST_CASE("unreachable tolerance reports the failure time") {
  const ReservoirParams<double> p{5, 0, 1};
  const SolverConfig<double> cfg{1e-3, 1e-300, 10};
  CHECK_THROWS_AS(g_numeric(p, cfg, 11), SolverFailure);
  try {
    g_numeric(p, cfg, 11);
  } catch (const SolverFailure& e) {
    CHECK(e.t_fail >= 0.0);
    CHECK(e.t_fail < 10.0);
    CHECK(std::string(e.what()).find("underflow") != std::string::npos);
  }
}

TEST_CASE("solver config validation") {
  CHECK_THROWS_WITH_AS(g_numeric(ReservoirParams<double>{5, 0, 1},
                                 SolverConfig<double>{0, 1e-10, 10}),
                       doctest::Contains("step"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(g_numeric(ReservoirParams<double>{5, 0, 1},
                                 SolverConfig<double>{1e-3, -1, 10}),
                       doctest::Contains("tol"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(g_numeric(ReservoirParams<double>{5, 0, 1},
                                 SolverConfig<double>{1e-3, 1e-10, 0}),
                       doctest::Contains("t_max"), std::invalid_argument);
}

}  // TEST_SUITE
