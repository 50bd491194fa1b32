#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qap/classical.hpp"
#include "qap/dynamics.hpp"
#include "qap/error.hpp"

using namespace qap;
using namespace qap::classical;

namespace {

const OscillatorSpec kUnit{1, 1, 0, 1, 0, 1};

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::Config;
}

}  // namespace

TEST_CASE("closed-form coefficients") {
  CHECK(s2_closed(0.4, {1.0, 0.4}, kUnit) == 0.0);
  CHECK(s2_closed(0.5, {1.0, 0.0}, kUnit) == doctest::Approx(-oracle::kTanHalf).epsilon(1e-15));
  CHECK(s1_closed(0.7, {2.0, 0.3}, kUnit) == doctest::Approx(oracle::kS1Closed).epsilon(1e-15));

  try {
    s2_closed(0.2 + std::numbers::pi / 2, {1.0, 0.2}, kUnit);
    FAIL("expected Singularity");
  } catch (const SingularityError& e) {
    CHECK(e.factor() == "cos(w0*(t-t0))");
  }
  CHECK(kind_of([] { s1_closed(0.1, {1, 0}, {1, 0, 0, 1, 0, 1}); }) == ErrorKind::ZeroStiffness);
}

TEST_CASE("closed-form coefficients solve the classical flow") {
  const double h = 1e-6;
  for (const OscillatorSpec& spec : {kUnit, OscillatorSpec{2.0, 0.5, 0, 1, 0, 1}}) {
    for (double t0 : {-0.2, 0.3, 0.6}) {
      const ClassicalParams p{1.3, t0};
      for (int i = 1; i < 20; ++i) {
        const double t = i / 20.0;
        const double S1 = s1_closed(t, p, spec), S2 = s2_closed(t, p, spec);
        const double dS1 = (s1_closed(t + h, p, spec) - s1_closed(t - h, p, spec)) / (2 * h);
        const double dS2 = (s2_closed(t + h, p, spec) - s2_closed(t - h, p, spec)) / (2 * h);
        const StateDerivative d = rhs({t, S1, S2, 0, 0, 0, 0, 0}, spec);
        CHECK(std::abs(dS1 - d.S1) <= 1e-9);
        CHECK(std::abs(dS2 - d.S2) <= 1e-9);
      }
    }
  }
}

TEST_CASE("initial S2 of the closed form equals the t0 map") {
  for (const OscillatorSpec& spec : {kUnit, OscillatorSpec{3.0, 2.0, 0, 1, 0, 1}})
    for (double t0 : {-0.7, -0.1, 0.0, 0.25, 0.8})
      CHECK(std::abs(s2_closed(0.0, {0.0, t0}, spec) - t0_to_S20(t0, spec)) <= 1e-12);
}

TEST_CASE("lambda_classical") {
  CHECK(lambda_classical({0.0, 0.3}, {1, 1, 0, 1, 0, 0}) == 0.0);
  CHECK(lambda_classical({1.188395, 0.5}, kUnit) ==
        doctest::Approx(oracle::kLambdaEq20Rounded).epsilon(1e-14));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const OscillatorSpec spec{1.0 + 0.5 * (u(rng) + 1), 0.5 + 0.5 * (u(rng) + 1), 0, 1.0,
                              u(rng), u(rng)};
    const double S10 = 2 * u(rng), t0 = 0.4 * u(rng);
    CHECK(lambda_classical({S10, t0}, spec) ==
          doctest::Approx(oracle::eigenvalue_closed(S10, t0, spec.m, spec.k, spec.T, spec.x0,
                                                    spec.xT))
              .epsilon(1e-12));
  }
  CHECK(kind_of([] { lambda_classical({1, 0}, {1, 0, 0, 1, 0, 1}); }) == ErrorKind::ZeroStiffness);
}

TEST_CASE("s10_star") {
  CHECK(s10_star(0.3, {1, 1, 0, 1, 0, 0}) == 0.0);
  CHECK(s10_star(0.5, kUnit) == doctest::Approx(oracle::kS10Star).epsilon(1e-15));
  CHECK(kind_of([] { s10_star(0.5, {1, 1, 0, std::numbers::pi, 0, 1}); }) ==
        ErrorKind::Resonance);

  SUBCASE("stationary in S10") {
    for (const OscillatorSpec& spec : {kUnit, OscillatorSpec{1.5, 0.7, 0, 1.2, 0.3, -0.8}}) {
      for (double t0 = 0.1; t0 < 0.95; t0 += 0.1) {
        const double s = s10_star(t0, spec), h = 1e-5;
        const double g =
            (lambda_classical({s + h, t0}, spec) - lambda_classical({s - h, t0}, spec)) / (2 * h);
        CHECK(std::abs(g) <= 1e-8);
      }
    }
  }
}

TEST_CASE("lambda_star") {
  CHECK(lambda_star({1, 1, 0, 1, 0, 0}) == 0.0);
  CHECK(lambda_star(kUnit) == doctest::Approx(oracle::kLambdaStar).epsilon(1e-15));
  CHECK(lambda_star({2.0, 3.0, 0, 0.7, -0.4, 1.1}) ==
        doctest::Approx(oracle::oscillator_action(2.0, 3.0, 0.7, -0.4, 1.1)).epsilon(1e-14));

  SUBCASE("small stiffness approaches the free particle") {
    const double free = oracle::free_particle_action(1, 1, 0, 1);
    CHECK(free == 0.5);
    CHECK(std::abs(lambda_star({1, 1e-12, 0, 1, 0, 1}) - free) <= 1e-5);
  }
  SUBCASE("boundary symmetry") {
    for (auto [x0, xT] : {std::pair{0.0, 1.0}, {0.3, -1.2}, {2.0, 0.5}}) {
      const OscillatorSpec a{1.3, 0.8, 0, 1.1, x0, xT}, b{1.3, 0.8, 0, 1.1, xT, x0};
      CHECK(lambda_star(a) == doctest::Approx(lambda_star(b)).epsilon(1e-15));
    }
  }
  CHECK(kind_of([] { lambda_star({1, 1, 0, std::numbers::pi, 0, 1}); }) == ErrorKind::Resonance);
  CHECK(kind_of([] { lambda_star({1, 0, 0, 1, 0, 1}); }) == ErrorKind::ZeroStiffness);
}

TEST_CASE("degeneracy: the stationary value does not depend on t0") {
  for (const OscillatorSpec& spec : {kUnit, OscillatorSpec{1.5, 0.7, 0, 1.2, 0.3, -0.8}}) {
    const double ref = lambda_star(spec);
    for (double t0 = -0.3; t0 < 0.95; t0 += 0.05)
      CHECK(std::abs(lambda_classical({s10_star(t0, spec), t0}, spec) - ref) <= 1e-10);
  }
}

TEST_CASE("xtilde diagnostic") {
  for (double t : {0.1, 0.75, 0.9}) CHECK(xtilde(t, 0.5, {1, 1, 0, 1, 0, 0}) == 0.0);
  CHECK(xtilde(0.75, 0.5, kUnit) == doctest::Approx(oracle::kXtilde).epsilon(1e-14));
  CHECK(kind_of([] { xtilde(0.5, 0.5, kUnit); }) == ErrorKind::Singularity);
}

TEST_CASE("phase functional diagnostic") {
  const double t0 = -0.5;  // keeps sin(w0 (t - t0)) away from zero on [0, 1]
  std::vector<double> t, x;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i / 100.0);
    x.push_back(xtilde(t.back(), t0, kUnit));
  }
  CHECK(phase_functional(t, x, t0, kUnit) == 0.0);
  x.assign(x.size(), 0.0);
  CHECK(phase_functional(t, x, t0, kUnit) < 0.0);
  x.pop_back();
  CHECK(kind_of([&] { phase_functional(t, x, t0, kUnit); }) == ErrorKind::LengthMismatch);
}
