#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qap/error.hpp"
#include "qap/model.hpp"

using namespace qap;

TEST_CASE("validate accepts a well-formed spec unchanged") {
  const OscillatorSpec s{1, 1, 0, 1, 0, 1};
  const Validation v = validate(s);
  CHECK(v.ok());
  CHECK(v.warnings.empty());
  CHECK(v.spec == s);
}

TEST_CASE("validate reports every violated invariant") {
  CHECK(validate({0, 1, 0, 1, 0, 1}).errors == std::vector{Issue::NonPositiveMass});
  CHECK(validate({1, 1, 0, 0, 0, 1}).errors == std::vector{Issue::NonPositiveHorizon});
  CHECK(validate({1, -1, 0, 1, 0, 1}).errors == std::vector{Issue::NegativeStiffness});
  CHECK(validate({1, 1, -0.1, 1, 0, 1}).errors == std::vector{Issue::NegativeHbar});

  const auto all = validate({-1, -1, -1, -1, 0, 1});
  CHECK(all.errors.size() == 4);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto v = validate({1, 1, 0, 1, nan, 1});
  REQUIRE(v.errors.size() == 1);
  CHECK(v.errors[0] == Issue::NonFinite);
  CHECK_THROWS_AS(require_valid({0, 1, 0, 1, 0, 1}), Error);
}

TEST_CASE("resonance is a warning, not an error") {
  const OscillatorSpec s{1, 1, 0, std::numbers::pi, 0, 1};
  const Validation v = validate(s);
  CHECK(v.ok());
  CHECK(v.resonant());
  CHECK_NOTHROW(require_valid(s));
  try {
    require_classical(s);
    FAIL("expected Resonance");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resonance);
  }
  // 2*pi resonates too; k = 0 never does.
  CHECK(validate({1, 1, 0, 2 * std::numbers::pi, 0, 1}).resonant());
  CHECK_FALSE(validate({1, 0, 0, std::numbers::pi, 0, 1}).resonant());
}

TEST_CASE("validate is idempotent") {
  for (const OscillatorSpec& s :
       {OscillatorSpec{1, 1, 0, 1, 0, 1}, OscillatorSpec{0, -1, -2, 0, 3, 4},
        OscillatorSpec{1, 1, 0.5, std::numbers::pi, 1, 2}}) {
    const Validation once = validate(s);
    CHECK(validate(once.spec) == once);
  }
}

TEST_CASE("omega0") {
  CHECK(omega0({1, 1, 0, 1, 0, 1}) == 1.0);
  CHECK(omega0({1, 4, 0, 1, 0, 1}) == 2.0);
  CHECK(omega0({2, 0, 0, 1, 0, 1}) == 0.0);

  // omega0(m, c^2 k) = c omega0(m, k)
  for (double c : {0.1, 0.5, 2.0, 7.3})
    for (double m : {0.3, 1.0, 5.0})
      for (double k : {0.2, 1.0, 9.0}) {
        const OscillatorSpec a{m, k, 0, 1, 0, 1}, b{m, c * c * k, 0, 1, 0, 1};
        CHECK(omega0(b) == doctest::Approx(c * omega0(a)).epsilon(1e-14));
      }
}

TEST_CASE("t0 <-> S20 map") {
  const OscillatorSpec s{1, 1, 0, 1, 0, 1};
  CHECK(t0_to_S20(0.0, s) == 0.0);
  CHECK(t0_to_S20(0.5, s) == doctest::Approx(oracle::kTanHalf).epsilon(1e-15));
  CHECK(std::abs(S20_to_t0(t0_to_S20(0.3, s), s) - 0.3) <= 1e-12);

  SUBCASE("singular forward map") {
    try {
      t0_to_S20(std::numbers::pi / 2, s);
      FAIL("expected Singularity");
    } catch (const SingularityError& e) {
      CHECK(e.factor() == "cos(w0*t0)");
    }
  }
  SUBCASE("inverse needs a nonzero frequency") {
    try {
      S20_to_t0(1.0, {1, 0, 0, 1, 0, 1});
      FAIL("expected ZeroFrequency");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ZeroFrequency);
    }
  }
  SUBCASE("round trip on the principal branch, 100-point grid") {
    for (const OscillatorSpec& spec : {s, OscillatorSpec{2, 0.5, 0, 1, 0, 1}}) {
      const double w = omega0(spec);
      const double half = std::numbers::pi / (2 * w);
      for (int i = 0; i < 100; ++i) {
        // open interval (-half, half), kept away from the poles
        const double t0 = -half * 0.98 + 1.96 * half * i / 99.0;
        CHECK(std::abs(S20_to_t0(t0_to_S20(t0, spec), spec) - t0) <= 1e-12);
      }
    }
  }
}
