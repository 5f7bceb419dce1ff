#include "walklab/gaitclock.hpp"

#include <cmath>

#include "doctest.h"
#include "walklab/error.hpp"

using namespace walklab;

TEST_SUITE("gaitclock") {

TEST_CASE("advance wraps modulo one") {
  Clock c;
  c.phase = 0.9;
  Clock c2 = clock_advance(c, 0.2 * c.period);
  CHECK(c2.phase == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(clock_advance(c, 0.0).phase == 0.9);
}

TEST_CASE("period closure after 100 equal advances") {
  Clock c;
  for (int i = 0; i < 100; ++i) c = clock_advance(c, c.period / 100.0);
  double d = std::min(c.phase, 1.0 - c.phase);
  CHECK(d < 1e-12);
}

TEST_CASE("negative dt rejected") {
  Clock c;
  CHECK_THROWS_AS(clock_advance(c, -0.1), ValidationError);
}

TEST_CASE("features sit on the unit circle") {
  Clock c;
  auto [s0, c0] = clock_features(c);
  CHECK(s0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c0 == doctest::Approx(1.0).epsilon(1e-12));
  c.phase = 0.25;
  auto [s1, c1] = clock_features(c);
  CHECK(s1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c1 == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 0; i < 1000; ++i) {
    c.phase = i / 1000.0;
    auto [s, co] = clock_features(c);
    CHECK(s * s + co * co == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stance indicator interior values") {
  Clock c;
  c.phase = 0.25;
  CHECK(stance_indicator(c, Leg::left) == 1.0);
  CHECK(stance_indicator(c, Leg::right) == 0.0);
  c.phase = 0.75;
  CHECK(stance_indicator(c, Leg::left) == 0.0);
  CHECK(stance_indicator(c, Leg::right) == 1.0);
}

TEST_CASE("left/right complementarity at duty one half") {
  Clock c;
  for (int i = 0; i < 20000; ++i) {
    c.phase = i / 20000.0;
    const double sum =
        stance_indicator(c, Leg::left) + stance_indicator(c, Leg::right);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("indicator is periodic and continuous") {
  Clock c;
  const double grid = 1e-4;
  double prev = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    c.phase = std::fmod(i * grid, 1.0);
    const double v = stance_indicator(c, Leg::left);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    if (prev >= 0.0) CHECK(std::abs(v - prev) < 2.0 * (grid / c.ramp));
    prev = v;
  }
  c.phase = 0.37;
  const double a = stance_indicator(c, Leg::left);
  c.phase = 0.37;  // same phase reached via wrap
  Clock d = clock_advance(c, 3.0 * c.period);
  CHECK(stance_indicator(d, Leg::left) == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("swing indicator complements stance") {
  Clock c;
  for (int i = 0; i < 100; ++i) {
    c.phase = i / 100.0;
    CHECK(stance_indicator(c, Leg::left) + swing_indicator(c, Leg::left) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("validate rejects bad fields") {
  Clock c;
  c.period = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = Clock{};
  c.duty = 1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = Clock{};
  c.phase = 1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  CHECK_NOTHROW(Clock{}.validate());
}

}  // TEST_SUITE
