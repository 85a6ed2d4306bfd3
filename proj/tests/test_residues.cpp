#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ksign/error.hpp"
#include "ksign/residues.hpp"

using namespace ksign;

TEST_CASE("line integral: hand values") {
  const auto a = residue_lemma6_check(0.5, 3);
  CHECK(a.closed_form == 0.0);
  CHECK(std::fabs(a.numeric) < 1e-6);

  const auto b = residue_lemma6_check(std::numbers::e, 1);
  CHECK(b.closed_form == doctest::Approx(1.0));
  CHECK(b.error() < 1e-6);

  const auto c = residue_lemma6_check(std::exp(2.0), 2);
  CHECK(c.closed_form == doctest::Approx(4.0));
  CHECK(std::fabs(c.numeric - 4.0) < 1e-6);
}

TEST_CASE("line integral: grid") {
  for (double x : {0.3, 0.8, 1.5, std::numbers::e, 10.0}) {
    for (int k = 0; k <= 4; ++k) {
      const auto r = residue_lemma6_check(x, k);
      INFO("x = " << x << ", k = " << k << ": " << r.numeric << " vs " << r.closed_form);
      CHECK(r.error() < 1e-6);
    }
  }
}

TEST_CASE("line integral: errors") {
  CHECK_THROWS_AS(residue_lemma6_check(1.0, 2), Error);
  try {
    residue_lemma6_check(1.0 + 1e-9, 0);
    FAIL("expected SlowDecay");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::slow_decay);
  }
}

TEST_CASE("double contour: hand values") {
  const auto a = residue_lemma7_check(5.0, 0, 1);
  CHECK(a.closed_form == doctest::Approx(std::log(5.0)));
  CHECK(a.error() < 1e-6);
  const auto b = residue_lemma7_check(std::numbers::e, 1, 0);
  CHECK(b.closed_form == doctest::Approx(1.0));
  CHECK(b.error() < 1e-6);
  const auto c = residue_lemma7_check(std::numbers::e, 2, 3);
  CHECK(c.error() < 1e-6);
  CHECK_THROWS_AS(residue_lemma7_check(0.5, 1, 1), Error);
}

TEST_CASE("double contour: grid") {
  for (double x : {1.5, std::numbers::e, 10.0}) {
    for (int k = 0; k <= 4; ++k) {
      for (int l = 0; l <= 3; ++l) {
        const auto r = residue_lemma7_check(x, k, l);
        INFO("x = " << x << ", k = " << k << ", l = " << l << ": " << r.numeric << " vs " << r.closed_form);
        CHECK(r.error() < 1e-6);
      }
    }
  }
}

TEST_CASE("double contour: fixed radii 0.1 / 0.2") {
  // Holomorphy makes any radii valid in exact arithmetic; in double precision
  // the fixed small circles only keep digits while (log x)^{2k+l} is not tiny
  // against the integrand's size on the circle.
  ContourOptions fixed{0.1, 2048};
  const auto ok = residue_lemma7_check(10.0, 1, 1, fixed);
  CHECK(ok.error() < 1e-6);
  const auto lossy = residue_lemma7_check(1.5, 4, 3, fixed);
  MESSAGE("radius 0.1 at (1.5, 4, 3): relative error " << lossy.error());
}
