#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "ksign/error.hpp"
#include "ksign/integrals.hpp"

using namespace ksign;

namespace {

QuadratureConfig sampling(QuadratureMethod m, std::uint64_t samples, std::uint64_t seed) {
  QuadratureConfig cfg;
  cfg.method = m;
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("region membership") {
  const RegionSpec r2{2, 0.0, 0.0};
  CHECK(region_contains(r2, std::vector<double>{0.45}));
  CHECK_FALSE(region_contains(r2, std::vector<double>{0.3}));
  CHECK_FALSE(region_contains(r2, std::vector<double>{0.5}));
  const RegionSpec r3{3, 0.0, 0.0};
  CHECK(region_contains(r3, std::vector<double>{0.3, 0.25}));
  CHECK_FALSE(region_contains(r3, std::vector<double>{0.25, 0.3}));
  CHECK_FALSE(region_contains(r3, std::vector<double>{0.3}));

  const RegionSpec r4{4, 0.0, 1e-3};
  CHECK(region_contains(r4, std::vector<double>{0.25, 0.2, 0.1}));
  CHECK_FALSE(region_contains(r4, std::vector<double>{0.25, 0.2, 0.0005}));  // below the cutoff
  const RegionSpec r4_open{4, 0.0, 0.0};
  CHECK(region_contains(r4_open, std::vector<double>{0.25, 0.2, 0.0005}));

  const RegionSpec r5{5, 0.0, 1e-3};
  CHECK(region_contains(r5, std::vector<double>{0.22, 0.15, 0.12, 0.1}));
  // (a3 + a4 + a5)/2 < a2 fails
  CHECK_FALSE(region_contains(r5, std::vector<double>{0.2, 0.19, 0.18, 0.17}));
}

TEST_CASE("integrand vanishes outside and is positive inside") {
  const RegionSpec r2{2, 0.0, 0.0};
  CHECK(ai_integrand(0.25, 6, r2, std::vector<double>{0.3}) == 0.0);
  // a1 = 0.55, a2 = 0.45: both exceed gamma, L = 1
  CHECK(ai_integrand(0.25, 6, r2, std::vector<double>{0.45}) == doctest::Approx(1.0 / (0.55 * 0.45)));
}

TEST_CASE("argument validation") {
  const auto cfg = QuadratureConfig::defaults_for(4);
  CHECK(cfg.method == QuadratureMethod::quasi_random);
  CHECK(QuadratureConfig::defaults_for(2).method == QuadratureMethod::adaptive);
  for (int i : {4, 5}) {
    try {
      compute_ai(i, 0.25, 6, RegionSpec{i, 0.0, 0.0}, cfg);
      FAIL("expected CutoffRequired");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::cutoff_required);
    }
  }
  CHECK_THROWS_AS(compute_ai(2, 0.3, 6, RegionSpec{2}, QuadratureConfig{}), Error);
  CHECK_THROWS_AS(compute_ai(2, 0.25, 6, RegionSpec{3}, QuadratureConfig{}), Error);
  CHECK_THROWS_AS(compute_ai(2, 0.25, 6, RegionSpec{2}, sampling(QuadratureMethod::monte_carlo, 9999, 1)), Error);
  CHECK(parse_method("quasi-random") == QuadratureMethod::quasi_random);
  CHECK(method_name(QuadratureMethod::adaptive) == "adaptive-rectangles");
  CHECK_THROWS_AS(parse_method("simpson"), Error);
}

TEST_CASE("A_2: adaptive and Monte-Carlo agree") {
  const RegionSpec spec{2, 0.0, 1e-3};
  const auto a = compute_ai(2, 0.25, 6, spec, QuadratureConfig{});
  const auto b = compute_ai(2, 0.25, 6, spec, sampling(QuadratureMethod::monte_carlo, 1 << 22, 42));
  INFO("adaptive " << a.value << " +- " << a.error << ", monte-carlo " << b.value << " +- " << b.error);
  CHECK(a.value > 0.0);
  CHECK(std::fabs(a.value - b.value) <= 3.0 * std::hypot(a.error, b.error));
  // On R_2 both exponents exceed 1/4, so L = 1 and the integral is
  // int_{3/7}^{1/2} da / (a (1 - a)) = log(4/3).
  CHECK(std::fabs(a.value - std::log(4.0 / 3.0)) < 1e-10);

  // adaptive is seed-independent
  auto cfg = QuadratureConfig{};
  cfg.seed = 999;
  CHECK(compute_ai(2, 0.25, 6, spec, cfg).value == a.value);

  // halving the rectangle width
  cfg.rect_width /= 2;
  const auto half = compute_ai(2, 0.25, 6, spec, cfg);
  CHECK(std::fabs(half.value - a.value) < cfg.rel_error_target * a.value);
}

TEST_CASE("A_3: adaptive and quasi-random agree") {
  const RegionSpec spec{3, 0.0, 1e-3};
  const auto a = compute_ai(3, 0.25, 6, spec, QuadratureConfig{});
  const auto b = compute_ai(3, 0.25, 6, spec, sampling(QuadratureMethod::quasi_random, 1 << 22, 42));
  INFO("adaptive " << a.value << " +- " << a.error << ", quasi-random " << b.value << " +- " << b.error);
  CHECK(a.value > 0.0);
  CHECK(std::fabs(a.value - b.value) <= 3.0 * std::hypot(a.error, b.error));
}

TEST_CASE("Monte-Carlo scatter across seeds matches the reported error") {
  const RegionSpec spec{3, 0.0, 1e-3};
  std::vector<double> values;
  double reported = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto e = compute_ai(3, 0.25, 6, spec, sampling(QuadratureMethod::monte_carlo, 200000, seed));
    values.push_back(e.value);
    reported += e.error / 5;
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / 5;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / 4);
  INFO("sample sd " << sd << ", mean reported error " << reported);
  CHECK(sd < 3.0 * reported);
  CHECK(sd > reported / 5.0);
}

TEST_CASE("sampling is deterministic for a fixed seed and partition count") {
  const RegionSpec spec{4, 0.0, 1e-3};
  auto cfg = sampling(QuadratureMethod::monte_carlo, 100000, 7);
  cfg.workers = 3;
  const auto a = compute_ai(4, 0.25, 6, spec, cfg);
  const auto b = compute_ai(4, 0.25, 6, spec, cfg);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);

  // quasi-random replicates do not depend on the worker count
  auto q = sampling(QuadratureMethod::quasi_random, 160000, 7);
  const auto q1 = compute_ai(4, 0.25, 6, spec, q);
  q.workers = 4;
  const auto q4 = compute_ai(4, 0.25, 6, spec, q);
  CHECK(q1.value == q4.value);
}

TEST_CASE("A_4, A_5 grow as the cutoff shrinks") {
  for (int i : {4, 5}) {
    double prev = 0.0;
    for (double amin : {1e-2, 1e-3, 1e-4}) {
      const auto e = compute_ai(i, 0.25, 6, RegionSpec{i, 0.0, amin}, sampling(QuadratureMethod::quasi_random, 1 << 20, 3));
      INFO("A_" << i << "(alpha_min = " << amin << ") = " << e.value << " +- " << e.error);
      CHECK(e.value > 0.0);
      CHECK(e.value >= prev);
      prev = e.value;
    }
  }
}

TEST_CASE("A_2 is nonincreasing in k at gamma = 1/4") {
  const RegionSpec spec{2, 0.0, 1e-3};
  double prev = INFINITY;
  for (int k = 3; k <= 8; ++k) {
    const double v = compute_ai(2, 0.25, k, spec, QuadratureConfig{}).value;
    MESSAGE("A_2(1/4, " << k << ") = " << v);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("integrand trace") {
  std::ostringstream os;
  auto cfg = sampling(QuadratureMethod::monte_carlo, 10000, 5);
  cfg.trace_limit = 50;
  compute_ai(3, 0.25, 6, RegionSpec{3, 0.0, 1e-3}, cfg, &os);
  const std::string s = os.str();
  CHECK(s.rfind("alpha_2,alpha_3,value\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 51);
}
