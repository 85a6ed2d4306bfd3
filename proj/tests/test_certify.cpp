#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "ksign/certify.hpp"
#include "ksign/error.hpp"
#include "ksign/measures.hpp"

using namespace ksign;

namespace {

using Big = boost::multiprecision::cpp_bin_float_100;

// Straight double sum in 100-digit floats, Gamma via factorials.
Big rk_oracle(int k, Big y) {
  auto fact = [](int n) {
    Big f = 1;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
  };
  auto binom = [&](int n, int r) { return fact(n) / (fact(r) * fact(n - r)); };
  Big sum = 0;
  for (int j = 1; j <= k; ++j)
    for (int i = 0; i < j; ++i) {
      Big t = binom(k, j) * binom(j - 1, i) * binom(2 * (k - j), k - j) * fact(j + i - 1) /
              (fact(j - 1) * fact(j - 1)) / fact(2 * k - j + i) * pow(y, -(j - i));
      sum += (i % 2 == 0) ? t : Big(-t);
    }
  return sum;
}

std::array<IntegralEstimate, 4> synthetic_a(double scale) {
  return {IntegralEstimate{0.5 * scale, 0.0, 0}, IntegralEstimate{0.2 * scale, 0.0, 0},
          IntegralEstimate{0.1 * scale, 0.0, 0}, IntegralEstimate{0.05 * scale, 0.0, 0}};
}

const std::array<double, 4> kBoundC{0.11109, 0.03557, 0.01184, 0.00396};

}  // namespace

TEST_CASE("R_k: exact rational path") {
  CHECK(rk_exact(1, Rational(1, 4)) == Rational(4));
  CHECK(rk_exact(1, Rational(3, 7)) == Rational(7, 3));
  CHECK(rk_poly(1, 0.25) == 4.0);
  for (int k = 1; k <= 8; ++k) {
    const auto c = rk_coefficients(k);
    CHECK(c.size() == static_cast<std::size_t>(k));
  }
  CHECK_THROWS_AS(rk_poly(3, 0.0), Error);
  CHECK_THROWS_AS(rk_exact(3, Rational(-1)), Error);
}

TEST_CASE("R_k against the arbitrary-precision oracle") {
  for (int k = 1; k <= 8; ++k) {
    for (int inv : {8, 4, 2, 1}) {
      const double y = 1.0 / inv;
      const double oracle = rk_oracle(k, Big(1) / inv).convert_to<double>();
      const double exact = rk_exact(k, Rational(1, inv)).convert_to<double>();
      INFO("k = " << k << ", y = " << y);
      CHECK(std::fabs(rk_poly(k, y) - oracle) <= 1e-12 * std::fabs(oracle));
      CHECK(std::fabs(exact - oracle) <= 1e-12 * std::fabs(oracle));
      CHECK(std::fabs(rk_poly_float(k, y) - oracle) <= 1e-12 * std::fabs(oracle));
    }
  }
}

TEST_CASE("omega bound") {
  CHECK(omega_bound(6, 1.5e5) == 10);
  CHECK(omega_exponent(6, 1.5e5) == doctest::Approx(10.849).epsilon(1e-4));
  CHECK(std::fabs(omega_exponent(6, 1.5e5) - 10.849) < 1e-3);
  CHECK(omega_bound(4, 100) == 6);
  CHECK(omega_bound(3, 1.5) == 1);
  CHECK_THROWS_AS(omega_bound(2, 100), Error);
  CHECK_THROWS_AS(omega_bound(6, 1.0), Error);
  for (double rho : {10.0, 1e3, 1.5e5}) {
    int prev = omega_bound(3, rho);
    for (int k = 4; k <= 12; ++k) {
      const int w = omega_bound(k, rho);
      CHECK(w <= prev);
      prev = w;
    }
  }
}

TEST_CASE("inequality: clauses and monotonicity") {
  const auto a = synthetic_a(1.0);
  CHECK_THROWS_AS(check_inequality(2, 0.25, 10.0, a, kBoundC), Error);
  const auto r = check_inequality(6, 0.25, 1.0, a, kBoundC);
  CHECK_FALSE(r.verdict);
  const double rk = rk_poly(6, 0.25);
  CHECK(r.rhs == doctest::Approx(2.0 * 720.0 * 720.0 * rk));
  const double weighted = 4 * 0.5 * kBoundC[0] + 8 * 0.2 * kBoundC[1] + 16 * 0.1 * kBoundC[2] + 32 * 0.05 * kBoundC[3];
  CHECK(r.lhs == doctest::Approx(weighted));
  CHECK(r.rho_star == doctest::Approx(r.rhs / weighted));

  bool seen_true = false;
  for (double rho = 1.0; rho < 1e9; rho *= 1.7) {
    const bool v = check_inequality(6, 0.25, rho, a, kBoundC).verdict;
    if (seen_true) CHECK(v);
    seen_true = seen_true || v;
  }
  CHECK(seen_true);
  // gamma outside (0, 1/4] is not an error, just a false verdict
  const auto g = check_inequality(6, 0.3, 1e30, a, kBoundC);
  CHECK_FALSE(g.verdict);
}

TEST_CASE("inequality with computed inputs: rho = 1 fails") {
  QuadratureConfig base;
  base.samples = 1 << 18;
  const auto a = compute_a_values(0.25, 6, 1e-3, base);
  std::array<double, 4> c{};
  const auto tables = build_measure_tables(4, 2048);
  for (int i = 2; i <= 5; ++i) c[i - 2] = compute_ci(i, tables[i - 2]);
  const auto r = check_inequality(6, 0.25, 1.0, a, c);
  CHECK_FALSE(r.verdict);
  CHECK(r.lhs < r.rhs);
}

TEST_CASE("optimize") {
  const AProvider provider = [](int, double gamma) { return synthetic_a(gamma * 4); };
  const auto best = optimize({0.1, 0.2, 0.25}, {3, 4, 5, 6, 7, 8}, provider, kBoundC, 3);
  CHECK(best.verdict);
  CHECK(best.rho == doctest::Approx(best.rho_star * (1 + 1e-6)));
  // brute-force the same objective
  int best_w = 1 << 30;
  for (int k = 3; k <= 8; ++k)
    for (double g : {0.1, 0.2, 0.25}) {
      const auto r = check_inequality(k, g, 1.0, provider(k, g), kBoundC);
      best_w = std::min(best_w, omega_bound(k, r.rho_star * (1 + 1e-6)));
    }
  CHECK(best.omega_bound == best_w);

  const auto single = optimize({0.25}, {3}, provider, kBoundC);
  CHECK(single.k == 3);

  const AProvider zero = [](int, double) { return synthetic_a(0.0); };
  try {
    optimize({0.25}, {6}, zero, kBoundC);
    FAIL("expected NoFeasiblePoint");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_feasible_point);
  }
}

TEST_CASE("report JSON round trip") {
  auto r = check_inequality(6, 0.25, 1.5e5, synthetic_a(1.0 / 3.0), kBoundC);
  r.a_values[1].error = 1.0 / 7.0;
  r.a_values[2].evaluations = 123456789012ULL;
  r.alpha_min = 1e-3;
  r.quadrature = "quasi-random";
  r.seed = 0xfedcba9876543210ULL;
  r.samples = 1 << 22;
  r.c_grid = 4096;
  const auto text = report_to_json(r);
  const auto back = report_from_json(text);
  CHECK(back == r);
  CHECK(report_to_json(back) == text);
}
