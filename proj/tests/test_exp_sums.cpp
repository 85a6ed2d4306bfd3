#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ksign/error.hpp"
#include "ksign/exp_sums.hpp"

using namespace ksign;

namespace {

// Independent oracle: long double cosines, units found by brute-force search
// for the inverse.
double naive_kloosterman(i64 m, i64 n, u64 c) {
  if (c == 1) return 1.0;
  long double s = 0.0L;
  for (u64 a = 1; a < c; ++a) {
    if (std::gcd(a, c) != 1) continue;
    u64 inv = 1;
    while (a * inv % c != 1) ++inv;
    const i64 ph = ((m % static_cast<i64>(c) + static_cast<i64>(c)) * static_cast<i64>(a) +
                    (n % static_cast<i64>(c) + static_cast<i64>(c)) * static_cast<i64>(inv)) %
                   static_cast<i64>(c);
    s += std::cos(2.0L * std::numbers::pi_v<long double> * ph / c);
  }
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("direct evaluation: hand values") {
  CHECK(kloosterman_direct(0, 0, 12) == doctest::Approx(4.0));
  CHECK(kloosterman_direct(1, 1, 2) == doctest::Approx(1.0));
  CHECK(kloosterman_direct(1, 1, 3) == doctest::Approx(-1.0));
  CHECK(kloosterman_direct(5, 7, 1) == 1.0);
  const auto z = kloosterman_direct_complex(1, 1, 3);
  CHECK(z.real() == doctest::Approx(-1.0));
  CHECK(std::fabs(z.imag()) < 1e-12);
}

TEST_CASE("direct evaluation matches the naive oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const u64 c = rng() % 700 + 1;
    const i64 m = static_cast<i64>(rng() % 2000) - 1000;
    const i64 n = static_cast<i64>(rng() % 2000) - 1000;
    CHECK(std::fabs(kloosterman_direct(m, n, c) - naive_kloosterman(m, n, c)) < 1e-9);
  }
}

TEST_CASE("symmetry S(m,n;c) = S(n,m;c) and reality") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const u64 c = rng() % 3000 + 1;
    const i64 m = static_cast<i64>(rng() % 5000);
    const i64 n = static_cast<i64>(rng() % 5000);
    CHECK(std::fabs(kloosterman_direct(m, n, c) - kloosterman_direct(n, m, c)) < 1e-8);
    CHECK(std::fabs(kloosterman_direct_complex(m, n, c).imag()) < 1e-8);
  }
}

TEST_CASE("fast path equals direct on squarefree moduli up to 5000") {
  std::mt19937_64 rng(8);
  int tested = 0;
  for (u64 c = 2; c <= 5000; ++c) {
    const auto f = FactoredModulus::factor(c);
    if (!f.squarefree) continue;
    i64 m, n;
    do {
      m = static_cast<i64>(rng() % 100000) + 1;
      n = static_cast<i64>(rng() % 100000) + 1;
    } while (std::gcd(static_cast<u64>(m) * static_cast<u64>(n), c) != 1);
    const double d = kloosterman_direct(m, n, c);
    const double s = kloosterman_fast(m, n, f);
    CHECK(std::fabs(s - d) <= 1e-6 * std::max(1.0, std::fabs(d)));
    ++tested;
  }
  CHECK(tested > 3000);
  CHECK(kloosterman_fast(1, 1, FactoredModulus::factor(15)) == doctest::Approx(kloosterman_direct(1, 1, 15)));
  CHECK(kloosterman_fast(1, 1, FactoredModulus::factor(6)) == doctest::Approx(kloosterman_direct(1, 1, 6)));
}

TEST_CASE("fast path errors") {
  CHECK_THROWS_AS(kloosterman_fast(1, 1, FactoredModulus::factor(12)), Error);
  try {
    kloosterman_fast(3, 1, FactoredModulus::factor(15));
    FAIL("expected NotCoprime");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_coprime);
  }
  try {
    kloosterman_fast(1, 1, FactoredModulus::factor(18));
    FAIL("expected NotSquarefree");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_squarefree);
  }
}

TEST_CASE("full-residue sweep equals pointwise evaluation") {
  for (u64 c : {2ULL, 3ULL, 10ULL, 97ULL, 210ULL, 1009ULL, 1024ULL}) {
    for (i64 n : {1LL, 5LL}) {
      const auto s = kloosterman_sweep(n, c);
      REQUIRE(s.size() == c);
      for (u64 a = 0; a < c; a += (c > 200 ? 7 : 1)) CHECK(std::fabs(s[a] - kloosterman_direct(a, n, c)) < 1e-8);
    }
  }
}

TEST_CASE("Weil and Estermann bounds on a sample") {
  for (u64 p : {3ULL, 5ULL, 101ULL, 997ULL}) {
    const auto s = kloosterman_sweep(1, p);
    for (u64 a = 1; a < p; ++a) CHECK(std::fabs(s[a]) <= weil_bound(p) + 1e-9);
  }
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    u64 c;
    FactoredModulus f;
    do {
      c = rng() % 10000 + 1;
      f = FactoredModulus::factor(c);
    } while (!f.squarefree || c % 32 == 0);
    const i64 m = static_cast<i64>(rng() % 10000);
    const i64 n = static_cast<i64>(rng() % 10000);
    CHECK(std::fabs(kloosterman_direct(m, n, c)) <= estermann_bound(m, n, f) + 1e-9);
  }
}

TEST_CASE("angles and symmetric powers") {
  CHECK(theta_angle(1, 3) == doctest::Approx(std::acos(-1.0 / (2.0 * std::sqrt(3.0)))));
  CHECK(theta_angle(1, 3) == doctest::Approx(1.863638).epsilon(1e-6));
  CHECK(theta_from_sum(0.0, 101) == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS_AS(theta_from_sum(2.0 * std::sqrt(7.0) + 1e-3, 7), Error);
  for (u64 a = 1; a < 101; ++a) {
    const double t = theta_angle(static_cast<i64>(a), 101);
    CHECK(t >= 0.0);
    CHECK(t <= std::numbers::pi);
  }

  CHECK(sym_k_eval(0, 1.234) == 1.0);
  CHECK(sym_k_eval(1, 0.7) == doctest::Approx(2.0 * std::cos(0.7)));
  CHECK(sym_k_eval(3, 0.0) == 4.0);
  CHECK(sym_k_eval(3, std::numbers::pi) == -4.0);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> th(1e-3, std::numbers::pi - 1e-3);
  for (int t = 0; t < 1000; ++t) {
    const double theta = th(rng);
    const int k = static_cast<int>(rng() % 11);
    // sum_{j=0..k} e^{i(k-2j) theta}, real part
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) sum += std::cos((k - 2 * j) * theta);
    CHECK(std::fabs(sym_k_eval(k, theta) - std::sin((k + 1) * theta) / std::sin(theta)) < 1e-10);
    CHECK(std::fabs(sym_k_eval(k, theta) - sum) < 1e-10);
  }
}

TEST_CASE("normalized sums and partial sums") {
  CHECK(normalized_c(1, FactoredModulus::factor(3)) == doctest::Approx(-1.0 / (2.0 * std::sqrt(3.0))));
  CHECK(normalized_c(1, FactoredModulus::factor(3)) == doctest::Approx(-0.28868).epsilon(1e-4));
  CHECK_THROWS_AS(normalized_c(3, FactoredModulus::factor(3)), Error);
  CHECK_THROWS_AS(normalized_c(1, FactoredModulus::factor(9)), Error);

  CHECK(linnik_partial_sum(1, 1, 1) == doctest::Approx(1.0));
  CHECK(linnik_partial_sum(3, 1, 1) == doctest::Approx(7.0 / 6.0));
  CHECK_THROWS_AS(linnik_partial_sum(0.5, 1, 1), Error);
  for (double x : {1e2, 1e3, 1e4}) {
    const double v = linnik_partial_sum(x, 1, 1);
    MESSAGE("sum_{c <= " << x << "} S(1,1;c)/c = " << v);
    CHECK(std::fabs(v) < std::pow(x, 0.4));
  }
}

TEST_CASE("cached prime sums") {
  const PrimeKloosterman pk(200);
  for (u64 p : {2ULL, 3ULL, 199ULL, 211ULL}) {
    for (u64 b = 1; b < std::min<u64>(p, 50); ++b)
      CHECK(std::fabs(pk(b, p) - kloosterman_direct(static_cast<i64>(b), 1, p)) < 1e-9);
  }
  for (u64 n : {6ULL, 15ULL, 30ULL, 1001ULL, 4199ULL}) {
    const auto f = FactoredModulus::factor(n);
    CHECK(std::fabs(pk.s11(f) - kloosterman_direct(1, 1, n)) < 1e-8);
  }
}
