#include <doctest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <random>

#include "ksign/arith.hpp"
#include "ksign/error.hpp"
#include "ksign/exact_sum.hpp"

using namespace ksign;

namespace {

bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("modular basics") {
  CHECK(gcd(12, 18) == 6);
  CHECK(gcd(0, 7) == 7);
  CHECK(powmod(3, 200, 1000003) == [] {
    u64 r = 1;
    for (int i = 0; i < 200; ++i) r = r * 3 % 1000003;
    return r;
  }());
  CHECK(reduce(-1, 7) == 6);
  CHECK(reduce(-14, 7) == 0);
  CHECK(*inverse_mod(3, 7) == 5);
  CHECK_FALSE(inverse_mod(6, 9).has_value());
}

TEST_CASE("batch inversion agrees with extended Euclid") {
  const u64 m = 1000;
  std::vector<u64> units;
  for (u64 a = 1; a < m; ++a)
    if (gcd(a, m) == 1) units.push_back(a);
  const auto inv = batch_inverse(units, m);
  for (std::size_t j = 0; j < units.size(); ++j) CHECK(inv[j] == *inverse_mod(units[j], m));
  std::vector<u64> bad{3, 4};
  CHECK_THROWS_AS(batch_inverse(bad, 12), Error);
}

TEST_CASE("Shoup multiplication matches mulmod") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const u64 m = rng() % (1ULL << 40) + 2;
    const u64 w = rng() % m;
    const FixedMulMod f(w, m);
    for (int s = 0; s < 10; ++s) {
      const u64 x = rng() % m;
      CHECK(f(x) == mulmod(w, x, m));
    }
  }
}

TEST_CASE("primality against trial division") {
  const auto table = primes_up_to(20000);
  std::size_t j = 0;
  for (u64 n = 0; n <= 20000; ++n) {
    const bool p = trial_prime(n);
    CHECK(is_prime(n) == p);
    if (p) CHECK(table[j++] == n);
  }
  CHECK(j == table.size());
  CHECK(is_prime(1000000007ULL));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(prime_table().back() < kPrimeTableBound);
}

TEST_CASE("primitive roots generate the unit group") {
  for (u64 p : {3ULL, 5ULL, 7ULL, 101ULL, 7919ULL}) {
    const u64 g = primitive_root(p);
    u64 x = 1;
    std::size_t order = 0;
    do {
      x = x * g % p;
      ++order;
    } while (x != 1);
    CHECK(order == p - 1);
  }
}

TEST_CASE("factorization") {
  const auto f = FactoredModulus::factor(30030);
  CHECK(f.omega == 6);
  CHECK(f.squarefree);
  CHECK(f.mu == 1);
  CHECK(f.divisors().size() == 64);

  const auto g = FactoredModulus::factor(360);
  CHECK_FALSE(g.squarefree);
  CHECK(g.mu == 0);
  CHECK(g.primes[0] == PrimePower{2, 3});

  const auto big = FactoredModulus::factor(999999999989ULL);  // prime
  CHECK(big.omega == 1);
  CHECK(FactoredModulus::factor(1).omega == 0);
  CHECK_THROWS_AS(FactoredModulus::factor(kMaxFactorable + 1), Error);
  CHECK_THROWS_AS(FactoredModulus::factor(0), Error);

  const std::vector<u64> ps{3, 5, 7};
  const auto h = FactoredModulus::from_primes(ps);
  CHECK(h.value == 105);
  CHECK(h.mu == -1);
}

TEST_CASE("exact summation is order independent and correctly rounded") {
  using Big = boost::multiprecision::cpp_bin_float_100;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::vector<double> xs;
  for (int i = 0; i < 2000; ++i) xs.push_back(std::ldexp(mant(rng), static_cast<int>(rng() % 80) - 40));
  xs.push_back(1e30);
  xs.push_back(-1e30);

  Big oracle = 0;
  for (double x : xs) oracle += Big(x);

  ExactSum a;
  for (double x : xs) a.add(x);
  CHECK(a.value() == oracle.convert_to<double>());

  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(xs.begin(), xs.end(), rng);
    ExactSum left, right;
    for (std::size_t i = 0; i < xs.size(); ++i) (i < xs.size() / 3 ? left : right).add(xs[i]);
    left.merge(right);
    CHECK(left.value() == a.value());
  }
}
