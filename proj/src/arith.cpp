#include "ksign/arith.hpp"

#include <algorithm>
#include <cmath>

#include "ksign/error.hpp"

namespace ksign {

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::optional<u64> inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 q = old_r / r;
    i64 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return std::nullopt;
  return reduce(old_s, m);
}

std::vector<u64> batch_inverse(std::span<const u64> values, u64 m) {
  std::vector<u64> out(values.size());
  if (values.empty()) return out;
  // prefix products
  out[0] = values[0] % m;
  for (std::size_t i = 1; i < values.size(); ++i) out[i] = mulmod(out[i - 1], values[i], m);
  auto inv = inverse_mod(out.back(), m);
  if (!inv) throw Error(Errc::not_coprime, "batch_inverse: non-unit entry");
  u64 acc = *inv;
  for (std::size_t i = values.size() - 1; i > 0; --i) {
    const u64 v = values[i] % m;
    out[i] = mulmod(acc, out[i - 1], m);
    acc = mulmod(acc, v, m);
  }
  out[0] = acc;
  return out;
}

std::vector<u32> primes_up_to(u32 limit) {
  std::vector<u32> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<u32>(i));
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

const std::vector<u32>& prime_table() {
  static const std::vector<u32> table = primes_up_to(kPrimeTableBound);
  return table;
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic for all 64-bit n
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

u64 primitive_root(u64 p) {
  if (p == 2) return 1;
  const auto phi = FactoredModulus::factor(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto& pp : phi.primes) {
      if (powmod(g, (p - 1) / pp.prime, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error(Errc::domain_error, "primitive_root: no generator for " + std::to_string(p));
}

FactoredModulus FactoredModulus::factor(u64 n) {
  if (n == 0) throw Error(Errc::domain_error, "factor: zero has no factorization");
  if (n > kMaxFactorable) throw Error(Errc::range_error, "factor: input exceeds 1e12");
  FactoredModulus f;
  f.value = n;
  u64 rest = n;
  for (u32 p : prime_table()) {
    const u64 pp = p;
    if (pp * pp > rest) break;
    if (rest % pp != 0) continue;
    int e = 0;
    while (rest % pp == 0) {
      rest /= pp;
      ++e;
    }
    f.primes.push_back({pp, e});
  }
  if (rest > 1) f.primes.push_back({rest, 1});
  f.omega = static_cast<int>(f.primes.size());
  f.squarefree = std::all_of(f.primes.begin(), f.primes.end(), [](const PrimePower& p) { return p.exponent == 1; });
  f.mu = f.squarefree ? (f.omega % 2 == 0 ? 1 : -1) : 0;
  return f;
}

FactoredModulus FactoredModulus::from_primes(std::span<const u64> ascending_primes) {
  FactoredModulus f;
  f.value = 1;
  for (u64 p : ascending_primes) {
    f.value *= p;
    f.primes.push_back({p, 1});
  }
  f.omega = static_cast<int>(f.primes.size());
  f.squarefree = true;
  f.mu = f.omega % 2 == 0 ? 1 : -1;
  return f;
}

std::vector<u64> FactoredModulus::divisors() const {
  std::vector<u64> divs{1};
  for (const auto& pp : primes) {
    const std::size_t base = divs.size();
    u64 power = 1;
    for (int e = 1; e <= pp.exponent; ++e) {
      power *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * power);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::string FactoredModulus::to_string() const {
  if (primes.empty()) return "1";
  std::string s;
  for (const auto& pp : primes) {
    if (!s.empty()) s += "*";
    s += std::to_string(pp.prime);
    if (pp.exponent > 1) s += "^" + std::to_string(pp.exponent);
  }
  return s;
}

}  // namespace ksign
