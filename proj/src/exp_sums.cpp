#include "ksign/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ksign/error.hpp"
#include "ksign/exact_sum.hpp"
#include "ksign/kernels.hpp"

namespace ksign {

namespace {

constexpr u64 kTableLimit = 1ULL << 31;

// cos(2 pi j / c) for j in [0, c), built from a coarse and a fine table of
// unit roots so only O(sqrt c) libm calls are needed.
std::vector<double> cosine_table(u64 c) {
  std::vector<double> table(c);
  const u64 block = std::max<u64>(1, static_cast<u64>(std::sqrt(static_cast<double>(c))));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(c);
  std::vector<std::complex<double>> fine(block);
  for (u64 r = 0; r < block; ++r) fine[r] = std::polar(1.0, step * static_cast<double>(r));
  for (u64 q = 0; q * block < c; ++q) {
    const std::complex<double> coarse = std::polar(1.0, step * static_cast<double>(q * block));
    const u64 end = std::min(c, (q + 1) * block);
    for (u64 j = q * block; j < end; ++j) table[j] = (coarse * fine[j - q * block]).real();
  }
  return table;
}

void require_coprime_squarefree(i64 m, i64 n, const FactoredModulus& c, const char* who) {
  if (!c.squarefree) throw Error(Errc::not_squarefree, std::string(who) + ": modulus " + c.to_string());
  for (const auto& pp : c.primes) {
    if (reduce(m, pp.prime) == 0 || reduce(n, pp.prime) == 0)
      throw Error(Errc::not_coprime, std::string(who) + ": gcd(mn, c) > 1 for c = " + c.to_string());
  }
}

// Sum over units of a prime modulus, walking x = g^t so both x and its
// inverse advance by one fixed multiplication each.
double prime_direct(u64 m, u64 n, u64 p, const std::vector<double>& table) {
  const u64 g = primitive_root(p);
  const u64 g_inv = *inverse_mod(g, p);
  FixedMulMod step_w(g, p);
  FixedMulMod step_v(g_inv, p);
  std::vector<std::uint32_t> idx(p - 1);
  u64 w = m;  // m * x
  u64 v = n;  // n * x^-1
  for (u64 t = 0; t + 1 < p; ++t) {
    u64 s = w + v;
    if (s >= p) s -= p;
    idx[t] = static_cast<std::uint32_t>(s);
    w = step_w(w);
    v = step_v(v);
  }
  return kernels::gather_sum(table, idx);
}

double composite_direct(u64 m, u64 n, u64 c, const std::vector<double>& table) {
  std::vector<u64> units;
  units.reserve(c);
  for (u64 a = 1; a < c; ++a)
    if (gcd(a, c) == 1) units.push_back(a);
  const auto inverses = batch_inverse(units, c);
  std::vector<std::uint32_t> idx(units.size());
  for (std::size_t j = 0; j < units.size(); ++j) {
    u64 s = mulmod(m, units[j], c) + mulmod(n, inverses[j], c);
    if (s >= c) s -= c;
    idx[j] = static_cast<std::uint32_t>(s);
  }
  return kernels::gather_sum(table, idx);
}

}  // namespace

double kloosterman_direct(i64 m, i64 n, u64 c) {
  if (c == 1) return 1.0;
  const u64 mr = reduce(m, c);
  const u64 nr = reduce(n, c);
  if (c >= kTableLimit) {
    CompensatedSum s;
    for (u64 a = 1; a < c; ++a) {
      auto inv = inverse_mod(a, c);
      if (!inv) continue;
      const u64 ph = (mulmod(mr, a, c) + mulmod(nr, *inv, c)) % c;
      s.add(std::cos(2.0 * std::numbers::pi * (static_cast<double>(ph) / static_cast<double>(c))));
    }
    return s.value();
  }
  const auto table = cosine_table(c);
  if (c > 2 && is_prime(c)) return prime_direct(mr, nr, c, table);
  return composite_direct(mr, nr, c, table);
}

std::complex<double> kloosterman_direct_complex(i64 m, i64 n, u64 c) {
  if (c == 1) return {1.0, 0.0};
  const u64 mr = reduce(m, c);
  const u64 nr = reduce(n, c);
  CompensatedSum re, im;
  for (u64 a = 1; a < c; ++a) {
    auto inv = inverse_mod(a, c);
    if (!inv) continue;
    const u64 ph = (mulmod(mr, a, c) + mulmod(nr, *inv, c)) % c;
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(ph) / static_cast<double>(c));
    re.add(std::cos(angle));
    im.add(std::sin(angle));
  }
  return {re.value(), im.value()};
}

double kloosterman_fast(i64 m, i64 n, const FactoredModulus& c) {
  require_coprime_squarefree(m, n, c, "kloosterman_fast");
  if (c.value == 1) return 1.0;
  double product = 1.0;
  for (const auto& pp : c.primes) {
    const u64 p = pp.prime;
    const u64 rest = (c.value / p) % p;
    const u64 rest_inv = *inverse_mod(rest, p);
    // S(m, n; p) with the twist (c/p)^-2, folded into a single S(b, 1; p)
    const u64 b = mulmod(mulmod(reduce(m, p), reduce(n, p), p), mulmod(rest_inv, rest_inv, p), p);
    product *= kloosterman_direct(static_cast<i64>(b), 1, p);
  }
  return product;
}

double weil_bound(u64 p) { return 2.0 * std::sqrt(static_cast<double>(p)); }

double estermann_bound(i64 m, i64 n, const FactoredModulus& c) {
  const u64 g = gcd(gcd(reduce(m, c.value), reduce(n, c.value)), c.value);
  const u64 gg = g == 0 ? c.value : g;
  return std::sqrt(static_cast<double>(c.value)) * std::sqrt(static_cast<double>(gg)) * std::ldexp(1.0, c.omega);
}

double theta_from_sum(double s, u64 p) {
  const double bound = weil_bound(p);
  if (std::fabs(s) > bound + 1e-6)
    throw Error(Errc::weil_violation, "|S| = " + std::to_string(s) + " exceeds 2 sqrt(" + std::to_string(p) + ")");
  const double r = std::clamp(s / bound, -1.0, 1.0);
  return std::acos(r);
}

double theta_angle(i64 a, u64 p) {
  if (reduce(a, p) == 0) throw Error(Errc::not_coprime, "theta_angle: p divides a");
  return theta_from_sum(kloosterman_direct(a, 1, p), p);
}

double sym_k_eval(int k, double theta) {
  if (k == 0) return 1.0;
  const double two_c = 2.0 * std::cos(theta);
  double prev = 1.0;
  double cur = two_c;
  for (int j = 1; j < k; ++j) {
    const double next = std::fma(two_c, cur, -prev);
    prev = cur;
    cur = next;
  }
  // cos is inexact at pi; pin the endpoints to their limits.
  if (theta == 0.0) return k + 1.0;
  if (theta == std::numbers::pi) return (k % 2 == 0 ? 1.0 : -1.0) * (k + 1.0);
  return cur;
}

double normalized_c(i64 m, const FactoredModulus& n) {
  if (!n.squarefree) throw Error(Errc::not_squarefree, "normalized_c: modulus " + n.to_string());
  if (n.value == 1) return 1.0;
  const auto inv = inverse_mod(reduce(m, n.value), n.value);
  if (!inv) throw Error(Errc::not_coprime, "normalized_c: gcd(m, n) > 1");
  const u64 b = mulmod(*inv, *inv, n.value);
  const double s = kloosterman_fast(static_cast<i64>(b), 1, n);
  return s / (std::ldexp(1.0, n.omega) * std::sqrt(static_cast<double>(n.value)));
}

double linnik_partial_sum(double x, i64 m, i64 n) {
  if (!(x >= 1.0)) throw Error(Errc::domain_error, "linnik_partial_sum: x < 1");
  CompensatedSum s;
  const auto limit = static_cast<u64>(std::floor(x));
  for (u64 c = 1; c <= limit; ++c) s.add(kloosterman_direct(m, n, c) / static_cast<double>(c));
  return s.value();
}

PrimeKloosterman::PrimeKloosterman(u64 cache_bound) : bound_(cache_bound) {
  for (u32 p : primes_up_to(static_cast<u32>(cache_bound))) tables_.emplace(p, kloosterman_sweep(1, p));
}

double PrimeKloosterman::operator()(u64 b, u64 p) const {
  if (p <= bound_) return tables_.at(p)[b % p];
  return kloosterman_direct(static_cast<i64>(b % p), 1, p);
}

double PrimeKloosterman::s11(const FactoredModulus& n) const {
  if (!n.squarefree) throw Error(Errc::not_squarefree, "s11: modulus " + n.to_string());
  double product = 1.0;
  for (const auto& pp : n.primes) {
    const u64 p = pp.prime;
    const u64 rest_inv = *inverse_mod((n.value / p) % p, p);
    product *= (*this)(mulmod(rest_inv, rest_inv, p), p);
  }
  return product;
}

}  // namespace ksign
