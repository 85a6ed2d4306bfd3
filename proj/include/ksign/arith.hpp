#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ksign {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Largest value accepted by factorization (trial division bound squared).
inline constexpr u64 kMaxFactorable = 1'000'000'000'000ULL;
/// Bound of the precomputed prime table used for trial division.
inline constexpr u32 kPrimeTableBound = 1'000'000;

u64 gcd(u64 a, u64 b);

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 base, u64 exp, u64 m);

/// Reduce a signed integer into [0, m).
inline u64 reduce(i64 a, u64 m) {
  const i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

/// Inverse of a modulo m via extended Euclid; nullopt when gcd(a, m) != 1.
std::optional<u64> inverse_mod(u64 a, u64 m);

/// Montgomery's batch inversion: one extended-Euclid call plus 3(n-1)
/// multiplications. Every entry must be a unit modulo m.
std::vector<u64> batch_inverse(std::span<const u64> values, u64 m);

/// Multiplication by a fixed multiplier modulo m < 2^32 using a precomputed
/// quotient (Shoup). Exact for all x < m.
class FixedMulMod {
 public:
  FixedMulMod(u64 w, u64 m) : w_(w % m), m_(m), wq_((static_cast<unsigned __int128>(w_) << 64) / m) {}
  u64 operator()(u64 x) const {
    const u64 q = static_cast<u64>((static_cast<unsigned __int128>(x) * wq_) >> 64);
    u64 r = x * w_ - q * m_;
    return r >= m_ ? r - m_ : r;
  }

 private:
  u64 w_;
  u64 m_;
  u64 wq_;
};

/// Primes up to limit by the sieve of Eratosthenes.
std::vector<u32> primes_up_to(u32 limit);

/// Shared immutable table of primes below kPrimeTableBound.
const std::vector<u32>& prime_table();

bool is_prime(u64 n);

u64 primitive_root(u64 p);

struct PrimePower {
  u64 prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer together with its factorization.
struct FactoredModulus {
  u64 value = 1;
  std::vector<PrimePower> primes;
  int omega = 0;
  int mu = 1;
  bool squarefree = true;

  /// Factor by trial division; throws RangeError above kMaxFactorable.
  static FactoredModulus factor(u64 n);
  /// Build from ascending distinct primes (squarefree product).
  static FactoredModulus from_primes(std::span<const u64> ascending_primes);

  std::vector<u64> divisors() const;
  std::string to_string() const;
};

}  // namespace ksign
