#pragma once

#include <complex>
#include <unordered_map>
#include <vector>

#include "ksign/arith.hpp"

namespace ksign {

/// S(m, n; c) evaluated at a fixed triple.
struct KloostermanValue {
  u64 modulus;
  i64 m;
  i64 n;
  double value;
};

/// theta_p(a) in [0, pi] with S(a, 1; p) = 2 sqrt(p) cos(theta).
struct AngleSample {
  u64 prime;
  u64 residue;
  double theta;
};

/// S(m, n; c) = sum over units a mod c of cos(2 pi (m a + n a^-1) / c),
/// with compensated accumulation. S(m, n; 1) = 1.
double kloosterman_direct(i64 m, i64 n, u64 c);

/// Full complex defining sum, cosine and sine parts accumulated separately.
/// Quadratic memory-free loop; meant for checks at small c.
std::complex<double> kloosterman_direct_complex(i64 m, i64 n, u64 c);

/// S(m, n; c) for squarefree c with gcd(mn, c) = 1, by twisted
/// multiplicativity S(m, n; qr) = S(m r^-2, n; q) S(m q^-2, n; r) unrolled
/// down to the prime factors, each evaluated directly.
double kloosterman_fast(i64 m, i64 n, const FactoredModulus& c);

/// S(a, n; c) for every residue a in [0, c), via one length-c DFT.
std::vector<double> kloosterman_sweep(i64 n, u64 c);

/// Weil bound 2 sqrt(p) and the Estermann bound sqrt(c) sqrt((m,n,c)) 2^omega(c).
double weil_bound(u64 p);
double estermann_bound(i64 m, i64 n, const FactoredModulus& c);

/// arccos(S / (2 sqrt(p))); throws WeilViolation when |S| > 2 sqrt(p) + 1e-6.
double theta_from_sum(double s, u64 p);
double theta_angle(i64 a, u64 p);

/// sin((k+1) theta) / sin(theta), evaluated as U_k(cos theta).
double sym_k_eval(int k, double theta);

/// C(m, n) = S(m^-2, 1; n) / (2^omega(n) sqrt(n)).
double normalized_c(i64 m, const FactoredModulus& n);

/// sum_{c <= x} S(m, n; c) / c.
double linnik_partial_sum(double x, i64 m, i64 n);

/// Kloosterman sums S(b, 1; p) with cached full tables for small primes.
/// Immutable after construction.
class PrimeKloosterman {
 public:
  explicit PrimeKloosterman(u64 cache_bound = 4096);

  double operator()(u64 b, u64 p) const;
  /// kloosterman_fast(1, 1, n) through the cache.
  double s11(const FactoredModulus& n) const;
  u64 cache_bound() const { return bound_; }

 private:
  u64 bound_;
  std::unordered_map<u64, std::vector<double>> tables_;
};

}  // namespace ksign
