#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ksign/arith.hpp"
#include "ksign/exact_sum.hpp"
#include "ksign/exp_sums.hpp"
#include "ksign/sieve.hpp"

namespace ksign {

/// g(x) = exp(-1 / ((x - 1)(2 - x))) on (1, 2), zero elsewhere.
struct SmoothWindow {
  std::string kind = "exp-bump";
  /// int_1^2 g(x) dx, by adaptive quadrature to 1e-10.
  double mellin_at_1 = 0.0;

  static const SmoothWindow& standard();
  double operator()(double x) const;
};

struct CensusOptions {
  /// RangeTooLarge when the range holds more moduli than this.
  u64 budget = 20'000'000;
  /// |S(1,1;n)| below this counts as a zero.
  double zero_threshold = 1e-6;
  /// Contiguous subranges processed concurrently, merged in ascending order.
  int workers = 1;
  u64 segment = 1u << 16;
};

inline constexpr int kMaxOmegaTracked = 16;

/// Tallies and H sums over squarefree n in (lo, hi] with omega(n) <= max_omega.
/// The H sums are exact accumulations, so merging adjacent records
/// reproduces the single-range result bit for bit.
struct CensusRecord {
  u64 X = 0;
  u64 lo = 0;
  u64 hi = 0;
  int max_omega = 10;
  bool squarefree_only = true;
  SieveParams params;
  double rho = 0.0;

  u64 positives = 0;
  u64 negatives = 0;
  u64 zeros = 0;
  u64 filtered = 0;  // non-squarefree or too many prime factors
  std::array<std::array<u64, 3>, kMaxOmegaTracked + 1> by_omega{};  // {pos, neg, zero}
  /// Largest |S| / (2^omega sqrt(n)) seen; the bound requires <= 1.
  double max_bound_ratio = 0.0;

  // sum over n of g(n/X) / sqrt(n) times
  ExactSum h1;         // |S| W^2
  ExactSum h2;         // |S| (k/2)^omega W^2
  ExactSum h3;         // S W^2
  ExactSum h2_signed;  // S (k/2)^omega W^2
  ExactSum h_plus;     // (|S| + S)(rho - (k/2)^omega) W^2
  ExactSum h_minus;    // (|S| - S)(rho - (k/2)^omega) W^2

  u64 tallied() const { return positives + negatives + zeros; }

  /// Appends the adjacent range (hi, other.hi]; DomainError otherwise.
  void merge(const CensusRecord& other);

  /// |H^+ - (rho (H1 + H3) - (H2 + H2s))| and the H^- analogue, relative to
  /// rho H1 + H2: the algebraic identity behind the decomposition.
  double recombination_residual() const;
  /// H^+ >= rho H1 - 2 H2 + rho H3 and H^- >= rho H1 - 2 H2 - rho H3.
  bool decomposition_holds() const;
  /// count log X / X for the positive and negative tallies.
  double positive_ratio() const;
  double negative_ratio() const;
};

CensusRecord sign_census(u64 X, int max_omega, const SieveParams& params, double rho, const SmoothWindow& window,
                         const CensusOptions& opts = {});

/// The census restricted to n in (lo, hi], windowed at scale X.
CensusRecord sign_census_range(u64 lo, u64 hi, u64 X, int max_omega, const SieveParams& params, double rho,
                               const SmoothWindow& window, const CensusOptions& opts = {});

struct SatoTateReport {
  u64 prime = 0;
  double ks_distance = 0.0;
  std::vector<u64> counts;       // angles per bin over [0, pi]
  std::vector<double> expected;  // (p - 1) mu_ST(bin)
};

/// Sato-Tate CDF on [0, pi]: (theta - sin theta cos theta) / pi.
double sato_tate_cdf(double theta);

SatoTateReport vertical_sato_tate(u64 p, int bins = 20);

/// sum_{m=1}^{p-1} sym_k(theta_p(m)), or with m replaced by m^-2 when twisted.
double weyl_sum(u64 p, int k, bool twist);

struct PrimeInputSum {
  double value = 0.0;
  u64 count = 0;  // primes in (N, 2N] not divisible by p
  double normalized = 0.0;  // value / N
};

/// sum over primes n in (N, 2N] of sym_k(theta_p(n^-2)); RangeError unless N > p^{3/4}.
PrimeInputSum prime_input_sum(u64 p, int k, u64 N);

struct FactorPairReport {
  double mean_abs_c = 0.0;
  u64 pairs = 0;
  std::vector<u64> primes1, primes2;
  int bins = 0;
  std::vector<u64> joint_histogram;  // row-major: C(p1,p2) bin * bins + C(p2,p1) bin
  /// Largest |S(1,1;p1 p2)| - |S(p2^-2,1;p1) S(p1^-2,1;p2)| over directly summed pairs.
  double identity_max_error = 0.0;
  u64 identity_checked = 0;
};

/// Pairs of primes p1 in (P1, P1 + P1/log(P1 P2)], p2 likewise for P2.
/// EmptyInterval when either interval holds no prime.
FactorPairReport factor_pair_census(double P1, double P2, int bins = 10, u64 identity_checks = 16);

}  // namespace ksign
