#pragma once

#include <span>
#include <vector>

#include "ksign/arith.hpp"

namespace ksign {

/// Sieve level for a census at scale X: sqrt(D) = X^gamma exp(-sqrt(log X)).
struct SieveParams {
  double X = 0.0;
  double gamma = 0.25;
  int k = 6;
  double sqrtD = 1.0;

  static SieveParams make(double X, double gamma, int k);
  /// Explicit level; gamma is set to the effective exponent log(sqrtD)/log(X).
  static SieveParams with_level(double X, int k, double sqrtD);
};

double lambda_d(u64 d, const SieveParams& params);
double lambda_d(const FactoredModulus& d, const SieveParams& params);

/// Sparse lambda_d over squarefree d <= sqrtD.
class WeightVector {
 public:
  explicit WeightVector(const SieveParams& params);

  double operator[](u64 d) const;
  const std::vector<std::pair<u64, double>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<u64, double>> entries_;
};

/// xi(d) = sum over [d1, d2] = d of lambda_{d1} lambda_{d2}. Each prime of d
/// goes to d1 only, d2 only, or both: 3^omega(d) terms.
double xi(const FactoredModulus& d, const SieveParams& params);

/// sum_{d | n} lambda_d over the 2^omega(n) divisors of squarefree n.
double sieve_weight(const FactoredModulus& n, const SieveParams& params);

/// L_i(gamma, k; alphas): sum over subsets A with sum(A) < gamma of
/// (-1)^|A| (1 - sum(A) / gamma)^k.
double subset_sum_L(double gamma, int k, std::span<const double> alphas);

}  // namespace ksign
