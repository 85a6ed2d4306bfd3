#include "ksign/sieve.hpp"

#include <algorithm>
#include <cmath>

#include "ksign/error.hpp"

namespace ksign {

namespace {

double ipow(double base, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= base;
  return r;
}

}  // namespace

SieveParams SieveParams::make(double X, double gamma, int k) {
  if (!(X > 1.0)) throw Error(Errc::domain_error, "SieveParams: X must exceed 1");
  if (!(gamma > 0.0 && gamma <= 0.25)) throw Error(Errc::domain_error, "SieveParams: gamma outside (0, 1/4]");
  if (k < 1) throw Error(Errc::domain_error, "SieveParams: k < 1");
  const double L = std::log(X);
  return SieveParams{X, gamma, k, std::exp(gamma * L - std::sqrt(L))};
}

SieveParams SieveParams::with_level(double X, int k, double sqrtD) {
  if (!(X > 1.0)) throw Error(Errc::domain_error, "SieveParams: X must exceed 1");
  if (!(sqrtD > 1.0) || sqrtD > std::pow(X, 0.25) * (1 + 1e-12))
    throw Error(Errc::domain_error, "SieveParams: sqrtD outside (1, X^{1/4}]");
  if (k < 1) throw Error(Errc::domain_error, "SieveParams: k < 1");
  return SieveParams{X, std::log(sqrtD) / std::log(X), k, sqrtD};
}

double lambda_d(const FactoredModulus& d, const SieveParams& params) {
  if (d.value == 1) return 1.0;
  if (!d.squarefree || static_cast<double>(d.value) > params.sqrtD) return 0.0;
  const double ratio = std::log(params.sqrtD / static_cast<double>(d.value)) / std::log(params.sqrtD);
  return d.mu * ipow(ratio, params.k);
}

double lambda_d(u64 d, const SieveParams& params) {
  if (d == 0) throw Error(Errc::domain_error, "lambda_d: d = 0");
  if (d == 1) return 1.0;
  if (static_cast<double>(d) > params.sqrtD) return 0.0;
  return lambda_d(FactoredModulus::factor(d), params);
}

WeightVector::WeightVector(const SieveParams& params) {
  const auto limit = static_cast<u64>(std::floor(std::max(1.0, params.sqrtD)));
  // mu^2 sieve up to sqrtD
  std::vector<bool> squarefree(limit + 1, true);
  for (u64 p = 2; p * p <= limit; ++p)
    for (u64 j = p * p; j <= limit; j += p * p) squarefree[j] = false;
  for (u64 d = 1; d <= limit; ++d)
    if (squarefree[d]) entries_.emplace_back(d, lambda_d(d, params));
}

double WeightVector::operator[](u64 d) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), d,
                             [](const std::pair<u64, double>& e, u64 key) { return e.first < key; });
  return (it != entries_.end() && it->first == d) ? it->second : 0.0;
}

double xi(const FactoredModulus& d, const SieveParams& params) {
  if (!d.squarefree) throw Error(Errc::not_squarefree, "xi: " + d.to_string());
  const int w = d.omega;
  u64 total = 1;
  for (int j = 0; j < w; ++j) total *= 3;
  double sum = 0.0;
  for (u64 code = 0; code < total; ++code) {
    u64 c = code;
    std::vector<u64> p1, p2;
    for (int j = 0; j < w; ++j) {
      const u64 p = d.primes[j].prime;
      switch (c % 3) {
        case 0: p1.push_back(p); break;
        case 1: p2.push_back(p); break;
        default: p1.push_back(p); p2.push_back(p); break;
      }
      c /= 3;
    }
    sum += lambda_d(FactoredModulus::from_primes(p1), params) * lambda_d(FactoredModulus::from_primes(p2), params);
  }
  return sum;
}

double sieve_weight(const FactoredModulus& n, const SieveParams& params) {
  if (!n.squarefree) throw Error(Errc::not_squarefree, "sieve_weight: " + n.to_string());
  const int w = n.omega;
  double sum = 0.0;
  std::vector<u64> primes;
  for (u64 mask = 0; mask < (1ULL << w); ++mask) {
    primes.clear();
    for (int j = 0; j < w; ++j)
      if (mask >> j & 1) primes.push_back(n.primes[j].prime);
    sum += lambda_d(FactoredModulus::from_primes(primes), params);
  }
  return sum;
}

double subset_sum_L(double gamma, int k, std::span<const double> alphas) {
  const std::size_t n = alphas.size();
  double total = 0.0;
  for (u64 mask = 0; mask < (1ULL << n); ++mask) {
    double s = 0.0;
    int size = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) {
        s += alphas[j];
        ++size;
      }
    }
    if (s < gamma) {
      const double term = ipow(1.0 - s / gamma, k);
      total += size % 2 == 0 ? term : -term;
    }
  }
  return total;
}

}  // namespace ksign
