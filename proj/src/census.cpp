#include "ksign/census.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <thread>

#include "ksign/error.hpp"
#include "ksign/kernels.hpp"
#include "ksign/measures.hpp"

namespace ksign {

const SmoothWindow& SmoothWindow::standard() {
  static const SmoothWindow w = [] {
    SmoothWindow s;
    s.mellin_at_1 = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(s, 1.0, 2.0, 20, 1e-10);
    return s;
  }();
  return w;
}

double SmoothWindow::operator()(double x) const {
  if (!(x > 1.0 && x < 2.0)) return 0.0;
  return std::exp(-1.0 / ((x - 1.0) * (2.0 - x)));
}

void CensusRecord::merge(const CensusRecord& other) {
  if (other.lo != hi || other.X != X || other.max_omega != max_omega || other.rho != rho)
    throw Error(Errc::domain_error, "CensusRecord::merge: records are not adjacent runs of one census");
  hi = other.hi;
  positives += other.positives;
  negatives += other.negatives;
  zeros += other.zeros;
  filtered += other.filtered;
  for (std::size_t w = 0; w < by_omega.size(); ++w)
    for (int s = 0; s < 3; ++s) by_omega[w][s] += other.by_omega[w][s];
  max_bound_ratio = std::max(max_bound_ratio, other.max_bound_ratio);
  h1.merge(other.h1);
  h2.merge(other.h2);
  h3.merge(other.h3);
  h2_signed.merge(other.h2_signed);
  h_plus.merge(other.h_plus);
  h_minus.merge(other.h_minus);
}

double CensusRecord::recombination_residual() const {
  const double H1 = h1.value(), H2 = h2.value(), H3 = h3.value(), H2s = h2_signed.value();
  const double plus = rho * (H1 + H3) - (H2 + H2s);
  const double minus = rho * (H1 - H3) - (H2 - H2s);
  const double scale = std::max(1e-300, rho * H1 + H2);
  return std::max(std::fabs(h_plus.value() - plus), std::fabs(h_minus.value() - minus)) / scale;
}

bool CensusRecord::decomposition_holds() const {
  const double H1 = h1.value(), H2 = h2.value(), H3 = h3.value();
  const double slack = 1e-12 * std::max(1.0, rho * H1 + 2.0 * H2);
  return h_plus.value() >= rho * H1 - 2.0 * H2 + rho * H3 - slack &&
         h_minus.value() >= rho * H1 - 2.0 * H2 - rho * H3 - slack;
}

double CensusRecord::positive_ratio() const {
  return static_cast<double>(positives) * std::log(static_cast<double>(X)) / static_cast<double>(X);
}

double CensusRecord::negative_ratio() const {
  return static_cast<double>(negatives) * std::log(static_cast<double>(X)) / static_cast<double>(X);
}

namespace {

constexpr int kMaxFactors = 16;

// Factorizations of every n in [a, b) by sieving with primes up to sqrt(b).
struct Segment {
  u64 a = 0;
  std::vector<u64> rem;
  std::vector<std::array<u64, kMaxFactors>> factors;
  std::vector<std::uint8_t> count;
  std::vector<bool> squarefree;

  Segment(u64 a_, u64 b, const std::vector<u32>& primes) : a(a_) {
    const u64 len = b - a;
    rem.resize(len);
    factors.resize(len);
    count.assign(len, 0);
    squarefree.assign(len, true);
    for (u64 j = 0; j < len; ++j) rem[j] = a + j;
    for (u32 p32 : primes) {
      const u64 p = p32;
      if (p * p >= b) break;
      for (u64 n = (a + p - 1) / p * p; n < b; n += p) {
        const u64 j = n - a;
        rem[j] /= p;
        if (rem[j] % p == 0) {
          squarefree[j] = false;
          while (rem[j] % p == 0) rem[j] /= p;
        }
        if (count[j] < kMaxFactors) factors[j][count[j]++] = p;
      }
    }
    for (u64 j = 0; j < len; ++j)
      if (rem[j] > 1 && count[j] < kMaxFactors) factors[j][count[j]++] = rem[j];
  }
};

void census_segment(u64 lo, u64 hi, CensusRecord& rec, const SmoothWindow& window, const PrimeKloosterman& kl,
                    const CensusOptions& opts, const std::vector<u32>& primes) {
  const double half_k = rec.params.k / 2.0;
  const double Xd = static_cast<double>(rec.X);
  const bool trivial_weights = rec.params.sqrtD < 2.0;
  for (u64 a = lo + 1; a <= hi; a += opts.segment) {
    const u64 b = std::min(hi + 1, a + opts.segment);
    Segment seg(a, b, primes);
    for (u64 n = a; n < b; ++n) {
      const u64 j = n - a;
      if (!seg.squarefree[j] || seg.count[j] > rec.max_omega) {
        ++rec.filtered;
        continue;
      }
      const auto fm = FactoredModulus::from_primes(std::span<const u64>(seg.factors[j].data(), seg.count[j]));
      const double S = kl.s11(fm);
      const double sqrt_n = std::sqrt(static_cast<double>(n));
      const double ratio = std::fabs(S) / (std::ldexp(sqrt_n, fm.omega));
      rec.max_bound_ratio = std::max(rec.max_bound_ratio, ratio);
      if (ratio > 1.0 + 1e-9)
        throw Error(Errc::weil_violation, "census: |S(1,1;n)| exceeds 2^omega sqrt(n) at n = " + fm.to_string());

      const int sign = std::fabs(S) < opts.zero_threshold ? 2 : (S > 0 ? 0 : 1);
      if (sign == 0)
        ++rec.positives;
      else if (sign == 1)
        ++rec.negatives;
      else
        ++rec.zeros;
      ++rec.by_omega[std::min(fm.omega, kMaxOmegaTracked)][sign];

      const double W = trivial_weights ? 1.0 : sieve_weight(fm, rec.params);
      const double w = window(static_cast<double>(n) / Xd) / sqrt_n * W * W;
      if (w == 0.0) continue;
      const double absS = std::fabs(S);
      const double kw = std::pow(half_k, fm.omega);
      rec.h1.add(w * absS);
      rec.h2.add(w * absS * kw);
      rec.h3.add(w * S);
      rec.h2_signed.add(w * S * kw);
      rec.h_plus.add(w * (absS + S) * (rec.rho - kw));
      rec.h_minus.add(w * (absS - S) * (rec.rho - kw));
    }
  }
}

}  // namespace

CensusRecord sign_census_range(u64 lo, u64 hi, u64 X, int max_omega, const SieveParams& params, double rho,
                               const SmoothWindow& window, const CensusOptions& opts) {
  if (max_omega < 1) throw Error(Errc::domain_error, "sign_census: max_omega < 1");
  if (hi < lo) throw Error(Errc::domain_error, "sign_census: hi < lo");
  if (hi - lo > opts.budget)
    throw Error(Errc::range_too_large, "sign_census: " + std::to_string(hi - lo) + " moduli exceed the budget of " +
                                           std::to_string(opts.budget));
  if (hi >= kMaxFactorable) throw Error(Errc::range_too_large, "sign_census: moduli beyond the factorable range");
  if (opts.segment == 0) throw Error(Errc::domain_error, "sign_census: zero segment length");

  static const PrimeKloosterman kl(4096);
  const auto primes = primes_up_to(static_cast<u32>(std::sqrt(static_cast<double>(hi))) + 2);

  auto blank = [&](u64 a, u64 b) {
    CensusRecord r;
    r.X = X;
    r.lo = a;
    r.hi = b;
    r.max_omega = max_omega;
    r.params = params;
    r.rho = rho;
    return r;
  };
  const int W = std::max<int>(1, std::min<u64>(opts.workers, std::max<u64>(1, (hi - lo) / 1024)));
  std::vector<CensusRecord> parts;
  for (int w = 0; w < W; ++w) parts.push_back(blank(lo + (hi - lo) * w / W, lo + (hi - lo) * (w + 1) / W));
  std::vector<std::exception_ptr> errors(W);
  auto run = [&](int w) {
    try {
      census_segment(parts[w].lo, parts[w].hi, parts[w], window, kl, opts, primes);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < W; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  CensusRecord out = std::move(parts[0]);
  for (int w = 1; w < W; ++w) out.merge(parts[w]);
  return out;
}

CensusRecord sign_census(u64 X, int max_omega, const SieveParams& params, double rho, const SmoothWindow& window,
                         const CensusOptions& opts) {
  if (X < 100) throw Error(Errc::domain_error, "sign_census: X < 100");
  return sign_census_range(X, 2 * X, X, max_omega, params, rho, window, opts);
}

double sato_tate_cdf(double theta) {
  if (theta <= 0.0) return 0.0;
  if (theta >= std::numbers::pi) return 1.0;
  // mass of [0, theta] = mass of cos in [cos theta, 1]
  const double c = std::cos(theta);
  const double half = 0.5 * (1.0 - mu1_interval(std::fabs(c)));
  return c >= 0.0 ? half : 1.0 - half;
}

namespace {

void require_prime(u64 p, const char* who) {
  if (!is_prime(p)) throw Error(Errc::domain_error, std::string(who) + ": " + std::to_string(p) + " is not prime");
}

// S(a, 1; p) / (2 sqrt p) for a in [0, p), Weil-checked.
std::vector<double> normalized_sweep(u64 p) {
  auto s = kloosterman_sweep(1, p);
  const double bound = weil_bound(p);
  for (auto& v : s) {
    if (std::fabs(v) > bound + 1e-6)
      throw Error(Errc::weil_violation, "sweep value exceeds 2 sqrt(p) for p = " + std::to_string(p));
    v = std::clamp(v / bound, -1.0, 1.0);
  }
  return s;
}

}  // namespace

SatoTateReport vertical_sato_tate(u64 p, int bins) {
  if (p < 100) throw Error(Errc::domain_error, "vertical_sato_tate: p < 100");
  require_prime(p, "vertical_sato_tate");
  if (bins < 1) throw Error(Errc::domain_error, "vertical_sato_tate: bins < 1");
  const auto x = normalized_sweep(p);
  std::vector<double> theta(x.begin() + 1, x.end());
  for (auto& t : theta) t = std::acos(t);
  std::sort(theta.begin(), theta.end());

  SatoTateReport r;
  r.prime = p;
  const double n = static_cast<double>(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double F = sato_tate_cdf(theta[i]);
    r.ks_distance = std::max({r.ks_distance, (i + 1) / n - F, F - i / n});
  }
  r.counts.assign(bins, 0);
  for (double t : theta) ++r.counts[std::min(bins - 1, static_cast<int>(t / std::numbers::pi * bins))];
  r.expected.resize(bins);
  for (int b = 0; b < bins; ++b)
    r.expected[b] = n * (sato_tate_cdf(std::numbers::pi * (b + 1) / bins) - sato_tate_cdf(std::numbers::pi * b / bins));
  return r;
}

double weyl_sum(u64 p, int k, bool twist) {
  require_prime(p, "weyl_sum");
  if (k < 1) throw Error(Errc::domain_error, "weyl_sum: k < 1");
  const auto x = normalized_sweep(p);
  std::vector<double> pts(p - 1);
  for (u64 m = 1; m < p; ++m) {
    u64 idx = m;
    if (twist) {
      const u64 inv = *inverse_mod(m, p);
      idx = mulmod(inv, inv, p);
    }
    pts[m - 1] = x[idx];
  }
  return kernels::chebyshev_u_sum(k, pts);
}

PrimeInputSum prime_input_sum(u64 p, int k, u64 N) {
  require_prime(p, "prime_input_sum");
  if (k < 0) throw Error(Errc::domain_error, "prime_input_sum: k < 0");
  if (!(static_cast<double>(N) > std::pow(static_cast<double>(p), 0.75)))
    throw Error(Errc::range_error, "prime_input_sum: N <= p^{3/4}");
  if (2 * N >= kPrimeTableBound * 64ULL) throw Error(Errc::range_too_large, "prime_input_sum: N too large");
  const auto x = normalized_sweep(p);
  std::vector<double> pts;
  for (u32 q : primes_up_to(static_cast<u32>(2 * N))) {
    if (q <= N || q % p == 0) continue;
    const u64 inv = *inverse_mod(q % p, p);
    pts.push_back(x[mulmod(inv, inv, p)]);
  }
  PrimeInputSum r;
  r.count = pts.size();
  r.value = k == 0 ? static_cast<double>(pts.size()) : kernels::chebyshev_u_sum(k, pts);
  r.normalized = r.value / static_cast<double>(N);
  return r;
}

FactorPairReport factor_pair_census(double P1, double P2, int bins, u64 identity_checks) {
  if (!(P1 > P2 && P2 > 10.0)) throw Error(Errc::domain_error, "factor_pair_census: need P1 > P2 > 10");
  if (bins < 1) throw Error(Errc::domain_error, "factor_pair_census: bins < 1");
  if (P1 * P1 > 4e12) throw Error(Errc::range_too_large, "factor_pair_census: P1 too large");
  const double L = std::log(P1 * P2);
  auto interval_primes = [&](double P) {
    std::vector<u64> out;
    const u64 a = static_cast<u64>(std::floor(P));
    const u64 b = static_cast<u64>(std::floor(P + P / L));
    for (u64 n = a + 1; n <= b; ++n)
      if (is_prime(n)) out.push_back(n);
    if (out.empty())
      throw Error(Errc::empty_interval, "factor_pair_census: no prime in (" + std::to_string(P) + ", " +
                                            std::to_string(P + P / L) + "]");
    return out;
  };
  FactorPairReport r;
  r.primes1 = interval_primes(P1);
  r.primes2 = interval_primes(P2);
  r.bins = bins;
  r.joint_histogram.assign(static_cast<std::size_t>(bins) * bins, 0);

  // One sweep table per prime: C(m, p) = S(m^-2, 1; p) / (2 sqrt p).
  auto tables = [](const std::vector<u64>& ps) {
    std::vector<std::vector<double>> t;
    for (u64 p : ps) t.push_back(normalized_sweep(p));
    return t;
  };
  const auto t1 = tables(r.primes1);
  const auto t2 = tables(r.primes2);
  auto c_of = [](u64 m, u64 p, const std::vector<double>& table) {
    const u64 inv = *inverse_mod(m % p, p);
    return table[mulmod(inv, inv, p)];
  };
  auto bin_of = [&](double c) { return std::min(bins - 1, static_cast<int>((c + 1.0) / 2.0 * bins)); };

  CompensatedSum total;
  for (std::size_t a = 0; a < r.primes1.size(); ++a) {
    for (std::size_t b = 0; b < r.primes2.size(); ++b) {
      const u64 p1 = r.primes1[a];
      const u64 p2 = r.primes2[b];
      if (p1 == p2) continue;
      const double c12 = c_of(p1, p2, t2[b]);  // C(p1, p2)
      const double c21 = c_of(p2, p1, t1[a]);  // C(p2, p1)
      total.add(std::fabs(c12 * c21));
      ++r.joint_histogram[static_cast<std::size_t>(bin_of(c12)) * bins + bin_of(c21)];
      ++r.pairs;
      if (r.identity_checked < identity_checks) {
        const u64 n = p1 * p2;
        const double direct = std::fabs(kloosterman_direct(1, 1, n)) / (4.0 * std::sqrt(static_cast<double>(n)));
        r.identity_max_error = std::max(r.identity_max_error, std::fabs(direct - std::fabs(c12 * c21)));
        ++r.identity_checked;
      }
    }
  }
  r.mean_abs_c = r.pairs ? total.value() / static_cast<double>(r.pairs) : 0.0;
  return r;
}

}  // namespace ksign
