#include "ksign/report.hpp"

#include <numbers>
#include <ostream>

#ifndef KSIGN_VERSION
#define KSIGN_VERSION "0.0.0"
#endif

namespace ksign {

std::string_view version() { return KSIGN_VERSION; }

ordered_json to_json(const SieveParams& p) {
  return {{"X", p.X}, {"gamma", p.gamma}, {"k", p.k}, {"sqrtD", p.sqrtD}};
}

ordered_json to_json(const QuadratureConfig& cfg) {
  ordered_json j{{"method", method_name(cfg.method)}, {"seed", cfg.seed}};
  if (cfg.method == QuadratureMethod::adaptive) {
    j["rel_error_target"] = cfg.rel_error_target;
    j["rect_width"] = cfg.rect_width;
  } else {
    j["samples"] = cfg.samples;
    j["workers"] = cfg.workers;
    if (cfg.method == QuadratureMethod::quasi_random) j["replicates"] = cfg.replicates;
  }
  return j;
}

ordered_json to_json(const IntegralEstimate& e) {
  return {{"value", e.value}, {"error", e.error}, {"evaluations", e.evaluations}};
}

ordered_json to_json(const CensusRecord& r) {
  ordered_json j;
  j["x_range"] = {r.lo, r.hi};
  j["X"] = r.X;
  j["modulus_filter"] = {{"max_omega", r.max_omega}, {"squarefree", r.squarefree_only}};
  j["params"] = to_json(r.params);
  j["rho"] = r.rho;
  j["positives"] = r.positives;
  j["negatives"] = r.negatives;
  j["zeros"] = r.zeros;
  j["filtered"] = r.filtered;
  j["positive_ratio"] = r.positive_ratio();
  j["negative_ratio"] = r.negative_ratio();
  j["max_bound_ratio"] = r.max_bound_ratio;
  j["h1"] = r.h1.value();
  j["h2"] = r.h2.value();
  j["h3"] = r.h3.value();
  j["h2_signed"] = r.h2_signed.value();
  j["h_plus"] = r.h_plus.value();
  j["h_minus"] = r.h_minus.value();
  j["h3_over_X"] = r.h3.value() / static_cast<double>(r.X);
  j["recombination_residual"] = r.recombination_residual();
  j["decomposition_holds"] = r.decomposition_holds();
  return j;
}

ordered_json to_json(const SatoTateReport& r) {
  return {{"prime", r.prime}, {"ks_distance", r.ks_distance}, {"counts", r.counts}, {"expected", r.expected}};
}

ordered_json to_json(const FactorPairReport& r) {
  return {{"mean_abs_c", r.mean_abs_c},
          {"pairs", r.pairs},
          {"primes1", r.primes1.size()},
          {"primes2", r.primes2.size()},
          {"c2_lower_bound", 0.11109},
          {"identity_checked", r.identity_checked},
          {"identity_max_error", r.identity_max_error},
          {"bins", r.bins},
          {"joint_histogram", r.joint_histogram}};
}

void write_census_csv(std::ostream& os, const CensusRecord& r) {
  os << "omega,positives,negatives,zeros\n";
  for (std::size_t w = 0; w < r.by_omega.size(); ++w) {
    const auto& t = r.by_omega[w];
    if (t[0] + t[1] + t[2] == 0) continue;
    os << w << ',' << t[0] << ',' << t[1] << ',' << t[2] << '\n';
  }
  os << "all," << r.positives << ',' << r.negatives << ',' << r.zeros << '\n';
}

void write_sato_tate_csv(std::ostream& os, const SatoTateReport& r) {
  os.precision(17);
  os << "bin,theta_lo,theta_hi,count,expected\n";
  const auto bins = r.counts.size();
  for (std::size_t b = 0; b < bins; ++b)
    os << b << ',' << std::numbers::pi * b / bins << ',' << std::numbers::pi * (b + 1) / bins << ',' << r.counts[b]
       << ',' << r.expected[b] << '\n';
}

void write_pair_histogram_csv(std::ostream& os, const FactorPairReport& r) {
  os << "bin_c12,bin_c21,count\n";
  for (int a = 0; a < r.bins; ++a)
    for (int b = 0; b < r.bins; ++b) os << a << ',' << b << ',' << r.joint_histogram[a * r.bins + b] << '\n';
}

}  // namespace ksign
