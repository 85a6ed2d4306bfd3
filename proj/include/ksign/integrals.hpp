#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ksign {

/// constant + coeff . alpha > 0 (or >= 0 when !strict), over the free
/// variables alpha_2..alpha_i.
struct LinearConstraint {
  double constant = 0.0;
  std::vector<double> coeff;
  bool strict = true;

  double eval(std::span<const double> alphas) const;
  bool holds(std::span<const double> alphas) const;
};

/// Integration region R_i for i in [2, 5]. The free variables are
/// alpha_2..alpha_i; alpha_1 = 1 - (alpha_2 + ... + alpha_i).
struct RegionSpec {
  int i = 2;
  /// Slack in R_2; the nominal value underflows a double, so 0 is used.
  double eta = 0.0;
  /// Lower cutoff applied to every alpha_j, including alpha_1.
  double alpha_min = 1e-3;

  int dim() const { return i - 1; }
  /// Full constraint system: the printed inequalities of R_i, the open unit
  /// box, and the cutoffs.
  std::vector<LinearConstraint> constraints() const;
};

bool region_contains(const RegionSpec& spec, std::span<const double> free_alphas);

/// L_i^2 / (alpha_1 alpha_2 ... alpha_i) inside R_i, zero outside.
double ai_integrand(double gamma, int k, const RegionSpec& spec, std::span<const double> free_alphas);

enum class QuadratureMethod { monte_carlo, quasi_random, adaptive };

std::string_view method_name(QuadratureMethod m);
QuadratureMethod parse_method(std::string_view name);

struct QuadratureConfig {
  QuadratureMethod method = QuadratureMethod::adaptive;
  std::uint64_t samples = 1u << 22;
  std::uint64_t seed = 20140101;
  double rel_error_target = 1e-8;
  /// Independent randomized shifts for quasi-random error estimation.
  int replicates = 16;
  /// Sample-range partitions; results are deterministic for a fixed count.
  int workers = 1;
  /// Max rows written to the optional trace.
  std::uint64_t trace_limit = 10000;
  /// Initial rectangle width for adaptive-rectangles; each rectangle is
  /// refined by Gauss-Kronrod bisection until rel_error_target is met.
  double rect_width = 1.0 / 16;

  /// adaptive-rectangles for i in {2, 3}, quasi-random otherwise.
  static QuadratureConfig defaults_for(int i);
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
  std::uint64_t evaluations = 0;

  friend bool operator==(const IntegralEstimate&, const IntegralEstimate&) = default;
};

/// A_i(gamma, k) = int_{R_i} L_i^2 / (alpha_2...alpha_i (1 - alpha_2 - ... - alpha_i)).
/// When trace is non-null, writes CSV rows "alpha_2,...,alpha_i,value".
/// adaptive-rectangles supports i <= 4.
IntegralEstimate compute_ai(int i, double gamma, int k, const RegionSpec& spec, const QuadratureConfig& cfg,
                            std::ostream* trace = nullptr);

}  // namespace ksign
