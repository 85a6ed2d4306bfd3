#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ksign/integrals.hpp"

namespace ksign {

using Rational = boost::multiprecision::cpp_rational;

/// Coefficients of R_k(y) = sum_{p=1..k} c_p y^{-p}; entry p-1 holds c_p.
/// R_k(y) = sum_{j=1..k} sum_{i=0..j-1} binom(k,j) binom(j-1,i) binom(2(k-j),k-j)
///          (j+i-1)! / (j-1)!^2 (-1)^i / (2k-j+i)! y^{-(j-i)}.
std::vector<Rational> rk_coefficients(int k);

/// Exact R_k(y) at rational y > 0.
Rational rk_exact(int k, const Rational& y);

/// R_k(y) from the exact coefficients, converted to double once each.
double rk_poly(int k, double y);

/// Naive double-precision evaluation of the double sum (reference only).
double rk_poly_float(int k, double y);

/// log(rho) / log(k/2) and its floor; DomainError for k <= 2 or rho <= 1.
double omega_exponent(int k, double rho);
int omega_bound(int k, double rho);

struct CertificateReport {
  int k = 6;
  double gamma = 0.25;
  double rho = 0.0;
  std::array<IntegralEstimate, 4> a_values{};  // A_2..A_5
  std::array<double, 4> c_values{};            // C_2..C_5
  double rk_value = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool verdict = false;
  int omega_bound = 0;
  double omega_exponent = 0.0;
  /// rhs / sum 2^i A_i C_i: the smallest rho that could satisfy the inequality.
  double rho_star = 0.0;

  // provenance
  double alpha_min = 0.0;
  std::string quadrature;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  int c_grid = 0;

  friend bool operator==(const CertificateReport&, const CertificateReport&) = default;
};

/// Fills lhs = rho sum_{i=2..5} 2^i A_i C_i, rhs = 2 k!^2 R_k(gamma), and the
/// verdict (lhs > rhs and 0 < gamma <= 1/4). DomainError for k < 3.
CertificateReport check_inequality(int k, double gamma, double rho, const std::array<IntegralEstimate, 4>& a_values,
                                   const std::array<double, 4>& c_values);

/// A_2..A_5 at (gamma, k): per-i default methods (see QuadratureConfig::defaults_for)
/// with the seed, worker count and sample count of `base` and cutoff alpha_min.
std::array<IntegralEstimate, 4> compute_a_values(double gamma, int k, double alpha_min, const QuadratureConfig& base);

using AProvider = std::function<std::array<IntegralEstimate, 4>(int k, double gamma)>;

/// Minimal-rho search over the grid; the winner minimizes
/// omega_bound(k, rho* (1 + 1e-6)), ties to smaller k then larger gamma.
/// The returned report is evaluated at rho = rho* (1 + 1e-6).
CertificateReport optimize(const std::vector<double>& gamma_grid, const std::vector<int>& k_range,
                           const AProvider& a_provider, const std::array<double, 4>& c_values, int workers = 1);

std::string report_to_json(const CertificateReport& r);
CertificateReport report_from_json(std::string_view text);

}  // namespace ksign
