#include "ksign/certify.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <optional>
#include <thread>

#include "ksign/error.hpp"

namespace ksign {

namespace {

using boost::multiprecision::cpp_int;
using Float100 = boost::multiprecision::cpp_bin_float_100;

cpp_int factorial_int(int n) {
  cpp_int f = 1;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

cpp_int binom_int(int n, int r) {
  if (r < 0 || r > n) return 0;
  cpp_int b = 1;
  for (int j = 1; j <= r; ++j) b = b * (n - r + j) / j;
  return b;
}

double to_double(const Rational& q) {
  const Float100 v = Float100(boost::multiprecision::numerator(q)) / Float100(boost::multiprecision::denominator(q));
  return v.convert_to<double>();
}

double factorial_d(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

}  // namespace

std::vector<Rational> rk_coefficients(int k) {
  if (k < 1) throw Error(Errc::domain_error, "rk_coefficients: k < 1");
  std::vector<Rational> c(k, Rational(0));
  for (int j = 1; j <= k; ++j) {
    const cpp_int outer = binom_int(k, j) * binom_int(2 * (k - j), k - j);
    const cpp_int fj = factorial_int(j - 1);
    for (int i = 0; i < j; ++i) {
      Rational term(outer * binom_int(j - 1, i) * factorial_int(j + i - 1), fj * fj * factorial_int(2 * k - j + i));
      if (i % 2 == 1) term = -term;
      c[j - i - 1] += term;
    }
  }
  return c;
}

Rational rk_exact(int k, const Rational& y) {
  if (y <= 0) throw Error(Errc::domain_error, "rk_exact: y <= 0");
  const auto c = rk_coefficients(k);
  const Rational inv = 1 / y;
  Rational pw = inv;
  Rational sum = 0;
  for (int p = 1; p <= k; ++p) {
    sum += c[p - 1] * pw;
    pw *= inv;
  }
  return sum;
}

double rk_poly(int k, double y) {
  if (!(y > 0.0)) throw Error(Errc::domain_error, "rk_poly: y <= 0");
  const auto c = rk_coefficients(k);
  // Horner in 1/y
  const double inv = 1.0 / y;
  double acc = 0.0;
  for (int p = k; p >= 1; --p) acc = (acc + to_double(c[p - 1])) * inv;
  return acc;
}

double rk_poly_float(int k, double y) {
  if (!(y > 0.0)) throw Error(Errc::domain_error, "rk_poly_float: y <= 0");
  if (k < 1) throw Error(Errc::domain_error, "rk_poly_float: k < 1");
  auto binom = [](int n, int r) { return std::round(std::tgamma(n + 1.0) / (std::tgamma(r + 1.0) * std::tgamma(n - r + 1.0))); };
  double sum = 0.0;
  for (int j = 1; j <= k; ++j) {
    for (int i = 0; i < j; ++i) {
      double t = binom(k, j) * binom(j - 1, i) * binom(2 * (k - j), k - j);
      t *= std::tgamma(j + i) / (std::tgamma(j) * std::tgamma(j));
      t /= std::tgamma(2.0 * k - j + i + 1.0);
      t *= std::pow(y, -(j - i));
      sum += i % 2 == 0 ? t : -t;
    }
  }
  return sum;
}

double omega_exponent(int k, double rho) {
  if (k <= 2) throw Error(Errc::domain_error, "omega_bound: k <= 2 makes log(k/2) <= 0");
  if (!(rho > 1.0)) throw Error(Errc::domain_error, "omega_bound: rho <= 1");
  return std::log(rho) / std::log(k / 2.0);
}

int omega_bound(int k, double rho) {
  const double e = omega_exponent(k, rho);
  if (!(e < static_cast<double>(std::numeric_limits<int>::max())))
    throw Error(Errc::range_error, "omega_bound: exponent overflows");
  return static_cast<int>(std::floor(e));
}

CertificateReport check_inequality(int k, double gamma, double rho, const std::array<IntegralEstimate, 4>& a_values,
                                   const std::array<double, 4>& c_values) {
  if (k < 3) throw Error(Errc::domain_error, "check_inequality: k < 3");
  CertificateReport r;
  r.k = k;
  r.gamma = gamma;
  r.rho = rho;
  r.a_values = a_values;
  r.c_values = c_values;
  r.rk_value = rk_poly(k, gamma);
  double weighted = 0.0;
  for (int i = 2; i <= 5; ++i) weighted += std::ldexp(a_values[i - 2].value * c_values[i - 2], i);
  const double kf = factorial_d(k);
  r.rhs = 2.0 * kf * kf * r.rk_value;
  r.lhs = rho * weighted;
  r.rho_star = weighted > 0.0 ? r.rhs / weighted : std::numeric_limits<double>::infinity();
  r.verdict = r.lhs > r.rhs && gamma > 0.0 && gamma <= 0.25;
  if (rho > 1.0) {
    r.omega_exponent = omega_exponent(k, rho);
    r.omega_bound = omega_bound(k, rho);
  }
  return r;
}

std::array<IntegralEstimate, 4> compute_a_values(double gamma, int k, double alpha_min, const QuadratureConfig& base) {
  std::array<IntegralEstimate, 4> out{};
  for (int i = 2; i <= 5; ++i) {
    QuadratureConfig cfg = QuadratureConfig::defaults_for(i);
    cfg.seed = base.seed;
    cfg.workers = base.workers;
    if (cfg.method != QuadratureMethod::adaptive) cfg.samples = base.samples;
    RegionSpec spec{i, 0.0, alpha_min};
    out[i - 2] = compute_ai(i, gamma, k, spec, cfg);
  }
  return out;
}

CertificateReport optimize(const std::vector<double>& gamma_grid, const std::vector<int>& k_range,
                           const AProvider& a_provider, const std::array<double, 4>& c_values, int workers) {
  if (gamma_grid.empty() || k_range.empty()) throw Error(Errc::domain_error, "optimize: empty grid");
  struct Cell {
    int k;
    double gamma;
  };
  std::vector<Cell> cells;
  for (int k : k_range)
    for (double g : gamma_grid) cells.push_back({k, g});
  std::vector<std::optional<CertificateReport>> results(cells.size());

  auto eval = [&](std::size_t c) {
    const auto [k, gamma] = cells[c];
    const auto a = a_provider(k, gamma);
    const CertificateReport probe = check_inequality(k, gamma, 1.0, a, c_values);
    if (!std::isfinite(probe.rho_star) || !(probe.rho_star > 0.0)) return;
    const double rho = std::max(probe.rho_star * (1.0 + 1e-6), 1.0 + 1e-6);
    if (omega_exponent(k, rho) >= static_cast<double>(std::numeric_limits<int>::max())) return;
    results[c] = check_inequality(k, gamma, rho, a, c_values);
  };
  const int W = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
  auto run = [&](int w) {
    for (std::size_t c = w; c < cells.size(); c += W) eval(c);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < W; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  const CertificateReport* best = nullptr;
  for (const auto& r : results) {
    if (!r) continue;
    if (!best || r->omega_bound < best->omega_bound ||
        (r->omega_bound == best->omega_bound &&
         (r->k < best->k || (r->k == best->k && r->gamma > best->gamma))))
      best = &*r;
  }
  if (!best) throw Error(Errc::no_feasible_point, "optimize: every grid cell overflows the omega bound");
  return *best;
}

std::string report_to_json(const CertificateReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["gamma"] = r.gamma;
  j["rho"] = r.rho;
  auto& a = j["a_values"] = nlohmann::ordered_json::array();
  for (const auto& e : r.a_values) a.push_back({{"value", e.value}, {"error", e.error}, {"evaluations", e.evaluations}});
  j["c_values"] = r.c_values;
  j["rk_value"] = r.rk_value;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["verdict"] = r.verdict;
  j["omega_bound"] = r.omega_bound;
  j["omega_exponent"] = r.omega_exponent;
  j["rho_star"] = r.rho_star;
  j["alpha_min"] = r.alpha_min;
  j["quadrature"] = r.quadrature;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["c_grid"] = r.c_grid;
  return j.dump(2);
}

CertificateReport report_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  CertificateReport r;
  r.k = j.at("k").get<int>();
  r.gamma = j.at("gamma").get<double>();
  r.rho = j.at("rho").get<double>();
  const auto& a = j.at("a_values");
  if (a.size() != 4) throw Error(Errc::domain_error, "report_from_json: a_values must have 4 entries");
  for (std::size_t i = 0; i < 4; ++i) {
    r.a_values[i].value = a[i].at("value").get<double>();
    r.a_values[i].error = a[i].at("error").get<double>();
    r.a_values[i].evaluations = a[i].at("evaluations").get<std::uint64_t>();
  }
  r.c_values = j.at("c_values").get<std::array<double, 4>>();
  r.rk_value = j.at("rk_value").get<double>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.verdict = j.at("verdict").get<bool>();
  r.omega_bound = j.at("omega_bound").get<int>();
  r.omega_exponent = j.at("omega_exponent").get<double>();
  r.rho_star = j.at("rho_star").get<double>();
  r.alpha_min = j.at("alpha_min").get<double>();
  r.quadrature = j.at("quadrature").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.samples = j.at("samples").get<std::uint64_t>();
  r.c_grid = j.at("c_grid").get<int>();
  return r;
}

}  // namespace ksign
