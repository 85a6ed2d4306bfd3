// ksign: command-line front end. Every subcommand produces one report,
// written as JSON (canonical), CSV (tabular data only) or short text.
//
// Exit status: 0 success, 1 usage or validation error, 2 certification
// verdict false.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ksign/arith.hpp"
#include "ksign/census.hpp"
#include "ksign/certify.hpp"
#include "ksign/error.hpp"
#include "ksign/exp_sums.hpp"
#include "ksign/integrals.hpp"
#include "ksign/measures.hpp"
#include "ksign/report.hpp"
#include "ksign/residues.hpp"

namespace {

using ksign::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerdictFalse = 2;

struct Globals {
  std::string out;
  std::string format = "text";
  std::uint64_t seed = 20140101;
  int workers = 1;
};

struct Output {
  ordered_json params;  // resolved subcommand parameters
  ordered_json result;
  std::string text;
  std::string csv;  // empty: no tabular form
  int exit_code = kExitOk;
};

std::string num(double v, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Relative paths land under $KSIGN_OUTPUT_DIR when it is set.
fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative())
    if (const char* dir = std::getenv("KSIGN_OUTPUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

std::vector<double> default_cutoffs() { return {1e-2, 1e-3, 1e-4}; }

ksign::QuadratureConfig base_quadrature(const Globals& g, std::uint64_t samples) {
  ksign::QuadratureConfig cfg;
  cfg.seed = g.seed;
  cfg.workers = g.workers;
  cfg.samples = samples;
  return cfg;
}

ordered_json quadrature_provenance(std::uint64_t seed, std::uint64_t samples) {
  ordered_json q = ordered_json::array();
  for (int i = 2; i <= 5; ++i) {
    auto cfg = ksign::QuadratureConfig::defaults_for(i);
    cfg.seed = seed;
    if (cfg.method != ksign::QuadratureMethod::adaptive) cfg.samples = samples;
    auto j = ksign::to_json(cfg);
    j["i"] = i;
    q.push_back(j);
  }
  return q;
}

std::array<double, 4> constants_c(int grid) {
  const auto tables = ksign::build_measure_tables(4, grid);
  std::array<double, 4> c{};
  for (int i = 2; i <= 5; ++i) c[i - 2] = ksign::compute_ci(i, tables[i - 2]);
  return c;
}

// ---- subcommands -----------------------------------------------------------

struct KsumArgs {
  long long m = 1, n = 1;
  std::uint64_t c = 1;
};

Output run_ksum(const KsumArgs& a) {
  Output o;
  o.params = {{"m", a.m}, {"n", a.n}, {"c", a.c}};
  if (a.c == 0) throw ksign::Error(ksign::Errc::domain_error, "ksum: c must be positive");
  const auto f = ksign::FactoredModulus::factor(a.c);
  const double direct = ksign::kloosterman_direct(a.m, a.n, a.c);
  o.result = {{"value", direct}, {"omega", f.omega}, {"squarefree", f.squarefree}};
  if (f.squarefree && std::gcd(static_cast<std::uint64_t>(std::llabs(a.m * a.n)), a.c) == 1) {
    o.result["product_form"] = ksign::kloosterman_fast(a.m, a.n, f);
    o.result["estermann_bound"] = ksign::estermann_bound(a.m, a.n, f);
  }
  o.text = num(direct) + "\n";
  o.csv = "m,n,c,value\n" + std::to_string(a.m) + "," + std::to_string(a.n) + "," + std::to_string(a.c) + "," +
          num(direct, 17) + "\n";
  return o;
}

struct AnglesArgs {
  std::uint64_t p = 101;
  std::optional<long long> a;
};

Output run_angles(const AnglesArgs& args) {
  Output o;
  o.params = {{"p", args.p}};
  if (args.a) {
    o.params["a"] = *args.a;
    const double t = ksign::theta_angle(*args.a, args.p);
    o.result = {{"theta", t}};
    o.text = num(t) + "\n";
    o.csv = "a,theta\n" + std::to_string(*args.a) + "," + num(t, 17) + "\n";
    return o;
  }
  if (!ksign::is_prime(args.p)) throw ksign::Error(ksign::Errc::domain_error, "angles: p must be prime");
  const auto sweep = ksign::kloosterman_sweep(1, args.p);
  std::vector<double> theta(args.p - 1);
  std::ostringstream csv;
  csv << "a,theta\n" << std::setprecision(17);
  for (std::uint64_t a = 1; a < args.p; ++a) {
    theta[a - 1] = ksign::theta_from_sum(sweep[a], args.p);
    csv << a << ',' << theta[a - 1] << '\n';
  }
  o.result = {{"theta", theta}};
  o.text = "angles for a = 1.." + std::to_string(args.p - 1) + " (use --format csv for the table)\n";
  o.csv = csv.str();
  return o;
}

struct EquidistArgs {
  std::uint64_t p = 10007;
  int bins = 20;
  int kmax = 10;
  std::uint64_t prime_input_N = 0;
};

Output run_equidist(const EquidistArgs& a) {
  Output o;
  o.params = {{"p", a.p}, {"bins", a.bins}, {"kmax", a.kmax}, {"prime_input_N", a.prime_input_N}};
  if (a.kmax < 1) throw ksign::Error(ksign::Errc::domain_error, "equidist: kmax < 1");
  const auto st = ksign::vertical_sato_tate(a.p, a.bins);
  o.result["sato_tate"] = ksign::to_json(st);
  ordered_json weyl = ordered_json::array();
  const double sp = std::sqrt(static_cast<double>(a.p));
  bool katz_ok = true;
  for (int k = 1; k <= a.kmax; ++k) {
    const double w = ksign::weyl_sum(a.p, k, false);
    const double tw = ksign::weyl_sum(a.p, k, true);
    const bool within = std::fabs(w) <= (k + 1) * sp / 2;
    katz_ok = katz_ok && within;
    weyl.push_back({{"k", k},
                    {"untwisted", w},
                    {"katz_bound", (k + 1) * sp / 2},
                    {"within_bound", within},
                    {"twisted", tw},
                    {"twisted_over_sqrt_p", std::fabs(tw) / sp},
                    {"twisted_flagged", std::fabs(tw) / sp > 5.0 * (k + 1)}});
  }
  o.result["weyl_sums"] = weyl;
  if (a.prime_input_N > 0) {
    ordered_json pis = ordered_json::array();
    for (int k = 0; k <= a.kmax; ++k) {
      const auto s = ksign::prime_input_sum(a.p, k, a.prime_input_N);
      pis.push_back({{"k", k}, {"value", s.value}, {"primes", s.count}, {"normalized", s.normalized}});
    }
    o.result["prime_input_sums"] = pis;
  }
  o.text = "p = " + std::to_string(a.p) + "\nks_distance = " + num(st.ks_distance) +
           "\nkatz_bound_holds = " + (katz_ok ? "true" : "false") + "\n";
  std::ostringstream csv;
  ksign::write_sato_tate_csv(csv, st);
  o.csv = csv.str();
  return o;
}

struct PairsArgs {
  double P1 = 1e4, P2 = 1e3;
  int bins = 10;
  std::uint64_t identity_checks = 16;
};

Output run_pairs(const PairsArgs& a) {
  Output o;
  o.params = {{"P1", a.P1}, {"P2", a.P2}, {"bins", a.bins}, {"identity_checks", a.identity_checks},
              {"interval", "(P, P + P/log(P1 P2)]"}};
  const auto r = ksign::factor_pair_census(a.P1, a.P2, a.bins, a.identity_checks);
  o.result = ksign::to_json(r);
  o.text = "pairs = " + std::to_string(r.pairs) + "\nmean_abs_c = " + num(r.mean_abs_c) +
           "\nc2_lower_bound = 0.11109\n";
  std::ostringstream csv;
  ksign::write_pair_histogram_csv(csv, r);
  o.csv = csv.str();
  return o;
}

struct ConstantsArgs {
  std::optional<int> i;
  int grid = 4096;
  bool table_csv = false;
};

Output run_constants(const ConstantsArgs& a) {
  static constexpr std::array<double, 4> bound{0.11109, 0.03557, 0.01184, 0.00396};
  Output o;
  o.params = {{"grid_size", a.grid}, {"interpolation", "pchip"}};
  if (a.i) o.params["i"] = *a.i;
  if (a.i && (*a.i < 2 || *a.i > 5)) throw ksign::Error(ksign::Errc::domain_error, "constants: i outside [2, 5]");
  if (a.grid < 2048) throw ksign::Error(ksign::Errc::domain_error, "constants: grid_size < 2048");
  const int lo = a.i.value_or(2), hi = a.i.value_or(5);
  const auto tables = ksign::build_measure_tables(hi - 1, a.grid);
  ordered_json rows = ordered_json::array();
  std::ostringstream text, csv;
  csv << "i,C_i,lower_bound\n" << std::setprecision(17);
  for (int i = lo; i <= hi; ++i) {
    const double c = ksign::compute_ci(i, tables[i - 2]);
    rows.push_back({{"i", i}, {"value", c}, {"lower_bound", bound[i - 2]}, {"meets_bound", c >= bound[i - 2]}});
    text << (a.i ? "" : "C_" + std::to_string(i) + " = ") << num(c) << '\n';
    csv << i << ',' << c << ',' << bound[i - 2] << '\n';
  }
  o.result["constants"] = rows;
  o.text = text.str();
  o.csv = csv.str();
  if (a.table_csv) {
    // The measure tables themselves, for plotting.
    std::ostringstream t;
    t << "x";
    for (int j = 1; j < hi; ++j) t << ",mu" << j;
    t << '\n' << std::setprecision(17);
    for (int g = 0; g <= a.grid; ++g) {
      t << tables[0].node(g);
      for (int j = 1; j < hi; ++j) t << ',' << tables[j - 1].cdf()[g];
      t << '\n';
    }
    o.csv = t.str();
  }
  return o;
}

struct AiArgs {
  int i = 2;
  double gamma = 0.25;
  int k = 6;
  double eta = 0.0;
  double alpha_min = 1e-3;
  std::string method;
  std::uint64_t samples = 1u << 22;
  int replicates = 16;
  double rect_width = 1.0 / 16;
  double rel_target = 1e-8;
  std::string trace;
  std::uint64_t trace_limit = 10000;
};

Output run_ai(const AiArgs& a, const Globals& g) {
  auto cfg = ksign::QuadratureConfig::defaults_for(a.i);
  if (!a.method.empty()) cfg.method = ksign::parse_method(a.method);
  cfg.samples = a.samples;
  cfg.seed = g.seed;
  cfg.workers = g.workers;
  cfg.replicates = a.replicates;
  cfg.rect_width = a.rect_width;
  cfg.rel_error_target = a.rel_target;
  cfg.trace_limit = a.trace_limit;
  const ksign::RegionSpec spec{a.i, a.eta, a.alpha_min};
  Output o;
  o.params = {{"i", a.i}, {"gamma", a.gamma}, {"k", a.k}, {"eta", a.eta}, {"alpha_min", a.alpha_min},
              {"quadrature", ksign::to_json(cfg)}};
  std::optional<std::ofstream> trace;
  if (!a.trace.empty()) {
    o.params["trace"] = a.trace;
    trace.emplace(resolve_output(a.trace));
    if (!*trace) throw ksign::Error(ksign::Errc::domain_error, "ai: cannot open trace file " + a.trace);
  }
  const auto e = ksign::compute_ai(a.i, a.gamma, a.k, spec, cfg, trace ? &*trace : nullptr);
  o.result = ksign::to_json(e);
  o.text = num(e.value) + " +- " + num(e.error, 3) + "\n";
  o.csv = "i,gamma,k,alpha_min,method,value,error,evaluations\n" + std::to_string(a.i) + "," + num(a.gamma, 17) +
          "," + std::to_string(a.k) + "," + num(a.alpha_min, 17) + "," + std::string(ksign::method_name(cfg.method)) +
          "," + num(e.value, 17) + "," + num(e.error, 17) + "," + std::to_string(e.evaluations) + "\n";
  return o;
}

struct RkArgs {
  int k = 6;
  double y = 0.25;
  bool exact = false;
};

Output run_rk(const RkArgs& a) {
  Output o;
  o.params = {{"k", a.k}, {"y", a.y}, {"exact", a.exact}};
  const double v = ksign::rk_poly(a.k, a.y);
  o.result = {{"value", v}};
  ordered_json coeffs = ordered_json::array();
  for (const auto& c : ksign::rk_coefficients(a.k)) coeffs.push_back(c.str());
  o.result["coefficients_of_inverse_powers"] = coeffs;
  if (a.exact) {
    // The double y is a dyadic rational; convert it without rounding.
    const ksign::Rational y(a.y);
    o.result["exact_y"] = y.str();
    o.result["exact_value"] = ksign::rk_exact(a.k, y).str();
  }
  o.text = num(v, 17) + "\n";
  o.csv = "k,y,value\n" + std::to_string(a.k) + "," + num(a.y, 17) + "," + num(v, 17) + "\n";
  return o;
}

struct CertifyArgs {
  int k = 6;
  double gamma = 0.25;
  double rho = 1.5e5;
  std::vector<double> alpha_min = default_cutoffs();
  int grid = 4096;
  std::uint64_t samples = 1u << 22;
  bool optimize = false;
  std::vector<double> gammas{0.05, 0.1, 0.15, 0.2, 0.25};
  std::vector<int> ks{3, 4, 5, 6, 7, 8};
};

Output run_certify(const CertifyArgs& a, const Globals& g) {
  Output o;
  o.params = {{"alpha_min", a.alpha_min}, {"c_grid", a.grid}, {"optimize", a.optimize},
              {"quadrature", quadrature_provenance(g.seed, a.samples)}};
  if (a.alpha_min.empty()) throw ksign::Error(ksign::Errc::domain_error, "certify: no cutoff given");
  const auto c = constants_c(a.grid);
  const auto base = base_quadrature(g, a.samples);
  auto stamp = [&](ksign::CertificateReport r, double amin) {
    r.alpha_min = amin;
    r.quadrature = "adaptive-rectangles (i = 2, 3); quasi-random (i = 4, 5)";
    r.seed = g.seed;
    r.samples = a.samples;
    r.c_grid = a.grid;
    return r;
  };

  if (a.optimize) {
    o.params["gamma_grid"] = a.gammas;
    o.params["k_range"] = a.ks;
    ordered_json per_cutoff = ordered_json::array();
    std::optional<ksign::CertificateReport> best;
    for (double amin : a.alpha_min) {
      const ksign::AProvider provider = [&](int k, double gamma) {
        return ksign::compute_a_values(gamma, k, amin, base);
      };
      auto r = stamp(ksign::optimize(a.gammas, a.ks, provider, c, g.workers), amin);
      per_cutoff.push_back(ordered_json::parse(ksign::report_to_json(r)));
      if (!best || r.omega_bound < best->omega_bound) best = r;
    }
    o.result = {{"per_cutoff", per_cutoff}, {"best", ordered_json::parse(ksign::report_to_json(*best))}};
    o.text = "best: k = " + std::to_string(best->k) + ", gamma = " + num(best->gamma) + ", rho = " +
             num(best->rho) + ", omega_bound = " + std::to_string(best->omega_bound) + "\n";
    return o;
  }

  o.params["k"] = a.k;
  o.params["gamma"] = a.gamma;
  o.params["rho"] = a.rho;
  ordered_json per_cutoff = ordered_json::array();
  bool any = false;
  std::ostringstream text, csv;
  csv << "alpha_min,lhs,rhs,rho_star,verdict\n" << std::setprecision(17);
  for (double amin : a.alpha_min) {
    const auto av = ksign::compute_a_values(a.gamma, a.k, amin, base);
    const auto r = stamp(ksign::check_inequality(a.k, a.gamma, a.rho, av, c), amin);
    any = any || r.verdict;
    per_cutoff.push_back(ordered_json::parse(ksign::report_to_json(r)));
    text << "alpha_min = " << num(amin) << ": lhs = " << num(r.lhs) << ", rhs = " << num(r.rhs)
         << ", rho* = " << num(r.rho_star) << ", verdict = " << (r.verdict ? "true" : "false") << '\n';
    csv << amin << ',' << r.lhs << ',' << r.rhs << ',' << r.rho_star << ',' << (r.verdict ? "true" : "false") << '\n';
  }
  o.result = {{"verdict", any}, {"per_cutoff", per_cutoff}};
  if (a.k >= 3 && a.rho > 1.0) {
    o.result["omega_bound"] = ksign::omega_bound(a.k, a.rho);
    o.result["omega_exponent"] = ksign::omega_exponent(a.k, a.rho);
  }
  text << "verdict = " << (any ? "true" : "false") << '\n';
  o.text = text.str();
  o.csv = csv.str();
  o.exit_code = any ? kExitOk : kExitVerdictFalse;
  return o;
}

struct CensusArgs {
  std::uint64_t X = 100000;
  int max_omega = 10;
  double gamma = 0.25;
  int k = 6;
  double rho = 1.5e5;
  std::optional<double> sqrtD;
  std::optional<std::uint64_t> lo, hi;
  std::uint64_t segment = 1u << 16;
  double budget = 2e7;
};

ksign::SieveParams census_params(double X, double gamma, int k, const std::optional<double>& sqrtD) {
  return sqrtD ? ksign::SieveParams::with_level(X, k, *sqrtD) : ksign::SieveParams::make(X, gamma, k);
}

Output run_census(const CensusArgs& a, const Globals& g) {
  ksign::CensusOptions opts;
  opts.workers = g.workers;
  opts.segment = a.segment;
  opts.budget = static_cast<std::uint64_t>(a.budget);
  const auto params = census_params(static_cast<double>(a.X), a.gamma, a.k, a.sqrtD);
  const auto& window = ksign::SmoothWindow::standard();
  Output o;
  o.params = {{"X", a.X},         {"max_omega", a.max_omega}, {"sieve", ksign::to_json(params)},
              {"rho", a.rho},     {"segment", a.segment},     {"budget", opts.budget},
              {"window", {{"kind", window.kind}, {"mellin_at_1", window.mellin_at_1}}},
              {"zero_threshold", opts.zero_threshold}};
  ksign::CensusRecord r;
  if (a.lo || a.hi) {
    const std::uint64_t lo = a.lo.value_or(a.X), hi = a.hi.value_or(2 * a.X);
    o.params["range"] = {lo, hi};
    r = ksign::sign_census_range(lo, hi, a.X, a.max_omega, params, a.rho, window, opts);
  } else {
    r = ksign::sign_census(a.X, a.max_omega, params, a.rho, window, opts);
  }
  o.result = ksign::to_json(r);
  o.result["count_log_X_over_X"] = {
      {"positive", r.positive_ratio()}, {"negative", r.negative_ratio()}, {"c0", "unspecified; ratio reported"}};
  o.text = "positives = " + std::to_string(r.positives) + "\nnegatives = " + std::to_string(r.negatives) +
           "\nzeros = " + std::to_string(r.zeros) + "\npositive_ratio = " + num(r.positive_ratio()) +
           "\nnegative_ratio = " + num(r.negative_ratio()) + "\n";
  std::ostringstream csv;
  ksign::write_census_csv(csv, r);
  o.csv = csv.str();
  return o;
}

struct HsumsArgs {
  std::vector<std::uint64_t> X{1000, 10000, 100000};
  double gamma = 0.25;
  int k = 6;
  double rho = 1.5e5;
  int max_omega = 10;
};

Output run_hsums(const HsumsArgs& a, const Globals& g) {
  ksign::CensusOptions opts;
  opts.workers = g.workers;
  Output o;
  o.params = {{"X", a.X}, {"gamma", a.gamma}, {"k", a.k}, {"rho", a.rho}, {"max_omega", a.max_omega},
              {"window", ksign::SmoothWindow::standard().kind}};
  ordered_json rows = ordered_json::array();
  std::ostringstream text, csv;
  csv << "X,h1,h2,h3,h3_over_X,h_plus,h_minus,recombination_residual\n" << std::setprecision(17);
  for (auto X : a.X) {
    const auto params = ksign::SieveParams::make(static_cast<double>(X), a.gamma, a.k);
    const auto r = ksign::sign_census(X, a.max_omega, params, a.rho, ksign::SmoothWindow::standard(), opts);
    const double h3x = r.h3.value() / static_cast<double>(X);
    rows.push_back({{"X", X},
                    {"sieve", ksign::to_json(params)},
                    {"h1", r.h1.value()},
                    {"h2", r.h2.value()},
                    {"h3", r.h3.value()},
                    {"h3_over_X", h3x},
                    {"h_plus", r.h_plus.value()},
                    {"h_minus", r.h_minus.value()},
                    {"recombination_residual", r.recombination_residual()},
                    {"consistent", r.recombination_residual() < 1e-8},
                    {"decomposition_holds", r.decomposition_holds()}});
    text << "X = " << X << ": |H3|/X = " << num(std::fabs(h3x)) << ", residual = " << num(r.recombination_residual(), 3)
         << '\n';
    csv << X << ',' << r.h1.value() << ',' << r.h2.value() << ',' << r.h3.value() << ',' << h3x << ','
        << r.h_plus.value() << ',' << r.h_minus.value() << ',' << r.recombination_residual() << '\n';
  }
  o.result["rows"] = rows;
  o.text = text.str();
  o.csv = csv.str();
  return o;
}

struct ResidueArgs {
  double x = std::numbers::e;
  int k = 2;
  std::optional<int> l;
  double radius = 0.0;
};

Output run_residues(const ResidueArgs& a) {
  Output o;
  o.params = {{"x", a.x}, {"k", a.k}};
  ksign::ResidueCheck r;
  if (a.l) {
    o.params["l"] = *a.l;
    o.params["radius"] = a.radius == 0.0 ? ordered_json("auto") : ordered_json(a.radius);
    r = ksign::residue_lemma7_check(a.x, a.k, *a.l, ksign::ContourOptions{a.radius, 2048});
  } else {
    r = ksign::residue_lemma6_check(a.x, a.k);
  }
  o.result = {{"numeric", r.numeric}, {"closed_form", r.closed_form}, {"error", r.error()}};
  o.text = num(r.numeric) + " vs " + num(r.closed_form) + " (error " + num(r.error(), 3) + ")\n";
  return o;
}

// ---- output ----------------------------------------------------------------

int emit(const std::string& subcommand, const Globals& g, Output o) {
  std::string body;
  if (g.format == "json") {
    ordered_json report;
    report["tool"] = "ksign";
    report["version"] = std::string(ksign::version());
    report["timestamp"] = utc_timestamp();
    report["config"] = {{"subcommand", subcommand},
                        {"parameters", o.params},
                        {"seed", g.seed},
                        {"workers", g.workers},
                        {"output_format", g.format}};
    report["result"] = std::move(o.result);
    body = report.dump(2) + "\n";
  } else if (g.format == "csv") {
    if (o.csv.empty()) throw ksign::Error(ksign::Errc::domain_error, subcommand + ": no tabular output; use json");
    body = o.csv;
  } else {
    body = o.text;
  }
  if (g.out.empty()) {
    std::cout << body;
  } else {
    const auto path = resolve_output(g.out);
    std::ofstream f(path, std::ios::binary);
    if (!(f << body)) throw ksign::Error(ksign::Errc::domain_error, "cannot write " + path.string());
  }
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kloosterman sign-change workbench"};
  app.set_version_flag("--version", std::string(ksign::version()));
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_config("--config", "", "TOML/INI file of option values; unknown keys are rejected");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Globals g;
  app.add_option("--out", g.out, "Write the report here (relative to $KSIGN_OUTPUT_DIR if set)");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for sampling quadrature")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads / partitions")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();

  KsumArgs ksum;
  auto* c_ksum = app.add_subcommand("ksum", "Kloosterman sum S(m, n; c)");
  c_ksum->add_option("--m", ksum.m)->capture_default_str();
  c_ksum->add_option("--n", ksum.n)->capture_default_str();
  c_ksum->add_option("--c", ksum.c)->required();

  AnglesArgs angles;
  auto* c_angles = app.add_subcommand("angles", "Kloosterman angles theta_p(a)");
  c_angles->add_option("--p", angles.p)->required();
  c_angles->add_option("--a", angles.a, "Single residue; all residues when omitted");

  EquidistArgs eq;
  auto* c_eq = app.add_subcommand("equidist", "Vertical Sato-Tate, Weyl and prime-input sums");
  c_eq->add_option("--p", eq.p)->capture_default_str();
  c_eq->add_option("--bins", eq.bins)->check(CLI::Range(1, 100000))->capture_default_str();
  c_eq->add_option("--kmax", eq.kmax)->capture_default_str();
  c_eq->add_option("--prime-input-N", eq.prime_input_N, "Also report prime-input sums over (N, 2N]");

  PairsArgs pairs;
  auto* c_pairs = app.add_subcommand("pairs", "Factor-pair census of C(1, p1 p2)");
  c_pairs->add_option("--P1", pairs.P1)->capture_default_str();
  c_pairs->add_option("--P2", pairs.P2)->capture_default_str();
  c_pairs->add_option("--bins", pairs.bins)->check(CLI::Range(1, 1000))->capture_default_str();
  c_pairs->add_option("--identity-checks", pairs.identity_checks)->capture_default_str();

  ConstantsArgs cons;
  auto* c_cons = app.add_subcommand("constants", "Constants C_2..C_5 from the product measures");
  c_cons->add_option("--i", cons.i, "Single index in [2, 5]; all when omitted");
  c_cons->add_option("--grid", cons.grid)->capture_default_str();
  c_cons->add_flag("--tables", cons.table_csv, "CSV output is the measure tables instead");

  AiArgs ai;
  auto* c_ai = app.add_subcommand("ai", "Region integral A_i(gamma, k)");
  c_ai->add_option("--i", ai.i)->check(CLI::Range(2, 5))->capture_default_str();
  c_ai->add_option("--gamma", ai.gamma)->capture_default_str();
  c_ai->add_option("--k", ai.k)->capture_default_str();
  c_ai->add_option("--eta", ai.eta)->capture_default_str();
  c_ai->add_option("--alpha-min", ai.alpha_min)->capture_default_str();
  c_ai->add_option("--method", ai.method, "monte-carlo | quasi-random | adaptive-rectangles");
  c_ai->add_option("--samples", ai.samples)->capture_default_str();
  c_ai->add_option("--replicates", ai.replicates)->capture_default_str();
  c_ai->add_option("--rect-width", ai.rect_width)->capture_default_str();
  c_ai->add_option("--rel-target", ai.rel_target)->capture_default_str();
  c_ai->add_option("--trace", ai.trace, "CSV file for sampled integrand values");
  c_ai->add_option("--trace-limit", ai.trace_limit)->capture_default_str();

  RkArgs rk;
  auto* c_rk = app.add_subcommand("rk", "The polynomial R_k(y)");
  c_rk->add_option("--k", rk.k)->capture_default_str();
  c_rk->add_option("--y", rk.y)->capture_default_str();
  c_rk->add_flag("--exact", rk.exact, "Also evaluate in exact rationals");

  CertifyArgs cert;
  auto* c_cert = app.add_subcommand("certify", "Check the sign-change inequality");
  c_cert->add_option("--k", cert.k)->capture_default_str();
  c_cert->add_option("--gamma", cert.gamma)->capture_default_str();
  c_cert->add_option("--rho", cert.rho)->capture_default_str();
  c_cert->add_option("--alpha-min", cert.alpha_min, "Cutoffs to try")->capture_default_str();
  c_cert->add_option("--grid", cert.grid, "Measure grid for C_i")->capture_default_str();
  c_cert->add_option("--samples", cert.samples, "Samples for sampled A_i")->capture_default_str();
  c_cert->add_flag("--optimize", cert.optimize, "Search (k, gamma) for the smallest omega bound");
  c_cert->add_option("--gammas", cert.gammas)->capture_default_str();
  c_cert->add_option("--ks", cert.ks)->capture_default_str();

  CensusArgs census;
  auto* c_census = app.add_subcommand("census", "Sign census of S(1, 1; n) over (X, 2X]");
  c_census->add_option("--X", census.X)->capture_default_str();
  c_census->add_option("--max-omega", census.max_omega)->capture_default_str();
  c_census->add_option("--gamma", census.gamma)->capture_default_str();
  c_census->add_option("--k", census.k)->capture_default_str();
  c_census->add_option("--rho", census.rho)->capture_default_str();
  c_census->add_option("--sqrtD", census.sqrtD, "Explicit sieve level instead of X^gamma exp(-sqrt(log X))");
  c_census->add_option("--lo", census.lo, "Subrange start (exclusive)");
  c_census->add_option("--hi", census.hi, "Subrange end (inclusive)");
  c_census->add_option("--segment", census.segment)->capture_default_str();
  c_census->add_option("--budget", census.budget, "Max moduli per run")->capture_default_str();

  HsumsArgs hs;
  auto* c_hs = app.add_subcommand("hsums", "H_1, H_2, H_3 and the H+- recombination check");
  c_hs->add_option("--X", hs.X)->capture_default_str();
  c_hs->add_option("--gamma", hs.gamma)->capture_default_str();
  c_hs->add_option("--k", hs.k)->capture_default_str();
  c_hs->add_option("--rho", hs.rho)->capture_default_str();
  c_hs->add_option("--max-omega", hs.max_omega)->capture_default_str();

  ResidueArgs res;
  auto* c_res = app.add_subcommand("residues", "Numeric contour checks (line integral; double contour with --l)");
  c_res->add_option("--x", res.x)->capture_default_str();
  c_res->add_option("--k", res.k)->capture_default_str();
  c_res->add_option("--l", res.l);
  c_res->add_option("--radius", res.radius, "Double-contour radius; 0 picks it from x, k, l")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    Output o;
    if (name == "ksum") o = run_ksum(ksum);
    else if (name == "angles") o = run_angles(angles);
    else if (name == "equidist") o = run_equidist(eq);
    else if (name == "pairs") o = run_pairs(pairs);
    else if (name == "constants") o = run_constants(cons);
    else if (name == "ai") o = run_ai(ai, g);
    else if (name == "rk") o = run_rk(rk);
    else if (name == "certify") o = run_certify(cert, g);
    else if (name == "census") o = run_census(census, g);
    else if (name == "hsums") o = run_hsums(hs, g);
    else if (name == "residues") o = run_residues(res);
    return emit(name, g, std::move(o));
  } catch (const ksign::Error& e) {
    std::cerr << "error: " << ksign::errc_name(e.code()) << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
