#include "ksign/integrals.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include "ksign/error.hpp"
#include "ksign/sieve.hpp"

namespace ksign {

double LinearConstraint::eval(std::span<const double> alphas) const {
  double v = constant;
  for (std::size_t j = 0; j < coeff.size(); ++j) v += coeff[j] * alphas[j];
  return v;
}

bool LinearConstraint::holds(std::span<const double> alphas) const {
  const double v = eval(alphas);
  return strict ? v > 0.0 : v >= 0.0;
}

std::vector<LinearConstraint> RegionSpec::constraints() const {
  if (i < 2 || i > 5) throw Error(Errc::domain_error, "RegionSpec: i outside [2, 5]");
  const int n = dim();
  std::vector<LinearConstraint> out;
  auto add = [&](double c, std::vector<double> a, bool strict = true) {
    a.resize(n, 0.0);
    out.push_back({c, std::move(a), strict});
  };
  // open unit box
  for (int j = 0; j < n; ++j) {
    std::vector<double> a(n, 0.0);
    a[j] = 1.0;
    add(0.0, a);
    a[j] = -1.0;
    add(1.0, a);
  }
  switch (i) {
    case 2:
      // (3/4 + eta)(1 - a2) < a2 < 1/2
      add(-(0.75 + eta), {1.75 + eta});
      add(0.5, {-1.0});
      break;
    case 3:
      // (1 - a2 - a3)/2 < a2, a3 < a2 < 1 - a2 - a3
      add(-0.5, {1.5, 0.5});
      add(0.0, {1.0, -1.0});
      add(1.0, {-2.0, -1.0});
      break;
    case 4:
      // (1 - a2 - a3 - a4)/2 < a2 + a3, a4 < a3 < a2 < 1 - a2 - a3 - a4
      add(-0.5, {1.5, 1.5, 0.5});
      add(0.0, {0.0, 1.0, -1.0});
      add(0.0, {1.0, -1.0, 0.0});
      add(1.0, {-2.0, -1.0, -1.0});
      break;
    case 5:
      // (1 - a2 - ... - a5)/2 < a2 + a3 + a4, (a3 + a4 + a5)/2 < a2,
      // a5 < a4 < a3 < a2 < 1 - a2 - ... - a5
      add(-0.5, {1.5, 1.5, 1.5, 0.5});
      add(0.0, {1.0, -0.5, -0.5, -0.5});
      add(0.0, {0.0, 0.0, 1.0, -1.0});
      add(0.0, {0.0, 1.0, -1.0, 0.0});
      add(0.0, {1.0, -1.0, 0.0, 0.0});
      add(1.0, {-2.0, -1.0, -1.0, -1.0});
      break;
  }
  // cutoffs: a_j >= alpha_min, a_1 = 1 - sum >= alpha_min
  if (alpha_min > 0.0) {
    for (int j = 0; j < n; ++j) {
      std::vector<double> a(n, 0.0);
      a[j] = 1.0;
      add(-alpha_min, a, false);
    }
    add(1.0 - alpha_min, std::vector<double>(n, -1.0), false);
  }
  return out;
}

bool region_contains(const RegionSpec& spec, std::span<const double> free_alphas) {
  if (static_cast<int>(free_alphas.size()) != spec.dim()) return false;
  for (const auto& c : spec.constraints())
    if (!c.holds(free_alphas)) return false;
  return true;
}

namespace {

constexpr int kMaxDim = 4;

// L^2 / (a_1 ... a_i) with a_1 = 1 - sum(free); no membership test.
double integrand_raw(double gamma, int k, std::span<const double> free) {
  double full[kMaxDim + 1];
  double rest = 1.0;
  double prod = 1.0;
  for (std::size_t j = 0; j < free.size(); ++j) {
    full[j + 1] = free[j];
    rest -= free[j];
    prod *= free[j];
  }
  full[0] = rest;
  prod *= rest;
  const double L = subset_sum_L(gamma, k, std::span<const double>(full, free.size() + 1));
  return L * L / prod;
}

void validate(int i, double gamma, int k, const RegionSpec& spec) {
  if (i < 2 || i > 5) throw Error(Errc::domain_error, "compute_ai: i outside [2, 5]");
  if (spec.i != i) throw Error(Errc::domain_error, "compute_ai: RegionSpec.i does not match i");
  if (!(gamma > 0.0 && gamma <= 0.25)) throw Error(Errc::domain_error, "compute_ai: gamma outside (0, 1/4]");
  if (k < 1) throw Error(Errc::domain_error, "compute_ai: k < 1");
  if (spec.alpha_min < 0.0) throw Error(Errc::domain_error, "compute_ai: alpha_min < 0");
  if ((i == 4 || i == 5) && spec.alpha_min == 0.0)
    throw Error(Errc::cutoff_required, "A_" + std::to_string(i) + " diverges without a positive alpha_min");
}

u64 splitmix64(u64& state) {
  u64 z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

u64 derive_seed(u64 seed, u64 stream) {
  u64 s = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  return splitmix64(s);
}

// Every R_i lies in {1/2 > a_2 > a_3 > ... > a_i > 0} (for i = 2 just
// a_2 < 1/2), so a sorted cube sample covers it with volume (1/2)^d / d!.
double simplex_volume(int d) {
  double v = 1.0;
  for (int j = 1; j <= d; ++j) v *= 0.5 / j;
  return v;
}

void to_ordered_point(double* u, int d) {
  for (int j = 0; j < d; ++j) u[j] *= 0.5;
  std::sort(u, u + d, std::greater<>());
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  u64 n = 0;
};

void trace_header(std::ostream& os, int i) {
  for (int j = 2; j <= i; ++j) os << "alpha_" << j << ',';
  os << "value\n";
}

void trace_row(std::ostream& os, const double* u, int d, double f) {
  for (int j = 0; j < d; ++j) os << u[j] << ',';
  os << f << '\n';
}

struct TraceRow {
  double u[kMaxDim];
  double f;
};

IntegralEstimate monte_carlo(int i, double gamma, int k, const RegionSpec& spec, const QuadratureConfig& cfg,
                             std::ostream* trace) {
  const int d = spec.dim();
  const int W = std::max(1, cfg.workers);
  std::vector<Moments> parts(W);
  std::vector<TraceRow> rows;
  auto run = [&](int w) {
    const u64 begin = cfg.samples * w / W;
    const u64 end = cfg.samples * (w + 1) / W;
    std::mt19937_64 rng(derive_seed(cfg.seed, w));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Moments m;
    double u[kMaxDim];
    for (u64 s = begin; s < end; ++s) {
      for (int j = 0; j < d; ++j) u[j] = unif(rng);
      to_ordered_point(u, d);
      const double f = ai_integrand(gamma, k, spec, std::span<const double>(u, d));
      m.sum += f;
      m.sum_sq += f * f;
      ++m.n;
      if (w == 0 && trace && rows.size() < cfg.trace_limit) {
        TraceRow r{};
        std::copy(u, u + d, r.u);
        r.f = f;
        rows.push_back(r);
      }
    }
    parts[w] = m;
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < W; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  Moments total;
  for (const auto& m : parts) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
    total.n += m.n;
  }
  const double N = static_cast<double>(total.n);
  const double mean = total.sum / N;
  const double var = std::max(0.0, total.sum_sq / N - mean * mean);
  const double vol = simplex_volume(d);
  if (trace) {
    trace_header(*trace, i);
    for (const auto& r : rows) trace_row(*trace, r.u, d, r.f);
  }
  return {vol * mean, vol * std::sqrt(var / (N - 1.0)), total.n};
}

IntegralEstimate quasi_random(int i, double gamma, int k, const RegionSpec& spec, const QuadratureConfig& cfg,
                              std::ostream* trace) {
  const int d = spec.dim();
  const int R = std::max(2, cfg.replicates);
  const u64 per = std::max<u64>(1, cfg.samples / R);
  const int W = std::max(1, std::min(cfg.workers, R));
  std::vector<double> means(R);
  std::vector<TraceRow> rows;
  // Randomized QMC: replicate r shifts one shared Sobol point set by a
  // Cranley-Patterson offset drawn from its own stream.
  auto replicate = [&](int r) {
    std::mt19937_64 rng(derive_seed(cfg.seed, r));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double shift[kMaxDim];
    for (int j = 0; j < d; ++j) shift[j] = unif(rng);
    boost::random::sobol gen(d);
    double sum = 0.0;
    double u[kMaxDim];
    for (u64 s = 0; s < per; ++s) {
      for (int j = 0; j < d; ++j) {
        const double x = static_cast<double>(gen()) * 0x1p-64 + shift[j];
        u[j] = x - std::floor(x);
      }
      to_ordered_point(u, d);
      const double f = ai_integrand(gamma, k, spec, std::span<const double>(u, d));
      sum += f;
      if (r == 0 && trace && rows.size() < cfg.trace_limit) {
        TraceRow row{};
        std::copy(u, u + d, row.u);
        row.f = f;
        rows.push_back(row);
      }
    }
    means[r] = sum / static_cast<double>(per);
  };
  auto run = [&](int w) {
    for (int r = w; r < R; r += W) replicate(r);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < W; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= R;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (R - 1);
  const double vol = simplex_volume(d);
  if (trace) {
    trace_header(*trace, i);
    for (const auto& r : rows) trace_row(*trace, r.u, d, r.f);
  }
  return {vol * mean, vol * std::sqrt(var / R), per * static_cast<u64>(R)};
}

// Nested one-dimensional integration. Level v integrates over the exact
// projection of the region onto (a_2..a_{v+2}), obtained by Fourier-Motzkin
// elimination of the later variables; the innermost level additionally
// splits at the points where a subset sum crosses gamma, so every piece
// has a polynomial-over-polynomial integrand.
class NestedIntegrator {
 public:
  NestedIntegrator(double gamma, int k, const RegionSpec& spec, const QuadratureConfig& cfg, std::ostream* trace)
      : gamma_(gamma), k_(k), d_(spec.dim()), cfg_(cfg), trace_(trace) {
    systems_.resize(d_);
    systems_[d_ - 1] = spec.constraints();
    for (int v = d_ - 1; v > 0; --v) systems_[v - 1] = eliminate(systems_[v], v);
    tol_inner_ = std::max(1e-14, cfg.rel_error_target * 1e-3);
  }

  IntegralEstimate run() {
    if (trace_) trace_header(*trace_, d_ + 1);
    double err = 0.0;
    const double value = level(0, &err);
    return {value, err, evals_};
  }

 private:
  static std::vector<LinearConstraint> eliminate(const std::vector<LinearConstraint>& sys, int v) {
    std::vector<LinearConstraint> out;
    std::vector<const LinearConstraint*> pos, neg;
    for (const auto& c : sys) {
      if (c.coeff[v] > 0)
        pos.push_back(&c);
      else if (c.coeff[v] < 0)
        neg.push_back(&c);
      else
        out.push_back(c);
    }
    for (auto* p : pos) {
      for (auto* n : neg) {
        const double sp = -n->coeff[v];
        const double sn = p->coeff[v];
        LinearConstraint c;
        c.constant = sp * p->constant + sn * n->constant;
        c.coeff.resize(p->coeff.size());
        for (std::size_t j = 0; j < c.coeff.size(); ++j) c.coeff[j] = sp * p->coeff[j] + sn * n->coeff[j];
        c.coeff[v] = 0.0;
        c.strict = p->strict || n->strict;
        out.push_back(std::move(c));
      }
    }
    return out;
  }

  // Feasible interval for variable v given point_[0..v-1].
  bool interval(int v, double& lo, double& hi) const {
    lo = 0.0;
    hi = 1.0;
    for (const auto& c : systems_[v]) {
      double base = c.constant;
      for (int j = 0; j < v; ++j) base += c.coeff[j] * point_[j];
      const double a = c.coeff[v];
      if (std::fabs(a) < 1e-300) {
        if (base < -1e-15) return false;
      } else if (a > 0) {
        lo = std::max(lo, -base / a);
      } else {
        hi = std::min(hi, -base / a);
      }
    }
    return lo < hi;
  }

  double eval_point() {
    ++evals_;
    const double f = integrand_raw(gamma_, k_, std::span<const double>(point_, d_));
    if (trace_ && rows_ < cfg_.trace_limit) {
      trace_row(*trace_, point_, d_, f);
      ++rows_;
    }
    return f;
  }

  double level(int v, double* err) {
    double lo, hi;
    if (!interval(v, lo, hi)) return 0.0;
    std::vector<double> cuts{lo, hi};
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / cfg_.rect_width)));
    for (int p = 1; p < panels; ++p) cuts.push_back(lo + (hi - lo) * p / panels);
    if (v == d_ - 1) add_breakpoints(v, lo, hi, cuts);
    std::sort(cuts.begin(), cuts.end());

    const double tol = v == d_ - 1 ? tol_inner_ : std::max(1e-13, cfg_.rel_error_target * 0.1);
    auto f = [&](double t) {
      point_[v] = t;
      if (v == d_ - 1) return eval_point();
      double inner_err = 0.0;
      return level(v + 1, &inner_err);
    };
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      if (!(cuts[c + 1] > cuts[c])) continue;
      double e = 0.0;
      total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, cuts[c], cuts[c + 1], 12, tol, &e);
      *err += e;
    }
    return total;
  }

  // Subsets of (a_1, a_2, ..., a_i) whose sum crosses gamma inside (lo, hi)
  // as the last free variable t moves; a_1 = 1 - sum(free) moves as -t.
  void add_breakpoints(int v, double lo, double hi, std::vector<double>& cuts) const {
    const int n = d_ + 1;
    double fixed_sum = 0.0;
    for (int j = 0; j < v; ++j) fixed_sum += point_[j];
    for (u64 mask = 1; mask < (1ULL << n); ++mask) {
      double s0 = 0.0;
      double slope = 0.0;
      if (mask & 1) {
        s0 += 1.0 - fixed_sum;
        slope -= 1.0;
      }
      for (int j = 0; j < d_; ++j) {
        if (!(mask >> (j + 1) & 1)) continue;
        if (j == v)
          slope += 1.0;
        else
          s0 += point_[j];
      }
      if (slope == 0.0) continue;
      const double t = (gamma_ - s0) / slope;
      if (t > lo && t < hi) cuts.push_back(t);
    }
  }

  double gamma_;
  int k_;
  int d_;
  const QuadratureConfig& cfg_;
  std::ostream* trace_;
  std::vector<std::vector<LinearConstraint>> systems_;
  double point_[kMaxDim] = {};
  double tol_inner_;
  u64 evals_ = 0;
  u64 rows_ = 0;
};

}  // namespace

double ai_integrand(double gamma, int k, const RegionSpec& spec, std::span<const double> free_alphas) {
  if (!region_contains(spec, free_alphas)) return 0.0;
  return integrand_raw(gamma, k, free_alphas);
}

std::string_view method_name(QuadratureMethod m) {
  switch (m) {
    case QuadratureMethod::monte_carlo: return "monte-carlo";
    case QuadratureMethod::quasi_random: return "quasi-random";
    case QuadratureMethod::adaptive: return "adaptive-rectangles";
  }
  return "?";
}

QuadratureMethod parse_method(std::string_view name) {
  if (name == "monte-carlo") return QuadratureMethod::monte_carlo;
  if (name == "quasi-random") return QuadratureMethod::quasi_random;
  if (name == "adaptive-rectangles" || name == "adaptive") return QuadratureMethod::adaptive;
  throw Error(Errc::domain_error, "unknown quadrature method: " + std::string(name));
}

QuadratureConfig QuadratureConfig::defaults_for(int i) {
  QuadratureConfig cfg;
  if (i >= 4) {
    cfg.method = QuadratureMethod::quasi_random;
    cfg.samples = 1u << 22;
  }
  return cfg;
}

IntegralEstimate compute_ai(int i, double gamma, int k, const RegionSpec& spec, const QuadratureConfig& cfg,
                            std::ostream* trace) {
  validate(i, gamma, k, spec);
  if (trace) trace->precision(17);
  switch (cfg.method) {
    case QuadratureMethod::monte_carlo:
    case QuadratureMethod::quasi_random:
      if (cfg.samples < 10000) throw Error(Errc::domain_error, "compute_ai: sampling methods need samples >= 1e4");
      return cfg.method == QuadratureMethod::monte_carlo ? monte_carlo(i, gamma, k, spec, cfg, trace)
                                                         : quasi_random(i, gamma, k, spec, cfg, trace);
    case QuadratureMethod::adaptive:
      if (i > 4) throw Error(Errc::domain_error, "compute_ai: adaptive-rectangles supports i <= 4");
      if (!(cfg.rect_width > 0.0)) throw Error(Errc::domain_error, "compute_ai: rect_width must be positive");
      return NestedIntegrator(gamma, k, spec, cfg, trace).run();
  }
  return {};
}

}  // namespace ksign
