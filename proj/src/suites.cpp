#include <algorithm>
#include <chrono>
#include <cstring>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nsledger/cutoffs.hpp"
#include "nsledger/harness.hpp"
#include "nsledger/ode_comparison.hpp"

namespace nsledger {

namespace {

constexpr double kPi = std::numbers::pi;

// Parameters of the shared small-data runs feeding criteria 5, 6, 7 and 11.
constexpr int kSharedN = 64;
constexpr double kSharedBox = 16.0 * kPi;
constexpr double kSharedDelta = 0.05;
constexpr double kSharedAlpha = 0.1;
constexpr double kSharedTauMax = 4.0;
constexpr double kSharedDtau = 0.02;
constexpr std::size_t kSharedSeeds = 5;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CriterionResult titled(int id, const char* title) {
  CriterionResult r;
  r.id = id;
  r.title = title;
  return r;
}

double rel(double err, double ref) { return ref > 0.0 ? err / ref : err; }

double l2_distance(const SpectralVectorField& a, const SpectralVectorField& b) {
  return std::sqrt(l2_norm_squared(a - b));
}

TrajectoryConfig shared_config() {
  TrajectoryConfig cfg;
  cfg.n = kSharedN;
  cfg.l_box = kSharedBox;
  cfg.t_horizon = 1.0;
  cfg.delta = kSharedDelta;
  cfg.alpha = kSharedAlpha;
  cfg.sample_taus = uniform_taus(0.0, kSharedTauMax, kSharedDtau);
  return cfg;
}

// Taylor-Green on the 2 pi box from t = 0 to t = 1 with horizon 2.
TrajectoryConfig taylor_green_config() {
  TrajectoryConfig cfg;
  cfg.n = 32;
  cfg.l_box = 2.0 * kPi;
  cfg.t_horizon = 2.0;
  cfg.delta = 1.0;
  cfg.sample_taus = uniform_taus(-std::log(2.0), 0.0, 0.01);
  if (cfg.sample_taus.back() < 0.0) cfg.sample_taus.push_back(0.0);
  return cfg;
}

TrajectoryConfig weak_random_config() {
  TrajectoryConfig cfg;
  cfg.n = 48;
  cfg.l_box = 8.0 * kPi;
  cfg.t_horizon = 1.0;
  cfg.delta = 1.0;
  cfg.sample_taus = uniform_taus(0.0, 2.0, 0.02);
  return cfg;
}

FieldSpec random_spec(std::uint64_t seed, double target, double xi_max = 1.7) {
  FieldSpec spec;
  spec.family = FieldFamily::random_solenoidal;
  spec.seed = seed;
  spec.l2_norm_target = target;
  spec.xi_max = xi_max;
  return spec;
}

RealVectorField random_physical(const GridPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  RealVectorField f(g);
  for (auto& c : f.samples)
    for (auto& v : c) v = nd(rng);
  return f;
}

std::vector<EnergyRecord> upto(const std::vector<EnergyRecord>& recs, double tau_max) {
  std::vector<EnergyRecord> out;
  for (const auto& r : recs)
    if (r.tau <= tau_max + 1e-9) out.push_back(r);
  return out;
}

CheckOptions shared_options(double tolerance_scale) {
  CheckOptions o;
  o.alpha = kSharedAlpha;
  o.delta = kSharedDelta;
  o.tolerance_scale = tolerance_scale;
  o.decay_tau_min = 1.0;
  o.decay_tau_max = kSharedTauMax;
  return o;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NSLEDGER_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

class SuiteContext {
 public:
  explicit SuiteContext(SuiteOptions o) : opts(std::move(o)) {}

  SuiteOptions opts;

  // Records of the shared runs for seeds opts.seed .. opts.seed + count - 1.
  const std::vector<std::vector<EnergyRecord>>& shared(std::size_t count) {
    std::lock_guard<std::mutex> lock(mu_);
    if (shared_.size() < count) {
      const std::size_t first = shared_.size();
      shared_.resize(count);
      run_parallel(first, count, [&](std::size_t i) { shared_[i] = shared_run(opts.seed + i); });
    }
    return shared_;
  }

  const std::vector<Snapshot>& taylor_green() {
    std::lock_guard<std::mutex> lock(mu_);
    if (!tg_) {
      const TrajectoryConfig cfg = taylor_green_config();
      FieldSpec spec;
      spec.family = FieldFamily::taylor_green;
      spec.l2_norm_target = cfg.delta;
      tg_ = simulate(generate(spec, Grid::build(cfg.n, cfg.l_box)), cfg).snapshots;
    }
    return *tg_;
  }

  const std::vector<Snapshot>& weak_random() {
    std::lock_guard<std::mutex> lock(mu_);
    if (!weak_) {
      const TrajectoryConfig cfg = weak_random_config();
      const auto u0 = generate(random_spec(opts.seed + 100, cfg.delta), Grid::build(cfg.n, cfg.l_box));
      weak_ = simulate(u0, cfg).snapshots;
    }
    return *weak_;
  }

 private:
  template <class F>
  void run_parallel(std::size_t first, std::size_t last, F&& job) {
    const std::size_t threads = std::min<std::size_t>(resolve_threads(opts.threads), last - first);
    if (threads <= 1) {
      for (std::size_t i = first; i < last; ++i) job(i);
      return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(last - first);
    std::size_t next = first;
    std::mutex qmu;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> ql(qmu);
            if (next >= last) return;
            i = next++;
          }
          try {
            job(i);
          } catch (...) {
            errors[i - first] = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  static std::vector<EnergyRecord> shared_run(std::uint64_t seed) {
    const TrajectoryConfig cfg = shared_config();
    const auto u0 = generate(random_spec(seed, cfg.delta), Grid::build(cfg.n, cfg.l_box));
    std::vector<EnergyRecord> recs;
    RecordBuilder build(cfg);
    simulate(u0, cfg, [&](const Snapshot& s) { recs.push_back(build(s)); });
    return recs;
  }

  std::mutex mu_;
  std::vector<std::vector<EnergyRecord>> shared_;
  std::optional<std::vector<Snapshot>> tg_;
  std::optional<std::vector<Snapshot>> weak_;
};

namespace {

CriterionResult c1_spectral(SuiteContext& ctx) {
  CriterionResult r = titled(1, "spectral infrastructure");
  const auto g = Grid::build(32, 2.0 * kPi);
  std::mt19937_64 rng(ctx.opts.seed + 1);
  double round_trip = 0.0, plancherel = 0.0, idempotent = 0.0, adjoint = 0.0;
  for (int f = 0; f < 100; ++f) {
    const RealVectorField u = random_physical(g, rng);
    const SpectralVectorField c = transform_forward(u);
    const RealVectorField back = transform_inverse(c);
    double err = 0.0, ref = 0.0;
    for (int k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < g->size(); ++i) {
        err += std::pow(back.samples[k][i] - u.samples[k][i], 2);
        ref += u.samples[k][i] * u.samples[k][i];
      }
    round_trip = std::max(round_trip, std::sqrt(err / ref));
    const double physical = ref * std::pow(g->dx(), 3);
    plancherel = std::max(plancherel, rel(std::abs(l2_norm_squared(c) - physical), physical));

    const SpectralVectorField p = leray_project(c);
    idempotent = std::max(idempotent, rel(l2_distance(leray_project(p), p), std::sqrt(l2_norm_squared(p))));
    const SpectralVectorField d = transform_forward(random_physical(g, rng));
    const double scale = std::sqrt(l2_norm_squared(c) * l2_norm_squared(d));
    adjoint = std::max(adjoint, std::abs(l2_inner(p, d) - l2_inner(c, leray_project(d))) / scale);
  }
  r.metrics = {{"round_trip", round_trip}, {"plancherel", plancherel},
               {"leray_idempotent", idempotent}, {"leray_self_adjoint", adjoint}};
  r.pass = round_trip <= 1e-12 && plancherel <= 1e-12 && idempotent <= 1e-12 && adjoint <= 1e-12;
  r.detail = "round_trip=" + fmt(round_trip) + " plancherel=" + fmt(plancherel) +
             " idempotent=" + fmt(idempotent) + " self_adjoint=" + fmt(adjoint) + " (tol 1e-12)";
  return r;
}

CriterionResult c2_decomposition(SuiteContext& ctx) {
  CriterionResult r = titled(2, "decomposition exactness");
  const auto g = Grid::build(32, 8.0 * kPi);
  std::vector<MultiIndex> betas;
  for (int m = 0; m <= 2; ++m)
    for (const auto& b : multi_indices_of_order(m)) betas.push_back(b);
  double split = 0.0, bernstein = -std::numeric_limits<double>::infinity();
  for (int f = 0; f < 100; ++f) {
    const auto w = generate(random_spec(ctx.opts.seed + 1000 + f, 1.0, 0.0), g);
    for (double scale : {1.0, 0.5}) {
      const Decomposition d = decompose(w, kSharedAlpha, scale);
      const double e = l2_norm_squared(w);
      split = std::max(split, rel(std::abs(e - l2_norm_squared(d.low) - l2_norm_squared(d.tilde)), e));
      for (const auto& b : betas) {
        const double hi = std::sqrt(l2_norm_squared(spectral_derivative(d.high, b)));
        const double ti = std::sqrt(l2_norm_squared(spectral_derivative(d.tilde, b)));
        bernstein = std::max(bernstein, hi - ti);
      }
    }
  }
  r.metrics = {{"split_rel", split}, {"max_high_minus_tilde", bernstein}};
  r.pass = split <= 1e-10 && bernstein <= 1e-12;
  r.detail = "split=" + fmt(split) + " (tol 1e-10) max(|D high|-|D tilde|)=" + fmt(bernstein) +
             " (slack 1e-12)";
  return r;
}

CriterionResult c3_signs(SuiteContext& ctx) {
  CriterionResult r = titled(3, "flux and integrand signs");
  const auto g = Grid::build(kSharedN, kSharedBox);
  double worst_flux = -std::numeric_limits<double>::infinity();
  double worst_a = worst_flux, worst_b = worst_flux;
  std::size_t shells = 0;
  const CutoffProfile phi = CutoffProfile::phi(), omp = CutoffProfile::one_minus_phi();
  for (int f = 0; f < 20; ++f) {
    const auto w = generate(random_spec(ctx.opts.seed + 2000 + f, 1.0, 0.0), g);
    for (double scale : {1.0, 0.5}) {
      const double fp = dilation_flux(w, phi, scale), fo = dilation_flux(w, omp, scale);
      worst_flux = std::max({worst_flux, fp, -fo});
      for (double alpha : {0.02, 0.06, 0.1})
        worst_flux = std::max(worst_flux, dilation_flux(w, CutoffProfile::chi(alpha), scale));
    }
  }
  for (double alpha : {0.02, 0.06, 0.1})
    for (double scale : {1.0, 0.5}) {
      const ShellScan s = scan_sign_integrands(*g, alpha, scale);
      worst_a = std::max(worst_a, s.max_a);
      worst_b = std::max(worst_b, s.max_b);
      shells += s.shells_a + s.shells_b;
    }
  r.metrics = {{"max_signed_flux", worst_flux}, {"max_a", worst_a}, {"max_b", worst_b},
               {"shells", static_cast<double>(shells)}};
  r.pass = worst_flux <= 0.0 && worst_a <= 0.0 && worst_b <= 0.0 && shells > 0;
  r.detail = "max signed flux=" + fmt(worst_flux) + " max A=" + fmt(worst_a) + " max B=" +
             fmt(worst_b) + " over " + std::to_string(shells) + " shells";
  return r;
}

CriterionResult c4_taylor_green(SuiteContext& ctx) {
  CriterionResult r = titled(4, "Taylor-Green exact decay");
  const auto& snaps = ctx.taylor_green();
  const SpectralVectorField& u0 = snaps.front().u_hat;
  const double ref = std::sqrt(l2_norm_squared(u0));
  double worst = 0.0, t_last = 0.0;
  for (const auto& s : snaps) {
    const double t = s.frame.t;
    worst = std::max(worst, l2_distance(s.u_hat, std::exp(-2.0 * t) * u0) / (std::exp(-2.0 * t) * ref));
    t_last = std::max(t_last, t);
  }
  r.metrics = {{"max_rel_error", worst}, {"t_final", t_last},
               {"samples", static_cast<double>(snaps.size())}};
  r.pass = worst <= 1e-6 && std::abs(t_last - 1.0) < 1e-12;
  r.detail = "max rel error=" + fmt(worst) + " over t in [0," + fmt(t_last) + "] (tol 1e-6)";
  return r;
}

CriterionResult c5_identities(SuiteContext& ctx) {
  CriterionResult r = titled(5, "identity suite");
  const auto& runs = ctx.shared(3);
  const CheckOptions opts = shared_options(ctx.opts.tolerance_scale);
  const char* names[] = {"eq3.7-identity", "eq3.21-chi", "lemma2.1", "lemma2.2-grad", "lemma2.2-lap"};
  bool ok = true;
  std::ostringstream os;
  for (const char* name : names) {
    double worst_ratio = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
      const CheckResult c = check_inequality(name, upto(runs[s], 3.0), opts);
      if (c.reports.empty()) ok = false;
      for (const auto& rep : c.reports) {
        ok = ok && rep.pass;
        worst_ratio = std::max(worst_ratio, rep.residual / rep.tolerance);
      }
    }
    r.metrics[std::string(name) + ".residual_over_tol"] = worst_ratio;
    os << name << "=" << fmt(worst_ratio) << " ";
  }
  r.pass = ok;
  r.detail = "max residual/tolerance: " + os.str();
  return r;
}

CriterionResult c6_decay(SuiteContext& ctx) {
  CriterionResult r = titled(6, "decay suite");
  const auto& runs = ctx.shared(3);
  const CheckOptions opts = shared_options(ctx.opts.tolerance_scale);
  double min_combined = std::numeric_limits<double>::infinity(), min_lap = min_combined;
  for (std::size_t s = 0; s < 3; ++s) {
    min_combined = std::min(min_combined, *check_inequality("prop3.2-decay", runs[s], opts).fitted_rate);
    min_lap = std::min(min_lap, *check_inequality("lemma4.3", runs[s], opts).fitted_rate);
  }
  r.metrics = {{"min_rate_combined", min_combined}, {"min_rate_laplacian", min_lap}};
  r.pass = min_combined >= kSharedAlpha && min_lap >= 1.3;
  r.detail = "rate(chi+tilde)=" + fmt(min_combined) + " (>= 0.1) rate(|Lap w|^2)=" + fmt(min_lap) +
             " (>= 1.3)";
  return r;
}

CriterionResult c7_blowup_ratio(SuiteContext& ctx) {
  CriterionResult r = titled(7, "blow-up rate ratio");
  const auto& runs = ctx.shared(kSharedSeeds);
  bool monotone = true;
  double worst_ratio = 0.0;
  for (std::size_t s = 0; s < kSharedSeeds; ++s) {
    const auto& recs = runs[s];
    const double initial = recs.front().sup_norm_w;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& rec : recs) {
      if (rec.tau < 1.0 - 1e-12) continue;
      monotone = monotone && rec.sup_norm_w < prev;
      prev = rec.sup_norm_w;
    }
    worst_ratio = std::max(worst_ratio, recs.back().sup_norm_w / initial);
  }
  r.metrics = {{"max_final_over_initial", worst_ratio}, {"monotone", monotone ? 1.0 : 0.0}};
  r.pass = monotone && worst_ratio < 0.1;
  r.detail = std::string("strictly decreasing on tau >= 1: ") + (monotone ? "yes" : "no") +
             " max final/initial=" + fmt(worst_ratio) + " (< 0.1)";
  return r;
}

CriterionResult c8_scaling(SuiteContext& ctx) {
  CriterionResult r = titled(8, "scaling symmetry");
  constexpr int lambda = 2;
  // Original on n = 32; the rescaled field lives on n = 64 over the same box.
  TrajectoryConfig base;
  base.n = 32;
  base.l_box = 8.0 * kPi;
  base.t_horizon = 1.0;
  base.delta = 0.3;
  base.sample_taus = uniform_taus(0.0, 2.0, 0.1);
  const auto gn = Grid::build(base.n, base.l_box);
  const auto g2n = Grid::build(2 * base.n, base.l_box);
  const Trajectory a = simulate(generate(random_spec(ctx.opts.seed + 300, base.delta), gn), base);

  TrajectoryConfig scaled = base;
  scaled.n = 2 * base.n;
  scaled.t_horizon = base.t_horizon / (lambda * lambda);
  scaled.dt_max = base.dt_max / (lambda * lambda);
  scaled.normalize = false;
  for (auto& tau : scaled.sample_taus) tau += std::log(double(lambda * lambda));
  const Trajectory b = simulate(rescale_data(a.snapshots.front().u_hat, lambda, g2n), scaled);

  double worst = 0.0;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    const SpectralVectorField expect = rescale_data(a.snapshots[i].u_hat, lambda, g2n);
    worst = std::max(worst, l2_distance(b.snapshots[i].u_hat, expect) /
                                std::sqrt(l2_norm_squared(expect)));
  }
  r.metrics = {{"max_rel_error", worst}, {"snapshots", static_cast<double>(a.snapshots.size())}};
  r.pass = worst <= 1e-6 && a.snapshots.size() == b.snapshots.size();
  r.detail = "lambda=2 max rel covariance error=" + fmt(worst) + " over " +
             std::to_string(a.snapshots.size()) + " snapshots (tol 1e-6)";
  return r;
}

CriterionResult c9_weak_form(SuiteContext& ctx) {
  CriterionResult r = titled(9, "weak-form residual");
  const std::pair<double, double> windows[] = {
      {0.02, 0.98}, {0.1, 0.7}, {0.25, 0.95}, {0.05, 0.5}, {0.4, 0.99}};
  double worst = 0.0;
  auto run = [&](const std::vector<Snapshot>& snaps, double xi_max, std::uint64_t seed0,
                 const char* label) {
    const double t0 = snaps.front().frame.t, t1 = snaps.back().frame.t;
    for (int f = 0; f < 5; ++f) {
      WeakTestField test{generate(random_spec(seed0 + f, 1.0, xi_max), snaps.front().u_hat.grid)};
      test.t_a = t0 + windows[f].first * (t1 - t0);
      test.t_b = t0 + windows[f].second * (t1 - t0);
      const WeakResidual w = weak_residual(snaps, test);
      r.metrics[std::string(label) + ".field" + std::to_string(f)] = w.normalized;
      worst = std::max(worst, w.normalized);
    }
  };
  run(ctx.taylor_green(), 0.0, ctx.opts.seed + 400, "taylor_green");
  run(ctx.weak_random(), 1.7, ctx.opts.seed + 500, "random");
  r.metrics["max_normalized"] = worst;
  r.pass = worst <= 1e-4;
  r.detail = "max normalized residual=" + fmt(worst) + " over 10 test fields (tol 1e-4)";
  return r;
}

CriterionResult c10_trapping(SuiteContext& ctx) {
  CriterionResult r = titled(10, "comparison trapping");
  const DrawStatistics s = random_trapping_draws(1000, ctx.opts.seed + 600, 50.0);
  const struct {
    double B, cdelta, expect;
  } worked[] = {{1.0, 0.09, 0.1}, {1.0, 0.0, 0.0}, {2.0, 0.75, 0.5}};
  double worst = 0.0;
  for (const auto& w : worked) {
    ComparisonParams p;
    p.B = w.B;
    p.C = 1.0;
    p.delta = w.cdelta;
    worst = std::max(worst, std::abs(h_minus(p) - w.expect));
  }
  r.metrics = {{"trapped", double(s.trapped)}, {"escaped", double(s.escaped)},
               {"vacuous", double(s.vacuous)}, {"max_overshoot", s.max_overshoot},
               {"worked_error", worst}};
  r.pass = s.trapped == 1000 && worst <= 1e-12;
  r.detail = std::to_string(s.trapped) + "/1000 trapped, worked h_minus error=" + fmt(worst) +
             " (tol 1e-12)";
  return r;
}

CriterionResult c11_constants(SuiteContext& ctx) {
  CriterionResult r = titled(11, "empirical constant stability");
  const auto& runs = ctx.shared(kSharedSeeds);
  const CheckOptions opts = shared_options(ctx.opts.tolerance_scale);
  std::vector<double> cs;
  for (std::size_t s = 0; s < kSharedSeeds; ++s) {
    cs.push_back(check_inequality("eq3.10", runs[s], opts).extras.at("C_emp"));
    r.metrics["C_emp.seed" + std::to_string(ctx.opts.seed + s)] = cs.back();
  }
  double mean = 0.0;
  for (double c : cs) mean += c / cs.size();
  double spread = 0.0;
  for (double c : cs) spread = std::max(spread, std::abs(c - mean));
  const double rel_spread = mean != 0.0 ? spread / std::abs(mean) : std::numeric_limits<double>::infinity();
  r.metrics["mean"] = mean;
  r.metrics["max_rel_deviation"] = rel_spread;
  r.pass = rel_spread <= 0.2;
  r.detail = "C_emp mean=" + fmt(mean) + " max rel deviation=" + fmt(rel_spread) + " (<= 0.2)";
  return r;
}

using CriterionFn = CriterionResult (*)(SuiteContext&);
constexpr CriterionFn kCriteria[] = {c1_spectral,    c2_decomposition, c3_signs,
                                     c4_taylor_green, c5_identities,   c6_decay,
                                     c7_blowup_ratio, c8_scaling,      c9_weak_form,
                                     c10_trapping,    c11_constants};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"identities", "decay", "ode", "scaling", "weakform", "all"};
  return names;
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "identities") return {1, 2, 3, 5};
  if (suite == "decay") return {6, 7, 11};
  if (suite == "ode") return {10};
  if (suite == "scaling") return {8};
  if (suite == "weakform") return {4, 9};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  throw ConfigError("unknown suite: " + suite);
}

CriteriaRunner::CriteriaRunner(SuiteOptions opts) : ctx_(new SuiteContext(std::move(opts))) {}
CriteriaRunner::~CriteriaRunner() { delete ctx_; }

CriterionResult CriteriaRunner::run(int id) {
  if (id < 1 || id > 11) throw ConfigError("criterion id out of range");
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = kCriteria[id - 1](*ctx_);
  } catch (const std::exception& e) {
    r.id = id;
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string format_criterion(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%s] criterion %2d ", r.pass ? "PASS" : "FAIL", r.id);
  std::snprintf(buf + std::strlen(buf), sizeof buf - std::strlen(buf), "(%.1fs) ", r.seconds);
  return std::string(buf) + r.title + ": " + r.detail;
}

int run_suite(const std::string& name, const SuiteOptions& opts, std::ostream& log) {
  std::vector<int> ids;
  try {
    ids = suite_criteria(name);
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  }
  CriteriaRunner runner(opts);
  nlohmann::ordered_json verdict;
  verdict["suite"] = name;
  verdict["seed"] = opts.seed;
  verdict["criteria"] = nlohmann::ordered_json::array();
  bool all = true;
  for (int id : ids) {
    const CriterionResult r = runner.run(id);
    log << format_criterion(r) << std::endl;
    all = all && r.pass;
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["title"] = r.title;
    j["pass"] = r.pass;
    j["seconds"] = r.seconds;
    j["detail"] = r.detail;
    j["metrics"] = r.metrics;
    verdict["criteria"].push_back(j);
  }
  verdict["pass"] = all;
  std::filesystem::create_directories(opts.out_dir);
  std::ofstream os(std::filesystem::path(opts.out_dir) / ("suite_" + name + ".json"));
  os << verdict.dump(2) << "\n";
  return all ? kExitPass : kExitCheckFailure;
}

}  // namespace nsledger
