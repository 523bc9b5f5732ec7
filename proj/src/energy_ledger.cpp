#include "nsledger/energy_ledger.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <tuple>

#include "nsledger/cutoffs.hpp"

namespace nsledger {

const std::vector<RecordField>& record_fields() {
  static const std::vector<RecordField> fields = {
      {"tau", &EnergyRecord::tau},
      {"E0", &EnergyRecord::E0},
      {"E1", &EnergyRecord::E1},
      {"E2", &EnergyRecord::E2},
      {"E3", &EnergyRecord::E3},
      {"E0_low_chi", &EnergyRecord::E0_low_chi},
      {"E0_tilde", &EnergyRecord::E0_tilde},
      {"E0_low", &EnergyRecord::E0_low},
      {"E1_high", &EnergyRecord::E1_high},
      {"E2_high", &EnergyRecord::E2_high},
      {"T_grad", &EnergyRecord::T_grad},
      {"T_lap", &EnergyRecord::T_lap},
      {"T_low", &EnergyRecord::T_low},
      {"T_chi", &EnergyRecord::T_chi},
      {"flux_phi", &EnergyRecord::flux_phi},
      {"flux_chi", &EnergyRecord::flux_chi},
      {"flux_one_minus_phi", &EnergyRecord::flux_one_minus_phi},
      {"sup_norm_w", &EnergyRecord::sup_norm_w},
      {"t", &EnergyRecord::t},
      {"scale", &EnergyRecord::scale},
      {"E0_high", &EnergyRecord::E0_high},
      {"E1_low", &EnergyRecord::E1_low},
      {"E1_low_chi", &EnergyRecord::E1_low_chi},
      {"E1_tilde", &EnergyRecord::E1_tilde},
      {"T_high_grad", &EnergyRecord::T_high_grad},
      {"flux_high_grad", &EnergyRecord::flux_high_grad},
      {"a_term", &EnergyRecord::a_term},
      {"b_term", &EnergyRecord::b_term},
      {"tilde_gap", &EnergyRecord::tilde_gap},
      {"sup_low_w", &EnergyRecord::sup_low_w},
      {"sup_low_grad", &EnergyRecord::sup_low_grad},
      {"l4_low_w", &EnergyRecord::l4_low_w},
      {"tail_fraction", &EnergyRecord::tail_fraction},
  };
  return fields;
}

EnergyRecord compute_record(const Snapshot& snap, double alpha, double tail_threshold,
                            const std::vector<double>& frozen_scales) {
  require_alpha(alpha);
  const SpectralVectorField& u = snap.u_hat;
  const Grid& g = *u.grid;
  const double s = snap.frame.scale;
  const auto phi = CutoffProfile::phi();
  const auto omp = CutoffProfile::one_minus_phi();
  const auto chi = CutoffProfile::chi(alpha);

  const SpectralVectorField nl = nonlinear_term(u);

  if (!frozen_scales.empty() && frozen_scales.size() != 2 * kFrozenHalf + 1)
    throw ConfigError("frozen scale list has the wrong length");
  EnergyRecord rec;
  rec.chi_frozen.assign(frozen_scales.size(), 0.0);
  rec.tau = snap.frame.tau;
  rec.t = snap.frame.t;
  rec.scale = s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double e = 0.0, p = 0.0;
    for (int c = 0; c < 3; ++c) {
      const cplx a = u.coeffs[c][i], b = nl.coeffs[c][i];
      e += std::norm(a);
      p += a.real() * b.real() + a.imag() * b.imag();
    }
    if (e == 0.0) continue;
    const double r = s * g.xi_norm(i);
    const double r2 = r * r, r4 = r2 * r2;
    const double f = phi.value(r), h = omp.value(r), x = chi.value(r);
    const double f2 = f * f, h2 = h * h, x2 = x * x;
    const double t2 = h * (1.0 + f);  // 1 - phi^2
    const double dh = omp.dilation_density(r);

    rec.E0 += e;
    rec.E1 += r2 * e;
    rec.E2 += r4 * e;
    rec.E3 += r4 * r2 * e;
    rec.E0_low_chi += x2 * e;
    rec.E0_tilde += t2 * e;
    rec.E0_low += f2 * e;
    rec.E0_high += h2 * e;
    rec.E1_high += h2 * r2 * e;
    rec.E2_high += h2 * r4 * e;
    rec.E1_low += f2 * r2 * e;
    rec.E1_low_chi += x2 * r2 * e;
    rec.E1_tilde += t2 * r2 * e;

    rec.T_grad += r2 * p;
    rec.T_lap += r4 * p;
    rec.T_low += f2 * p;
    rec.T_chi += x2 * p;
    rec.T_high_grad += h2 * r2 * p;

    rec.flux_phi += phi.dilation_density(r) * e;
    rec.flux_chi += chi.dilation_density(r) * e;
    rec.flux_one_minus_phi += dh * e;
    rec.flux_high_grad += dh * r2 * e;

    if (r <= 1.0) rec.a_term += a_integrand(r, alpha) * e;
    else if (r <= 2.0) rec.b_term += b_integrand(r, alpha) * e;
    rec.tilde_gap += 0.25 * (1.0 - r2) * t2 * e;

    for (std::size_t q = 0; q < frozen_scales.size(); ++q) {
      if (std::isnan(frozen_scales[q])) continue;
      const double xq = chi.value(frozen_scales[q] * g.xi_norm(i));
      rec.chi_frozen[q] += xq * xq * e;
    }
  }
  for (std::size_t q = 0; q < frozen_scales.size(); ++q)
    rec.chi_frozen[q] = std::isnan(frozen_scales[q]) ? std::numeric_limits<double>::quiet_NaN()
                                                     : rec.chi_frozen[q] / frozen_scales[q];
  const double inv_s = 1.0 / s;
  for (double EnergyRecord::*m :
       {&EnergyRecord::E0, &EnergyRecord::E1, &EnergyRecord::E2, &EnergyRecord::E3,
        &EnergyRecord::E0_low_chi, &EnergyRecord::E0_tilde, &EnergyRecord::E0_low,
        &EnergyRecord::E0_high, &EnergyRecord::E1_high, &EnergyRecord::E2_high,
        &EnergyRecord::E1_low, &EnergyRecord::E1_low_chi, &EnergyRecord::E1_tilde,
        &EnergyRecord::flux_phi, &EnergyRecord::flux_chi, &EnergyRecord::flux_one_minus_phi,
        &EnergyRecord::flux_high_grad, &EnergyRecord::a_term, &EnergyRecord::b_term,
        &EnergyRecord::tilde_gap})
    rec.*m *= inv_s;
  for (double EnergyRecord::*m : {&EnergyRecord::T_grad, &EnergyRecord::T_lap, &EnergyRecord::T_low,
                                  &EnergyRecord::T_chi, &EnergyRecord::T_high_grad})
    rec.*m *= s;

  // Physical-space norms: w(y) = s u(s y), grad w(y) = s^2 (grad u)(s y).
  rec.sup_norm_w = s * transform_inverse(u).max_magnitude();
  const SpectralVectorField low = apply_profile(u, phi, s);
  const RealVectorField lp = transform_inverse(low);
  rec.sup_low_w = s * lp.max_magnitude();
  double l4 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double m2 = lp.samples[0][i] * lp.samples[0][i] + lp.samples[1][i] * lp.samples[1][i] +
                      lp.samples[2][i] * lp.samples[2][i];
    l4 += m2 * m2;
  }
  l4 *= g.dx() * g.dx() * g.dx();
  rec.l4_low_w = std::pow(s * l4, 0.25);  // int |w|^4 dy = s int |u|^4 dx
  std::vector<double> grad2(g.size(), 0.0);
  for (int j = 0; j < 3; ++j) {
    MultiIndex beta{0, 0, 0};
    beta[j] = 1;
    const RealVectorField d = transform_inverse(spectral_derivative(low, beta));
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < g.size(); ++i) grad2[i] += d.samples[c][i] * d.samples[c][i];
  }
  rec.sup_low_grad = s * s * std::sqrt(*std::max_element(grad2.begin(), grad2.end()));

  rec.tail_fraction = spectral_tail_fraction(u);
  rec.resolved = rec.tail_fraction <= tail_threshold;
  return rec;
}

std::vector<double> neighbour_scales(const std::vector<double>& taus, std::size_t i,
                                     double t_horizon) {
  std::vector<double> out(2 * kFrozenHalf + 1, std::numeric_limits<double>::quiet_NaN());
  for (int o = -kFrozenHalf; o <= kFrozenHalf; ++o) {
    const long j = static_cast<long>(i) + o;
    if (j >= 0 && j < static_cast<long>(taus.size()))
      out[o + kFrozenHalf] = frame_at_tau(taus[j], t_horizon).scale;
  }
  return out;
}

std::vector<EnergyRecord> compute_records(const std::vector<Snapshot>& snaps, double alpha,
                                          double tail_threshold) {
  std::vector<double> taus;
  for (const auto& s : snaps) taus.push_back(s.frame.tau);
  std::vector<EnergyRecord> out;
  out.reserve(snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i)
    out.push_back(compute_record(snaps[i], alpha, tail_threshold,
                                 neighbour_scales(taus, i, snaps[i].frame.t_horizon)));
  return out;
}

EnergyRecord RecordBuilder::operator()(const Snapshot& snap) {
  if (next_ >= taus_.size() || std::abs(snap.frame.tau - taus_[next_]) > 1e-9 * (1.0 + std::abs(taus_[next_])))
    throw ConfigError("snapshot does not match the next sample tau");
  return compute_record(snap, alpha_, tail_threshold_, neighbour_scales(taus_, next_++, horizon_));
}

Series series_of(const std::vector<EnergyRecord>& recs, double EnergyRecord::*member) {
  Series out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.emplace_back(r.tau, r.*member);
  return out;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
  const std::size_t n = x.size();
  if (n == 0 || m < 0 || static_cast<std::size_t>(m) >= n)
    throw ConfigError("finite-difference stencil too small for the derivative order");
  // Fornberg's recursion.
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c[m];
}

Series rate_estimate(const Series& series, int order) {
  const std::size_t n = series.size();
  if (n < 3) throw ConfigError("rate estimate needs at least 3 samples");
  if (order < 2 || order % 2 != 0) throw ConfigError("rate estimate order must be even and >= 2");
  for (std::size_t i = 1; i < n; ++i)
    if (!(series[i].first > series[i - 1].first)) throw ConfigError("tau must increase strictly");
  const std::size_t width = std::min<std::size_t>(order + 1, n);
  const std::size_t half = width / 2;
  Series out(n);
  std::vector<double> nodes(width);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i >= half ? i - half : 0;
    if (lo + width > n) lo = n - width;
    for (std::size_t j = 0; j < width; ++j) nodes[j] = series[lo + j].first;
    const auto w = fd_weights(series[i].first, nodes, 1);
    double d = 0.0;
    for (std::size_t j = 0; j < width; ++j) d += w[j] * series[lo + j].second;
    out[i] = {series[i].first, d};
  }
  return out;
}

std::pair<std::size_t, std::size_t> interior_range(std::size_t count, int order) {
  const std::size_t half = static_cast<std::size_t>(order / 2);
  if (count < 2 * half + 1) return {1, 0};
  return {half, count - 1 - half};
}

double fit_decay_rate(const Series& series, double tau_min, double tau_max) {
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t m = 0;
  for (const auto& [tau, v] : series) {
    if (tau < tau_min - 1e-12 || tau > tau_max + 1e-12) continue;
    if (!(v > 0.0)) throw NumericalError("decay fit needs positive values");
    const double y = -std::log(v);
    st += tau;
    sy += y;
    stt += tau * tau;
    sty += tau * y;
    ++m;
  }
  if (m < 2) throw NumericalError("decay fit needs at least two samples in the window");
  const double den = m * stt - st * st;
  return (m * sty - st * sy) / den;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "lemma2.1",      "lemma2.2-grad",     "lemma2.2-lap", "eq3.7-identity",
      "eq3.21-chi",    "eq3.9-identity",    "eq3.10",       "prop3.2-decay",
      "prop3.2-monotone", "eq4.4",          "lemma4.2",     "lemma4.3",
      "eq3.13-3.14",   "flux-signs",        "plancherel-split"};
  return names;
}

namespace {

using Recs = std::vector<EnergyRecord>;

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> rates(const Recs& recs, double EnergyRecord::*member, int order) {
  const Series r = rate_estimate(series_of(recs, member), order);
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i].second;
  return out;
}

// d/dtau E0_low_chi: frozen-scale differences of the trajectory plus the exact
// scale derivative (E - flux)/2, falling back to plain differences where the
// frozen values are unavailable.
std::vector<double> chi_rates(const Recs& recs, int order) {
  std::vector<double> out = rates(recs, &EnergyRecord::E0_low_chi, order);
  const int half = order / 2;
  if (half > kFrozenHalf) return out;
  std::vector<double> nodes(2 * half + 1);
  for (std::size_t i = half; i + half < recs.size(); ++i) {
    double fd = 0.0;
    bool ok = true;
    for (int o = -half; o <= half; ++o) {
      const auto& f = recs[i + o].chi_frozen;
      if (f.size() != 2 * kFrozenHalf + 1 || std::isnan(f[kFrozenHalf - o])) ok = false;
      nodes[o + half] = recs[i + o].tau;
    }
    if (!ok) continue;
    const auto w = fd_weights(recs[i].tau, nodes, 1);
    for (int o = -half; o <= half; ++o) fd += w[o + half] * recs[i + o].chi_frozen[kFrozenHalf - o];
    out[i] = fd + 0.5 * (recs[i].E0_low_chi - recs[i].flux_chi);
  }
  return out;
}

std::vector<double> combined_rates(const Recs& recs, int order) {
  std::vector<double> out = chi_rates(recs, order);
  const auto tilde = rates(recs, &EnergyRecord::E0_tilde, order);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += tilde[i];
  return out;
}

struct Ctx {
  const Recs& recs;
  const CheckOptions& opts;
  double tol(double scale) const {
    return std::max(opts.identity_rel * scale, opts.identity_abs) * opts.tolerance_scale;
  }
};

InequalityReport make(const std::string& name, double tau, double lhs, double rhs, double residual,
                      double tol) {
  InequalityReport r;
  r.name = name;
  r.tau = tau;
  r.lhs_rate = lhs;
  r.rhs_bound = rhs;
  r.residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;
  return r;
}

// Equality check lhs == rhs at interior samples; terms feed the tolerance scale.
template <class F>
void equality(CheckResult& out, const Ctx& c, F&& terms) {
  const auto [lo, hi] = interior_range(c.recs.size(), c.opts.fd_order);
  for (std::size_t i = lo; i <= hi && hi >= lo; ++i) {
    const auto [lhs, rhs, scale] = terms(i);
    out.reports.push_back(
        make(out.name, c.recs[i].tau, lhs, rhs, std::abs(lhs - rhs), c.tol(scale)));
  }
}

double combined(const EnergyRecord& r) { return r.E0_low_chi + r.E0_tilde; }

Series combined_series(const Recs& recs) {
  Series s;
  for (const auto& r : recs) s.emplace_back(r.tau, combined(r));
  return s;
}

bool all_zero(const Series& s, double tau_min, double tau_max) {
  for (const auto& [tau, v] : s)
    if (tau >= tau_min - 1e-12 && tau <= tau_max + 1e-12 && v != 0.0) return false;
  return true;
}

void decay_fit(CheckResult& out, const Ctx& c, const Series& s, double threshold) {
  const double rate = all_zero(s, c.opts.decay_tau_min, c.opts.decay_tau_max)
                          ? std::numeric_limits<double>::infinity()
                          : fit_decay_rate(s, c.opts.decay_tau_min, c.opts.decay_tau_max);
  out.fitted_rate = rate;
  out.reports.push_back(make(out.name, c.opts.decay_tau_max, rate, threshold, threshold - rate, 0.0));
}

}  // namespace

CheckResult check_inequality(const std::string& name, const Recs& recs, const CheckOptions& opts) {
  if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
    throw ConfigError("unknown check: " + name);
  if (recs.size() < 5) throw ConfigError("checks need at least 5 samples");
  CheckResult out;
  out.name = name;
  const Ctx c{recs, opts};
  const int order = opts.fd_order;
  const double alpha = opts.alpha;

  if (name == "lemma2.1") {
    const auto d = rates(recs, &EnergyRecord::E0, order);
    equality(out, c, [&](std::size_t i) {
      const auto& r = recs[i];
      return std::tuple{0.5 * d[i], 0.25 * r.E0 - r.E1, max_abs({0.5 * d[i], 0.25 * r.E0, r.E1})};
    });
  } else if (name == "lemma2.2-grad") {
    const auto d = rates(recs, &EnergyRecord::E1, order);
    equality(out, c, [&](std::size_t i) {
      const auto& r = recs[i];
      return std::tuple{d[i], -2.0 * r.E2 - 0.5 * r.E1 - 2.0 * r.T_grad,
                        max_abs({d[i], 2.0 * r.E2, 0.5 * r.E1, 2.0 * r.T_grad})};
    });
  } else if (name == "lemma2.2-lap") {
    const auto d = rates(recs, &EnergyRecord::E2, order);
    equality(out, c, [&](std::size_t i) {
      const auto& r = recs[i];
      return std::tuple{d[i], -2.0 * r.E3 - 1.5 * r.E2 - 2.0 * r.T_lap,
                        max_abs({d[i], 2.0 * r.E3, 1.5 * r.E2, 2.0 * r.T_lap})};
    });
  } else if (name == "eq3.7-identity") {
    const auto d = rates(recs, &EnergyRecord::E0_low, order);
    equality(out, c, [&](std::size_t i) {
      const auto& r = recs[i];
      return std::tuple{0.5 * d[i], -r.E1_low + 0.25 * r.E0_low - 0.25 * r.flux_phi - r.T_low,
                        max_abs({0.5 * d[i], r.E1_low, 0.25 * r.E0_low, 0.25 * r.flux_phi, r.T_low})};
    });
  } else if (name == "eq3.21-chi") {
    const auto d = chi_rates(recs, order);
    equality(out, c, [&](std::size_t i) {
      const auto& r = recs[i];
      return std::tuple{0.5 * d[i],
                        -r.E1_low_chi + 0.25 * r.E0_low_chi - 0.25 * r.flux_chi - r.T_chi,
                        max_abs({0.5 * d[i], r.E1_low_chi, 0.25 * r.E0_low_chi,
                                 0.25 * r.flux_chi, r.T_chi})};
    });
  } else if (name == "eq3.9-identity") {
    const auto d = combined_rates(recs, order);
    equality(out, c, [&](std::size_t i) {
      const auto& r = recs[i];
      const double lhs = 0.5 * d[i];
      const double rhs = -0.75 * r.E1_tilde - alpha * r.E0_low_chi + (r.T_low - r.T_chi) +
                         r.a_term + r.b_term + r.tilde_gap;
      return std::tuple{lhs, rhs,
                        max_abs({lhs, 0.75 * r.E1_tilde, alpha * r.E0_low_chi, r.T_low, r.T_chi,
                                 r.a_term, r.b_term, r.tilde_gap})};
    });
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : recs) worst = std::max({worst, r.a_term, r.b_term, r.tilde_gap});
    out.extras["max_dropped_term"] = worst;
    // The dropped densities must be nonpositive at every sample.
    out.reports.push_back(make(name, recs.back().tau, worst, 0.0, worst, 0.0));
  } else if (name == "eq3.10") {
    const auto d = combined_rates(recs, order);
    const auto [lo, hi] = interior_range(recs.size(), order);
    double c_emp = -std::numeric_limits<double>::infinity(), c_cubic = 0.0;
    for (std::size_t i = lo; i <= hi && hi >= lo; ++i) {
      const auto& r = recs[i];
      const double s = combined(r);
      if (!(s > 0.0)) continue;
      const double lhs = 0.5 * d[i] + (0.75 - alpha) * r.E1_tilde;
      c_emp = std::max(c_emp, (lhs + alpha * s) / std::pow(s, 1.5));
      c_cubic = std::max(c_cubic, std::abs(r.T_low - r.T_chi) / std::pow(s, 1.5));
    }
    if (!std::isfinite(c_emp)) c_emp = 0.0;
    for (std::size_t i = lo; i <= hi && hi >= lo; ++i) {
      const auto& r = recs[i];
      const double s = combined(r);
      const double lhs = 0.5 * d[i] + (0.75 - alpha) * r.E1_tilde;
      const double rhs = -alpha * s + c_cubic * std::pow(s, 1.5);
      auto rep = make(name, r.tau, lhs, rhs, lhs - rhs,
                      c.tol(max_abs({0.5 * d[i], (0.75 - alpha) * r.E1_tilde, alpha * s,
                                     r.T_low, r.T_chi})));
      rep.empirical_constant = c_emp;
      out.reports.push_back(rep);
    }
    out.extras["C_emp"] = c_emp;
    out.extras["C_cubic"] = c_cubic;
  } else if (name == "prop3.2-decay") {
    decay_fit(out, c, combined_series(recs), alpha);
  } else if (name == "prop3.2-monotone") {
    for (std::size_t i = 1; i < recs.size(); ++i) {
      const double prev = combined(recs[i - 1]), cur = combined(recs[i]);
      out.reports.push_back(make(name, recs[i].tau, cur, prev, cur - prev, 0.0));
    }
  } else if (name == "eq4.4") {
    const auto d = rates(recs, &EnergyRecord::E1_high, order);
    const auto [lo, hi] = interior_range(recs.size(), order);
    double c_split = 0.0, identity_gap = 0.0;
    for (std::size_t i = lo; i <= hi && hi >= lo; ++i) {
      const auto& r = recs[i];
      const double lhs = 0.5 * d[i];
      const double rhs = -r.E2_high - 0.25 * r.E1_high + std::abs(r.T_high_grad);
      const double scale = max_abs({lhs, r.E2_high, 0.25 * r.E1_high, r.T_high_grad,
                                    0.25 * r.flux_high_grad});
      out.reports.push_back(make(name, r.tau, lhs, rhs, lhs - rhs, c.tol(scale)));
      const double exact =
          -0.25 * r.E1_high - r.E2_high - 0.25 * r.flux_high_grad - r.T_high_grad;
      identity_gap = std::max(identity_gap, std::abs(lhs - exact) / std::max(scale, 1e-300));
      // Split bounds of the cubic term through w = low + high.
      const double g1 = std::sqrt(r.E1_high), g2 = std::sqrt(r.E2_high);
      const double bound = std::pow(g2 * g1, 1.5) + r.sup_low_w * g2 * g1 +
                           r.sup_low_w * std::sqrt(r.E0_high) * g1 + r.l4_low_w * r.l4_low_w * g1;
      if (bound > 0.0) c_split = std::max(c_split, std::abs(r.T_high_grad) / bound);
    }
    for (auto& rep : out.reports) rep.empirical_constant = c_split;
    out.extras["C_split"] = c_split;
    out.extras["max_identity_residual_rel"] = identity_gap;
  } else if (name == "lemma4.2") {
    const auto d = rates(recs, &EnergyRecord::E1, order);
    const auto [lo, hi] = interior_range(recs.size(), order);
    double k = 0.0;
    for (std::size_t i = lo; i <= hi && hi >= lo; ++i)
      k = std::max(k, d[i] + recs[i].E2 + 0.5 * recs[i].E1);
    const double tau0 = recs.front().tau, e10 = recs.front().E1;
    for (const auto& r : recs) {
      const double decay = std::exp(-0.5 * (r.tau - tau0));
      const double rhs = decay * e10 + 2.0 * k * (1.0 - decay);
      auto rep = make(name, r.tau, r.E1, rhs, r.E1 - rhs, c.tol(max_abs({e10, r.E1})));
      rep.empirical_constant = k;
      out.reports.push_back(rep);
    }
    out.extras["C_delta1"] = k;
  } else if (name == "lemma4.3") {
    decay_fit(out, c, series_of(recs, &EnergyRecord::E2), 1.5 - opts.lemma43_margin);
  } else if (name == "eq3.13-3.14") {
    double worst_c = 0.0;
    const std::pair<const char*, double EnergyRecord::*> quantities[] = {
        {"beta0", &EnergyRecord::sup_low_w},
        {"beta1", &EnergyRecord::sup_low_grad},
        {"high_energy", &EnergyRecord::E0_high}};
    for (const auto& [label, member] : quantities) {
      double peak = 0.0;
      for (const auto& r : recs) peak = std::max(peak, r.*member);
      const double last = recs.back().*member;
      out.reports.push_back(make(name, recs.back().tau, last, 0.5 * peak, last - 0.5 * peak, 0.0));
      const double cb = opts.delta > 0.0 ? peak / opts.delta : 0.0;
      out.extras[std::string("C_") + label] = cb;
      if (label != std::string("high_energy")) worst_c = std::max(worst_c, cb);
    }
    // sup E0_high + int E1_high dtau, relative to delta.
    double peak = 0.0, integral = 0.0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      peak = std::max(peak, recs[i].E0_high);
      if (i + 1 < recs.size())
        integral += 0.5 * (recs[i + 1].tau - recs[i].tau) * (recs[i].E1_high + recs[i + 1].E1_high);
    }
    out.extras["C_high_budget"] = opts.delta > 0.0 ? (peak + integral) / opts.delta : 0.0;
    for (auto& rep : out.reports) rep.empirical_constant = worst_c;
  } else if (name == "flux-signs") {
    // chi grows on [0, 1/2 + alpha], so its flux has no fixed sign; it is reported only.
    double chi_max = -std::numeric_limits<double>::infinity();
    for (const auto& r : recs) {
      const double worst = std::max({r.flux_phi, -r.flux_one_minus_phi, -r.flux_high_grad});
      out.reports.push_back(make(name, r.tau, worst, 0.0, worst, 0.0));
      chi_max = std::max(chi_max, r.flux_chi);
    }
    out.extras["max_flux_chi"] = chi_max;
  } else if (name == "plancherel-split") {
    for (const auto& r : recs) {
      const double gap = std::abs(r.E0 - r.E0_low - r.E0_tilde);
      out.reports.push_back(make(name, r.tau, r.E0, r.E0_low + r.E0_tilde, gap,
                                 1e-10 * r.E0 * opts.tolerance_scale));
    }
  }
  return out;
}

CheckSummary summarize(const CheckResult& r) {
  CheckSummary s;
  s.name = r.name;
  s.samples = r.reports.size();
  s.fitted_rate = r.fitted_rate;
  s.extras = r.extras;
  s.max_residual = r.reports.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  double worst_margin = -std::numeric_limits<double>::infinity();
  for (const auto& rep : r.reports) {
    s.pass = s.pass && rep.pass;
    s.max_residual = std::max(s.max_residual, rep.residual);
    if (rep.residual - rep.tolerance > worst_margin) {
      worst_margin = rep.residual - rep.tolerance;
      s.tolerance = rep.tolerance;
    }
    if (rep.empirical_constant) s.empirical_constant = rep.empirical_constant;
  }
  return s;
}

void write_records_csv(std::ostream& os, const std::vector<EnergyRecord>& recs) {
  const auto& fields = record_fields();
  for (std::size_t j = 0; j < fields.size(); ++j) os << (j ? "," : "") << fields[j].name;
  os << ",resolved\n";
  char buf[32];
  for (const auto& r : recs) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", r.*(fields[j].member));
      os << (j ? "," : "") << buf;
    }
    os << "," << (r.resolved ? 1 : 0) << "\n";
  }
}

std::string report_json(const std::string& scenario, const std::vector<CheckSummary>& checks) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["checks"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json rates = nlohmann::ordered_json::object();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["samples"] = c.samples;
    e["max_residual"] = c.max_residual;
    e["tolerance"] = c.tolerance;
    e["empirical_constant"] =
        c.empirical_constant ? nlohmann::ordered_json(*c.empirical_constant) : nlohmann::ordered_json();
    e["pass"] = c.pass;
    if (!c.extras.empty()) e["extras"] = c.extras;
    j["checks"].push_back(e);
    if (c.fitted_rate) rates[c.name] = *c.fitted_rate;
  }
  j["fitted_rates"] = rates;
  return j.dump(2);
}

}  // namespace nsledger
