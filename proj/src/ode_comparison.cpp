#include "nsledger/ode_comparison.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nsledger/errors.hpp"

namespace nsledger {

double comparison_rhs(const ComparisonParams& p, double h) {
  const double h2 = h * h;
  return p.c_delta() - p.B * h + h2 * h2 * h;
}

double h_minus(const ComparisonParams& p) {
  const double disc = p.B * p.B - 4.0 * p.c_delta();
  if (disc < 0.0) throw NumericalError("quadratic majorant has no real root");
  // Rationalized form avoids cancellation for small C delta.
  const double root = std::sqrt(disc);
  const double big = 0.5 * (p.B + root);
  return big > 0.0 ? p.c_delta() / big : 0.0;
}

std::vector<std::pair<double, double>> integrate_h(const ComparisonParams& p, double horizon,
                                                   double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(p.h0 >= 0.0)) throw ConfigError("h0 must be nonnegative");
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-12));
  const double h_step = steps > 0 ? horizon / steps : 0.0;
  std::vector<std::pair<double, double>> out;
  out.reserve(steps + 1);
  double h = p.h0;
  out.emplace_back(0.0, h);
  for (std::size_t i = 0; i < steps; ++i) {
    const double k1 = comparison_rhs(p, h);
    const double k2 = comparison_rhs(p, h + 0.5 * h_step * k1);
    const double k3 = comparison_rhs(p, h + 0.5 * h_step * k2);
    const double k4 = comparison_rhs(p, h + h_step * k3);
    h += h_step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    if (!std::isfinite(h)) break;
    out.emplace_back((i + 1) * h_step, h);
  }
  return out;
}

const char* to_string(TrapVerdict v) {
  switch (v) {
    case TrapVerdict::trapped: return "trapped";
    case TrapVerdict::escaped: return "escaped";
    case TrapVerdict::vacuous: return "vacuous";
  }
  return "unknown";
}

TrappingResult trapping_check(const ComparisonParams& p, double horizon) {
  TrappingResult r;
  if (!(p.B > 0.0) || p.B * p.B < 4.0 * p.c_delta() || p.c_delta() < 0.0) return r;
  r.h_minus = h_minus(p);
  if (!(r.h_minus > 0.0 && r.h_minus < 1.0)) return r;
  if (!(p.h0 >= 0.0 && p.h0 <= r.h_minus)) return r;
  const auto traj = integrate_h(p, horizon, std::min(0.01, 0.5 / p.B));
  r.h_min = r.h_max = p.h0;
  for (const auto& [tau, h] : traj) {
    r.h_min = std::min(r.h_min, h);
    r.h_max = std::max(r.h_max, h);
  }
  r.h_final = traj.back().second;
  const bool ok = traj.back().first >= horizon * (1.0 - 1e-12) && r.h_min >= 0.0 &&
                  r.h_max <= r.h_minus + 1e-9;
  r.verdict = ok ? TrapVerdict::trapped : TrapVerdict::escaped;
  return r;
}

DrawStatistics random_trapping_draws(std::size_t count, std::uint64_t seed, double horizon) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DrawStatistics s;
  s.max_overshoot = -std::numeric_limits<double>::infinity();
  s.min_final_margin = std::numeric_limits<double>::infinity();
  while (s.draws < count) {
    ComparisonParams p;
    p.B = 0.05 + 2.95 * unit(rng);
    p.C = 0.1 + 9.9 * unit(rng);
    // C delta below B^2/4 keeps a real root; reject draws with h_minus >= 1.
    p.delta = unit(rng) * p.B * p.B / (4.0 * p.C);
    const double hm = h_minus(p);
    if (!(hm > 0.0 && hm < 1.0)) continue;
    p.h0 = unit(rng) * hm;
    const auto r = trapping_check(p, horizon);
    ++s.draws;
    switch (r.verdict) {
      case TrapVerdict::trapped: ++s.trapped; break;
      case TrapVerdict::escaped: ++s.escaped; break;
      case TrapVerdict::vacuous: ++s.vacuous; break;
    }
    if (r.verdict != TrapVerdict::vacuous) {
      s.max_overshoot = std::max(s.max_overshoot, r.h_max - r.h_minus);
      s.min_final_margin = std::min(s.min_final_margin, r.h_minus - r.h_final);
    }
  }
  return s;
}

std::string draw_statistics_json(const DrawStatistics& s) {
  nlohmann::ordered_json j;
  j["draws"] = s.draws;
  j["trapped"] = s.trapped;
  j["escaped"] = s.escaped;
  j["vacuous"] = s.vacuous;
  j["max_overshoot"] = s.max_overshoot;
  j["min_final_margin"] = s.min_final_margin;
  return j.dump(2);
}

double majorant_gap(const ComparisonParams& p, int points) {
  if (points < 2) throw ConfigError("majorant grid needs at least two points");
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double h = static_cast<double>(i) / (points - 1);
    worst = std::max(worst, comparison_rhs(p, h) - (p.c_delta() - p.B * h + h * h));
  }
  return worst;
}

}  // namespace nsledger
